"""Unit tests for the closed-form dyad evolution."""
import cmath
import math

import numpy as np
import pytest

from pumpedcat import (CavityParams, CoherentDyad, Frame, NegativeTime,
                       ThermalNotSupported, ZeroAmplitude, char_fn_normal,
                       char_fn_symmetric, coeff_u, coeff_w, coherent,
                       evolve_dyad, evolve_state, free_decoherence_time,
                       linear_entropy, linear_entropy_closed_form, make_cat,
                       mean_amplitude, overlap, parity_expectation, pump_lock,
                       purity, stationary_amplitude, to_lab_frame, trace)

GAMMA = 1.3
FREE = CavityParams(gamma=GAMMA)
PUMPED = CavityParams(gamma=GAMMA, pump_amp=0.8 - 0.2j)


def test_coeff_u_decay():
    for t in (0.0, 0.3, 2.0):
        assert coeff_u(t, FREE) == pytest.approx(math.exp(-0.5 * GAMMA * t),
                                                 abs=1e-16)


def test_coeff_u_lab_phase():
    params = CavityParams(gamma=GAMMA, omega0=4.0)
    t = 0.7
    expected = math.exp(-0.5 * GAMMA * t) * cmath.exp(-1j * params.omega0 * t)
    assert coeff_u(t, params, Frame.LAB) == pytest.approx(expected, abs=1e-15)


def test_coeff_w_resonant():
    """Resonant drive: w(t) = -(2iF/gamma)(1 - e^{-gamma t / 2})."""
    t = 0.9
    f = PUMPED.pump_amp
    expected = -2j * f / GAMMA * (1.0 - math.exp(-0.5 * GAMMA * t))
    assert coeff_w(t, PUMPED) == pytest.approx(expected, abs=1e-15)
    assert coeff_w(0.0, PUMPED) == 0.0


def test_coeff_w_long_time_limit():
    w_inf = coeff_w(100.0 / GAMMA, PUMPED)
    assert w_inf == pytest.approx(stationary_amplitude(PUMPED), abs=1e-14)


def test_stationary_amplitude_requires_resonance():
    detuned = CavityParams(gamma=GAMMA, pump_amp=1.0, pump_freq=0.5)
    with pytest.raises(ValueError):
        stationary_amplitude(detuned)


def test_evolve_dyad_trace_conservation():
    """c' <y'|x'> = c <y|x> for every dyad, exactly."""
    d = CoherentDyad(1.2 + 0.4j, -0.9 + 1.1j, 0.3 - 0.2j)
    for t in (0.1, 1.0, 4.0):
        d2 = evolve_dyad(d, t, PUMPED)
        before = d.coeff * overlap(d.ket, d.bra)
        after = d2.coeff * overlap(d2.ket, d2.bra)
        assert after == pytest.approx(before, abs=1e-15)


def test_evolve_dyad_label_map():
    d = CoherentDyad(1.0 + 1.0j, -2.0, 1.0)
    t = 0.6
    d2 = evolve_dyad(d, t, PUMPED)
    u = math.exp(-0.5 * GAMMA * t)
    w = coeff_w(t, PUMPED)
    assert d2.ket == pytest.approx(u * d.ket + w, abs=1e-15)
    assert d2.bra == pytest.approx(u * d.bra + w, abs=1e-15)


def test_evolution_is_a_semigroup():
    cat = make_cat(1.8, 0.0)
    one = evolve_state(evolve_state(cat, 0.4, PUMPED), 1.1, PUMPED)
    two = evolve_state(cat, 1.5, PUMPED)
    np.testing.assert_allclose(one.kets, two.kets, atol=1e-14)
    np.testing.assert_allclose(one.bras, two.bras, atol=1e-14)
    np.testing.assert_allclose(one.coeffs, two.coeffs, rtol=1e-12)
    assert one.time == pytest.approx(two.time)


def test_pump_lock_freezes_coherent_state():
    alpha = 2.0 + 0.5j
    locked = pump_lock(alpha, FREE)
    state = evolve_state(coherent(alpha), 3.0, locked)
    assert mean_amplitude(state) == pytest.approx(alpha, abs=1e-12)
    np.testing.assert_allclose(state.kets, [alpha], atol=1e-13)
    assert trace(state) == pytest.approx(1.0, abs=1e-13)


def test_pump_lock_is_stationary_point():
    alpha = -1.4 + 0.9j
    locked = pump_lock(alpha, FREE)
    assert stationary_amplitude(locked) == pytest.approx(alpha, abs=1e-15)


def test_free_decay_coherence_factor():
    """Cross-dyad coefficient decays as e^{-2|a|^2 (1 - e^{-gamma t})}.

    Labels contract, so the cross overlap <y|x> grows; per-dyad trace
    conservation then forces exactly this coefficient decay.
    """
    a = math.sqrt(3.2)
    cat = make_cat(a, 0.0)
    for gt in (0.1, 0.7, 2.5):
        out = evolve_state(cat, gt / GAMMA, FREE)
        ratio = out.coeffs[2] / cat.coeffs[2]
        expected = math.exp(-2.0 * a * a * (1.0 - math.exp(-gt)))
        assert ratio == pytest.approx(expected, rel=1e-12)


def test_free_decoherence_time():
    a = math.sqrt(5.0)
    assert free_decoherence_time(a, FREE) == pytest.approx(
        1.0 / (2.0 * GAMMA * 5.0), rel=1e-15)
    with pytest.raises(ZeroAmplitude):
        free_decoherence_time(0.0, FREE)


def test_linear_entropy_closed_form_matches_engine():
    a = math.sqrt(4.0)
    for phi in (0.0, math.pi):
        cat = make_cat(a, phi)
        for gt in (0.0, 0.2, 1.0, 3.0):
            state = evolve_state(cat, gt / GAMMA, PUMPED)
            closed = linear_entropy_closed_form(a, gt / GAMMA, FREE, phi)
            assert linear_entropy(state) == pytest.approx(closed, abs=1e-12)


def test_linear_entropy_closed_form_vectorized():
    t = np.linspace(0.0, 5.0, 7)
    vals = linear_entropy_closed_form(2.0, t, FREE)
    assert vals.shape == t.shape
    assert vals[0] == pytest.approx(0.0, abs=1e-14)
    assert np.all(vals >= -1e-15)


def test_linear_entropy_closed_form_rejects_unbalanced_phase():
    with pytest.raises(ValueError):
        linear_entropy_closed_form(2.0, 1.0, FREE, 0.3)


def test_char_fn_normal_initial_value():
    """chi_N(eta, 0) = sum c <y|x> e^{eta y* - eta* x}."""
    cat = make_cat(1.5, 0.0)
    eta = 0.4 - 0.9j
    direct = sum(c * overlap(x, y) * cmath.exp(eta * y.conjugate()
                                               - eta.conjugate() * x)
                 for x, y, c in cat.dyads)
    assert char_fn_normal(cat, eta, 0.0, FREE) == pytest.approx(direct,
                                                                abs=1e-14)
    assert char_fn_normal(cat, 0.0, 0.0, FREE) == pytest.approx(1.0, abs=1e-14)


def test_char_fn_normal_matches_evolved_dyads():
    """Propagated chi_N equals chi_N computed from the evolved state."""
    cat = make_cat(1.5, math.pi)
    t, eta = 0.8, -0.6 + 0.3j
    evolved = evolve_state(cat, t, PUMPED)
    assert char_fn_normal(cat, eta, t, PUMPED) == pytest.approx(
        char_fn_normal(evolved, eta, 0.0, PUMPED), abs=1e-13)


def test_char_fn_symmetric_ordering_identity():
    """chi_S = chi_N e^{-|eta|^2 / 2} at nbar = 0, all times."""
    cat = make_cat(math.sqrt(2.0), 0.0)

    def chi0(eta):
        return char_fn_normal(cat, eta, 0.0, FREE) \
            * math.exp(-0.5 * abs(eta) ** 2)

    for t in (0.0, 0.5, 2.0):
        for eta in (0.3, -0.2 + 0.7j, 1.1j):
            lhs = char_fn_symmetric(chi0, eta, t, PUMPED)
            rhs = char_fn_normal(cat, eta, t, PUMPED) \
                * math.exp(-0.5 * abs(eta) ** 2)
            assert lhs == pytest.approx(rhs, abs=1e-14)


def test_char_fn_thermal_blur():
    """nbar > 0 multiplies chi_N by the extra Gaussian factor."""
    cat = make_cat(1.0, 0.0)
    warm = CavityParams(gamma=GAMMA, nbar=0.7)
    t, eta = 0.9, 0.5 + 0.2j
    blur = math.exp(-abs(eta) ** 2 * (1.0 - math.exp(-GAMMA * t)) * warm.nbar)
    assert char_fn_normal(cat, eta, t, warm) == pytest.approx(
        char_fn_normal(cat, eta, t, FREE) * blur, abs=1e-14)


def test_thermal_dyads_rejected():
    warm = CavityParams(gamma=GAMMA, nbar=0.5)
    with pytest.raises(ThermalNotSupported):
        evolve_state(coherent(1.0), 0.1, warm)


def test_negative_time_rejected():
    with pytest.raises(NegativeTime):
        coeff_u(-0.1, FREE)
    with pytest.raises(NegativeTime):
        coeff_w(-0.1, FREE)
    with pytest.raises(NegativeTime):
        evolve_state(coherent(1.0), -0.1, FREE)


def test_lab_frame_states_not_evolvable():
    lab = to_lab_frame(coherent(1.0), CavityParams(gamma=1.0, omega0=2.0))
    with pytest.raises(ValueError):
        evolve_state(lab, 0.1, FREE)


def test_detuned_pump_displacement():
    """Off-resonant drive: w from the two-pole formula, purity untouched."""
    detuned = CavityParams(gamma=GAMMA, pump_amp=1.0, omega0=0.0,
                           pump_freq=2.0)
    delta = detuned.detuning
    t = 1.3
    expected = detuned.pump_amp * (cmath.exp(-1j * delta * t)
                                   - math.exp(-0.5 * GAMMA * t)) \
        / (delta + 0.5j * GAMMA)
    assert coeff_w(t, detuned) == pytest.approx(expected, abs=1e-15)
    state = evolve_state(coherent(0.5), t, detuned)
    assert purity(state) == pytest.approx(1.0, abs=1e-12)
    assert trace(state) == pytest.approx(1.0, abs=1e-13)
