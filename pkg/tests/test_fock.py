"""Unit tests for the number-basis cross-check integrator."""
import math

import numpy as np
import pytest

from pumpedcat import (CavityParams, NegativeTime, StepTooLarge, coherent,
                       evolve_state, make_cat)
from pumpedcat.fock import (annihilation, char_fn_point, coherent_vector,
                            detect_matrix, dyads_to_fock, excursion_bound,
                            integrate, max_step, parity, recommended_dim,
                            trace_distance)

GAMMA = 1.0
FREE = CavityParams(gamma=GAMMA)


def test_recommended_dim_values():
    assert recommended_dim(0.0) == 10
    assert recommended_dim(2.0 * math.sqrt(5.0)) == 66
    # monotone in the excursion
    mus = np.linspace(0.0, 8.0, 30)
    dims = [recommended_dim(m) for m in mus]
    assert all(b >= a for a, b in zip(dims, dims[1:]))


def test_excursion_bound():
    cat = make_cat(math.sqrt(5.0), 0.0)
    assert excursion_bound(cat, FREE) == pytest.approx(2.0 * math.sqrt(5.0))
    pumped = CavityParams(gamma=2.0, pump_amp=1.0)
    assert excursion_bound(cat, pumped) == pytest.approx(
        2.0 * math.sqrt(5.0) + 1.0)


def test_coherent_vector():
    alpha = 1.2 - 0.8j
    v = coherent_vector(alpha, 60)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    n = np.arange(60)
    assert np.sum(n * np.abs(v) ** 2) == pytest.approx(abs(alpha) ** 2,
                                                       rel=1e-12)
    a = annihilation(60)
    np.testing.assert_allclose((a @ v)[:-1], alpha * v[:-1], atol=1e-12)


def test_dyads_to_fock_matches_outer_products():
    alpha = 1.1 + 0.3j
    dim = 40
    rho = dyads_to_fock(coherent(alpha), dim)
    v = coherent_vector(alpha, dim)
    np.testing.assert_allclose(rho, np.outer(v, v.conj()), atol=1e-12)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)


def test_cat_matrix_is_physical():
    rho = dyads_to_fock(make_cat(math.sqrt(2.0), math.pi), 40)
    np.testing.assert_allclose(rho, rho.conj().T, atol=1e-14)
    evals = np.linalg.eigvalsh(rho)
    assert evals.min() > -1e-12
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)


def test_parity_of_cats():
    assert parity(dyads_to_fock(make_cat(1.4, 0.0), 40)) == pytest.approx(
        1.0, abs=1e-12)
    assert parity(dyads_to_fock(make_cat(1.4, math.pi), 40)) == pytest.approx(
        -1.0, abs=1e-12)


def test_max_step():
    assert max_step(FREE) == pytest.approx(1e-3)
    strong = CavityParams(gamma=1.0, pump_amp=199.0)
    assert max_step(strong) == pytest.approx(0.1 / 200.0)


def test_integrate_free_decay_tracks_dyads():
    alpha = 1.3 + 0.5j
    t = 1.2
    dim = 30
    rho_t = integrate(dyads_to_fock(coherent(alpha), dim), t, FREE)
    ref = dyads_to_fock(evolve_state(coherent(alpha), t, FREE), dim)
    assert trace_distance(rho_t, ref) < 1e-6


def test_integrate_pumped_cat_tracks_dyads():
    params = CavityParams(gamma=GAMMA, pump_amp=0.5)
    cat = make_cat(1.2, 0.0)
    t = 0.8
    dim = recommended_dim(excursion_bound(cat, params))
    rho_t = integrate(dyads_to_fock(cat, dim), t, params)
    ref = dyads_to_fock(evolve_state(cat, t, params), dim)
    assert trace_distance(rho_t, ref) < 1e-6


def test_integrate_snapshots():
    alpha = 0.9
    dim = 25
    outs = integrate(dyads_to_fock(coherent(alpha), dim), 0.0, FREE,
                     t_eval=[0.2, 0.2, 0.7])
    assert len(outs) == 3
    np.testing.assert_allclose(outs[0], outs[1], atol=1e-14)
    ref = dyads_to_fock(evolve_state(coherent(alpha), 0.7, FREE), dim)
    assert trace_distance(outs[2], ref) < 1e-6


def test_integrate_batched_input():
    dim = 25
    stack = np.stack([dyads_to_fock(coherent(0.8), dim),
                      dyads_to_fock(make_cat(0.8, 0.0), dim)])
    outs = integrate(stack, 0.5, FREE)
    assert outs.shape == stack.shape
    single = integrate(dyads_to_fock(coherent(0.8), dim), 0.5, FREE)
    np.testing.assert_allclose(outs[0], single, atol=1e-13)


def test_integrate_guards():
    dim = 10
    rho = dyads_to_fock(coherent(0.3), dim)
    with pytest.raises(StepTooLarge):
        integrate(rho, 0.1, FREE, dt=0.5)
    with pytest.raises(NegativeTime):
        integrate(rho, -0.1, FREE)
    with pytest.raises(ValueError):
        integrate(rho, 0.0, FREE, t_eval=[0.5, 0.2])


def test_detect_matrix_probabilities():
    """p_g = (1 + e^{-2|alpha|^2}) / 2 on a coherent state."""
    alpha = 1.1
    rho = dyads_to_fock(coherent(alpha), 40)
    p_g, rho_g = detect_matrix(rho, "g")
    p_e, rho_e = detect_matrix(rho, "e")
    k = math.exp(-2.0 * alpha * alpha)
    assert p_g == pytest.approx(0.5 * (1.0 + k), abs=1e-12)
    assert p_g + p_e == pytest.approx(1.0, abs=1e-12)
    assert parity(rho_g) == pytest.approx(1.0, abs=1e-12)
    assert parity(rho_e) == pytest.approx(-1.0, abs=1e-12)
    ref = dyads_to_fock(make_cat(alpha, 0.0), 40)
    assert trace_distance(rho_g, ref) < 1e-12


def test_char_fn_point_orderings():
    rho = dyads_to_fock(coherent(0.7 + 0.2j), 35)
    eta = 0.4 - 0.6j
    chi_s = char_fn_point(rho, eta)
    chi_n = char_fn_point(rho, eta, order="normal")
    assert chi_n == pytest.approx(chi_s * math.exp(0.5 * abs(eta) ** 2),
                                  abs=1e-12)


def test_trace_distance_basics():
    rho = dyads_to_fock(coherent(0.5), 20)
    sig = dyads_to_fock(coherent(-0.5), 20)
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)
    overlap2 = math.exp(-abs(1.0) ** 2)
    assert trace_distance(rho, sig) == pytest.approx(
        math.sqrt(1.0 - overlap2), rel=1e-10)
