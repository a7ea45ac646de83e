"""Unit tests for Wigner-function evaluation."""
import math

import numpy as np
import pytest

from pumpedcat import (CavityParams, CoherentDyad, DyadState, GridSpec,
                       NonHermitianState, WindowTooSmall, coherent,
                       default_grid, evolve_state, grid_normalization,
                       make_cat, pump_lock, wigner_cat_closed_form,
                       wigner_dyad, wigner_state)

PARAMS = CavityParams(gamma=1.0)


def test_grid_spec_axes():
    spec = GridSpec(-2.0, 2.0, -1.0, 3.0, 5, 9)
    assert spec.re_axis()[0] == -2.0 and spec.re_axis()[-1] == 2.0
    assert spec.im_axis().shape == (9,)
    mesh = spec.mesh()
    assert mesh.shape == (9, 5)
    assert mesh[0, 0] == -2.0 - 1.0j
    assert mesh[-1, -1] == 2.0 + 3.0j
    assert spec.cell_area == pytest.approx(1.0 * 0.5)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(1.0, 1.0, -1.0, 1.0, 5, 5)
    with pytest.raises(ValueError):
        GridSpec(-1.0, 1.0, -1.0, 1.0, 1, 5)


def test_wigner_coherent_state():
    """W(zeta) = (2/pi) e^{-2|zeta - alpha|^2} pointwise."""
    alpha = 0.9 - 0.4j
    spec = GridSpec(-3.0, 4.0, -3.5, 2.5, 41, 37)
    grid = wigner_state(coherent(alpha), spec)
    zeta = spec.mesh()
    expected = (2.0 / math.pi) * np.exp(-2.0 * np.abs(zeta - alpha) ** 2)
    np.testing.assert_allclose(grid.values, expected, atol=1e-14)


def test_wigner_cat_closed_form_at_t0():
    alpha, phi = math.sqrt(3.0), 0.0
    spec = GridSpec(-5.0, 5.0, -5.0, 5.0, 61, 61)
    grid = wigner_state(make_cat(alpha, phi), spec)
    closed = wigner_cat_closed_form(alpha, phi, 0.0, PARAMS, spec.mesh())
    np.testing.assert_allclose(grid.values, closed, atol=1e-13)


def test_wigner_cat_closed_form_pumped():
    alpha, phi, t = math.sqrt(2.5), math.pi, 0.8
    params = CavityParams(gamma=1.0, pump_amp=0.7)
    state = evolve_state(make_cat(alpha, phi), t, params)
    spec = GridSpec(-5.0, 5.0, -6.0, 4.0, 51, 51)
    grid = wigner_state(state, spec)
    closed = wigner_cat_closed_form(alpha, phi, t, params, spec.mesh())
    np.testing.assert_allclose(grid.values, closed, atol=1e-12)


def test_wigner_origin_even_cat():
    """The interference ridge puts the vacuum value 2/pi at the origin."""
    cat = make_cat(math.sqrt(5.0), 0.0)
    w0 = sum(wigner_dyad(d, 0j) for d in cat.dyads)
    assert w0.imag == pytest.approx(0.0, abs=1e-15)
    assert w0.real == pytest.approx(2.0 / math.pi, abs=1e-6)


def test_wigner_odd_cat_negative_origin():
    cat = make_cat(math.sqrt(5.0), math.pi)
    w0 = sum(wigner_dyad(d, 0j) for d in cat.dyads)
    assert w0.real == pytest.approx(-2.0 / math.pi, abs=1e-6)


def test_grid_normalization():
    cat = make_cat(2.0, 0.0)
    spec = GridSpec(-6.0, 6.0, -6.0, 6.0, 201, 201)
    grid = wigner_state(cat, spec)
    assert grid_normalization(grid) == pytest.approx(1.0, abs=1e-4)


def test_wigner_closed_form_complex_pump():
    """Locking pump F = i alpha gamma / 2 exercises a complex amplitude."""
    alpha = math.sqrt(5.0)
    locked = pump_lock(alpha, PARAMS)
    spec = GridSpec(-5.5, 5.5, -5.5, 5.5, 31, 31)
    for t in (0.4, 2.0):
        state = evolve_state(make_cat(alpha, 0.0), t, locked)
        grid = wigner_state(state, spec)
        closed = wigner_cat_closed_form(alpha, 0.0, t, locked, spec.mesh())
        np.testing.assert_allclose(grid.values, closed, atol=1e-12)


def test_non_hermitian_rejected():
    lone = DyadState((CoherentDyad(1.0, -1.0, 1.0),))
    spec = GridSpec(-3.0, 3.0, -3.0, 3.0, 21, 21)
    with pytest.raises(NonHermitianState):
        wigner_state(lone, spec)


def test_clipped_window_warns():
    spec = GridSpec(-0.5, 0.5, -0.5, 0.5, 11, 11)
    with pytest.warns(WindowTooSmall):
        wigner_state(coherent(1.5), spec)


def test_default_grid_covers_labels():
    cat = make_cat(3.0 + 1.0j, 0.0)
    spec = default_grid(cat)
    assert spec.re_min < -3.0 and spec.re_max > 3.0
    assert spec.im_min < -1.0 and spec.im_max > 1.0
    import warnings
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        wigner_state(cat, spec)
