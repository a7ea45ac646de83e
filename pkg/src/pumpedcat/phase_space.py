"""Wigner functions of dyad states on rectangular grids.

For a single dyad the Wigner transform is an analytic Gaussian,

    W_dyad(zeta) = (2/pi) c <y|x> exp(-2 (zeta - x)(conj(zeta) - conj(y))),

so the state's Wigner function is a short sum of these, |W| <= 2/pi.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCat, NonHermitianState, WindowTooSmall
from .evolution import coeff_w
from .states import CavityParams, CoherentDyad, DyadState, mean_amplitude, overlap


@dataclass(frozen=True)
class GridSpec:
    """Rectangular phase-space window with linspace-style sampling."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    n_re: int
    n_im: int

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError("empty phase-space window")
        if self.n_re < 2 or self.n_im < 2:
            raise ValueError("need at least 2 samples per axis")

    def re_axis(self) -> np.ndarray:
        return np.linspace(self.re_min, self.re_max, self.n_re)

    def im_axis(self) -> np.ndarray:
        return np.linspace(self.im_min, self.im_max, self.n_im)

    def mesh(self) -> np.ndarray:
        """Complex zeta samples, shape (n_im, n_re); Re varies fastest."""
        return self.re_axis()[None, :] + 1j * self.im_axis()[:, None]

    @property
    def cell_area(self) -> float:
        return ((self.re_max - self.re_min) / (self.n_re - 1)
                * (self.im_max - self.im_min) / (self.n_im - 1))


@dataclass(frozen=True)
class WignerGrid:
    """Real Wigner samples on a GridSpec, values[i_im, i_re]."""

    spec: GridSpec
    values: np.ndarray


def wigner_dyad(dyad: CoherentDyad, zeta):
    """Complex Wigner contribution of one dyad at zeta (scalar or array)."""
    x, y, c = dyad
    zeta = np.asarray(zeta, dtype=complex)
    out = (2.0 / math.pi) * c * overlap(x, y) \
        * np.exp(-2.0 * (zeta - x) * (np.conjugate(zeta) - y.conjugate()))
    return complex(out) if out.ndim == 0 else out


def wigner_state(state: DyadState, spec: GridSpec, *,
                 imag_tol: float = 1e-10, boundary_tol: float = 1e-6) -> WignerGrid:
    """Evaluate W on the grid; verifies reality and warns on clipping.

    Raises NonHermitianState when the summed imaginary residue exceeds
    imag_tol; emits WindowTooSmall when |W| on the window boundary
    exceeds boundary_tol.
    """
    zeta = spec.mesh()
    total = np.zeros(zeta.shape, dtype=complex)
    for d in state.dyads:
        total += wigner_dyad(d, zeta)
    resid = float(np.max(np.abs(total.imag))) if state.dyads else 0.0
    if resid > imag_tol:
        raise NonHermitianState(f"imaginary Wigner residue {resid:.3e}")
    values = total.real
    edge = max(np.max(np.abs(values[0, :])), np.max(np.abs(values[-1, :])),
               np.max(np.abs(values[:, 0])), np.max(np.abs(values[:, -1])))
    if edge > boundary_tol:
        warnings.warn(f"boundary |W| = {edge:.3e} exceeds {boundary_tol:.1e}; "
                      "window clips the state", WindowTooSmall, stacklevel=2)
    return WignerGrid(spec, values)


def default_grid(state: DyadState, n_re: int = 200, n_im: int = 200,
                 pad: float = 4.0) -> GridSpec:
    """Square window centered on <a> covering every label plus padding."""
    center = mean_amplitude(state)
    hw = pad
    if state.dyads:
        labels = np.concatenate([state.kets, state.bras])
        hw = pad + float(np.max(np.abs(labels - center)))
    return GridSpec(center.real - hw, center.real + hw,
                    center.imag - hw, center.imag + hw, n_re, n_im)


def wigner_cat_closed_form(alpha: complex, phi: float, t: float,
                           params: CavityParams, zeta):
    """Closed-form W(zeta, t) for an evolved cat under a resonant-frame pump.

    Two Gaussian lobes at +-u alpha + w plus an interference ridge at w
    whose contrast decays as e^{-2|alpha|^2 (1 - e^{-gamma t})}:

    W = (2 / pi N^2) [ e^{-2|z - u a - w|^2} + e^{-2|z + u a - w|^2}
        + 2 cos(phi) e^{-2|a|^2(1 - u^2)} e^{-2|z - w|^2}
          cos(4 u Im((z - w) conj(a))) ].
    """
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    n2 = 2.0 * (1.0 + math.cos(phi) * math.exp(-2.0 * a2))
    if n2 <= 1e-300:
        raise DegenerateCat(f"cat norm vanished: alpha={alpha}, phi={phi}")
    u = math.exp(-0.5 * params.gamma * t)
    w = coeff_w(t, params)
    zeta = np.asarray(zeta, dtype=complex)
    zw = zeta - w
    lobes = (np.exp(-2.0 * np.abs(zw - u * alpha) ** 2)
             + np.exp(-2.0 * np.abs(zw + u * alpha) ** 2))
    ridge = (2.0 * math.cos(phi) * math.exp(-2.0 * a2 * (1.0 - u * u))
             * np.exp(-2.0 * np.abs(zw) ** 2)
             * np.cos(4.0 * u * (zw * np.conjugate(alpha)).imag))
    out = (2.0 / (math.pi * n2)) * (lobes + ridge)
    return float(out) if out.ndim == 0 else out


def grid_normalization(grid: WignerGrid) -> float:
    """Plain Riemann sum of W over the window; ~1 for a covered state."""
    return float(np.sum(grid.values) * grid.spec.cell_area)
