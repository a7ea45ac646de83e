"""Truncated Fock-basis reference implementation.

Deliberately independent of the dyad engine: states are dense number-basis
matrices, evolution is fixed-step RK4 on the master equation (thermal bath
included), and expectation values are plain matrix algebra. This module is
the brute-force cross-check for every closed form in the package, not a
production path.

Truncation rule of thumb: dim >= ceil(mu^2 + 8 mu + 10) for the largest
coherent label magnitude mu that will occur; the run aborts if the last
diagonal element ever exceeds the tail tolerance.
"""
from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.linalg import expm
from scipy.special import gammaln

from .errors import (DimMismatch, InternalConsistencyError, NegativeTime,
                     StepTooLarge, TruncationTooSmall, ZeroProbabilityBranch)
from .states import CavityParams, DyadState


def recommended_dim(mu: float) -> int:
    """Dimension covering labels up to |label| = mu with ~1e-10 tails."""
    mu = float(mu)
    return int(math.ceil(mu * mu + 8.0 * mu + 10.0))


def excursion_bound(state: DyadState, params: CavityParams) -> float:
    """Upper bound on any future label magnitude: |u x| + |w| + |x|."""
    maxlab = 0.0
    if state.dyads:
        maxlab = float(np.max(np.abs(np.concatenate([state.kets, state.bras]))))
    # |w(t)| <= swing |F| / |Delta + i gamma/2|, swing = sup |e^{-i D t} - e^{-g t/2}|
    swing = 1.0 if params.detuning == 0.0 else 2.0
    pump_reach = swing * abs(params.pump_amp) / abs(complex(params.detuning,
                                                            params.gamma / 2.0))
    return 2.0 * maxlab + pump_reach


def coherent_vector(alpha: complex, dim: int) -> np.ndarray:
    """<n|alpha> for n < dim, computed through logs for large |alpha|."""
    alpha = complex(alpha)
    v = np.zeros(dim, dtype=complex)
    if alpha == 0:
        v[0] = 1.0
        return v
    n = np.arange(dim, dtype=float)
    logmag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0) - 0.5 * abs(alpha) ** 2
    return np.exp(logmag + 1j * n * cmath.phase(alpha))


def dyads_to_fock(state: DyadState, dim: int, *, tail_tol: float = 1e-10) -> np.ndarray:
    """Dense number-basis matrix of a dyad sum.

    Raises TruncationTooSmall when the last diagonal element indicates
    the window misses weight.
    """
    rho = np.zeros((dim, dim), dtype=complex)
    for x, y, c in state.dyads:
        rho += c * np.outer(coherent_vector(x, dim),
                            np.conjugate(coherent_vector(y, dim)))
    tail = abs(rho[-1, -1])
    if tail > tail_tol:
        raise TruncationTooSmall(f"tail mass {tail:.3e} at dim {dim}")
    return rho


def validate_density(rho: np.ndarray, *, herm_tol: float = 1e-10,
                     trace_tol: float = 1e-8, eig_floor: float = -1e-8,
                     tail_tol: float = 1e-10) -> None:
    """Hermiticity, unit trace, positivity and tail checks; raises on failure."""
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > herm_tol:
        from .errors import NonHermitianState
        raise NonHermitianState(f"Hermiticity defect {herm:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise InternalConsistencyError(f"trace {tr} deviates from 1")
    low = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if low < eig_floor:
        raise InternalConsistencyError(f"eigenvalue {low:.3e} below floor")
    if abs(rho[-1, -1]) > tail_tol:
        raise TruncationTooSmall(f"tail mass {abs(rho[-1, -1]):.3e}")


def max_step(params: CavityParams) -> float:
    """Largest RK4 step honoring both accuracy bounds."""
    g = params.gamma
    return min(1e-3 / g, 0.1 / (abs(params.pump_amp) + g + abs(params.detuning)))


def _rhs_factory(dim: int, params: CavityParams):
    g = params.gamma
    nbar = params.nbar
    f0 = params.pump_amp
    delta = params.detuning
    nvec = np.arange(dim, dtype=float)
    sq = np.sqrt(np.arange(1, dim, dtype=float))
    sqsq = np.outer(sq, sq)
    damp_down = g * (nbar + 1.0)
    damp_up = g * nbar
    # diagonal anticommutator weights: (nbar+1) n + nbar (n+1)
    half_left = 0.5 * (damp_down * nvec + damp_up * (nvec + 1.0))

    def rhs(r: np.ndarray, t: float) -> np.ndarray:
        ft = f0 * cmath.exp(-1j * delta * t)  # pump in the cavity frame
        out = np.zeros_like(r)
        if ft != 0:
            a_r = np.zeros_like(r)
            a_r[..., :-1, :] = sq[:, None] * r[..., 1:, :]
            ad_r = np.zeros_like(r)
            ad_r[..., 1:, :] = sq[:, None] * r[..., :-1, :]
            r_a = np.zeros_like(r)
            r_a[..., :, 1:] = r[..., :, :-1] * sq[None, :]
            r_ad = np.zeros_like(r)
            r_ad[..., :, :-1] = r[..., :, 1:] * sq[None, :]
            h_r = ft * ad_r + ft.conjugate() * a_r
            r_h = ft * r_ad + ft.conjugate() * r_a
            out += -1j * (h_r - r_h)
        if damp_down:
            out[..., :-1, :-1] += damp_down * sqsq * r[..., 1:, 1:]
        if damp_up:
            out[..., 1:, 1:] += damp_up * sqsq * r[..., :-1, :-1]
        out -= half_left[:, None] * r + r * half_left[None, :]
        return out

    return rhs


def integrate(rho0: np.ndarray, t: float, params: CavityParams,
              dt: float | None = None, *, t_eval=None,
              drift_tol: float = 1e-8, tail_tol: float = 1e-10):
    """Fixed-step RK4 master-equation integration in the cavity frame.

    Returns the final matrix, or the list of snapshots at t_eval (which
    must be nondecreasing; the last entry defines the horizon and t is
    ignored). Accepts stacked input (..., dim, dim). Each step the matrix
    is re-Hermitized and trace-renormalized; the run fails if the summed
    drift exceeds drift_tol or the truncation tail ever grows past
    tail_tol.
    """
    bound = max_step(params)
    if dt is None:
        dt = bound
    if dt > bound * (1.0 + 1e-12):
        raise StepTooLarge(f"dt = {dt} exceeds bound {bound:.3e}")
    if t_eval is None:
        t_eval = [float(t)]
        single = True
    else:
        t_eval = [float(x) for x in t_eval]
        single = False
    if any(x < 0 for x in t_eval):
        raise NegativeTime("negative evaluation time")
    if any(b < a for a, b in zip(t_eval, t_eval[1:])):
        raise ValueError("t_eval must be nondecreasing")

    rho = np.array(rho0, dtype=complex)
    rhs = _rhs_factory(rho.shape[-1], params)
    drift = 0.0
    now = 0.0
    snaps = []
    for target in t_eval:
        seg = target - now
        nstep = max(1, math.ceil(seg / dt - 1e-12)) if seg > 0 else 0
        h = seg / nstep if nstep else 0.0
        for _ in range(nstep):
            k1 = rhs(rho, now)
            k2 = rhs(rho + 0.5 * h * k1, now + 0.5 * h)
            k3 = rhs(rho + 0.5 * h * k2, now + 0.5 * h)
            k4 = rhs(rho + h * k3, now + h)
            rho = rho + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            now += h
            rho = 0.5 * (rho + np.conjugate(np.swapaxes(rho, -1, -2)))
            tr = np.einsum("...ii->...", rho).real
            drift += float(np.max(np.abs(tr - 1.0)))
            rho = rho / tr[..., None, None]
            tail = float(np.max(np.abs(rho[..., -1, -1])))
            if tail > tail_tol:
                raise TruncationTooSmall(
                    f"tail mass {tail:.3e} at t = {now:.6g}; enlarge dim")
        now = target
        snaps.append(rho.copy())
    if drift > drift_tol:
        raise InternalConsistencyError(f"accumulated trace drift {drift:.3e}")
    return snaps[-1] if single else snaps


def trace_distance(rho1: np.ndarray, rho2: np.ndarray) -> float:
    """(1/2) ||rho1 - rho2||_1 for Hermitian matrices."""
    rho1 = np.asarray(rho1)
    rho2 = np.asarray(rho2)
    if rho1.shape != rho2.shape or rho1.shape[-1] != rho1.shape[-2]:
        raise DimMismatch(f"shapes {rho1.shape} vs {rho2.shape}")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(rho1 - rho2))))


def _parity_signs(dim: int) -> np.ndarray:
    return (-1.0) ** np.arange(dim)


def pi_phase(rho: np.ndarray) -> np.ndarray:
    """Conjugation P rho P by the parity unitary P = e^{i pi a^dag a}."""
    s = _parity_signs(rho.shape[-1])
    return rho * np.outer(s, s)


def parity(rho: np.ndarray) -> float:
    """Tr[P rho]."""
    return float(np.sum(_parity_signs(rho.shape[-1]) * np.diagonal(rho).real))


def detect_matrix(rho: np.ndarray, outcome: str) -> tuple[float, np.ndarray]:
    """Parity-readout collapse (1/4)(P rho P + rho +- (P rho + rho P)).

    Returns (branch probability, normalized post-measurement matrix).
    """
    if outcome not in ("g", "e"):
        raise ValueError(f"outcome must be 'g' or 'e', got {outcome!r}")
    sign = 1.0 if outcome == "g" else -1.0
    s = _parity_signs(rho.shape[-1])
    p_rho = s[:, None] * rho
    rho_p = rho * s[None, :]
    coll = 0.25 * (pi_phase(rho) + rho + sign * (p_rho + rho_p))
    prob = float(np.trace(coll).real)
    if prob < 1e-300:
        raise ZeroProbabilityBranch(f"branch '{outcome}' has probability {prob}")
    return prob, coll / prob


def char_fn_point(rho: np.ndarray, eta: complex, order: str = "symmetric") -> complex:
    """Characteristic function at one eta via the exact displacement matrix."""
    dim = rho.shape[-1]
    eta = complex(eta)
    a = np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)
    disp = expm(eta * a.conj().T - eta.conjugate() * a)
    chi = complex(np.trace(rho @ disp))
    if order == "symmetric":
        return chi
    if order == "normal":
        return chi * math.exp(0.5 * abs(eta) ** 2)
    raise ValueError(f"unknown order {order!r}")


def annihilation(dim: int) -> np.ndarray:
    """Truncated annihilation operator, a[n-1, n] = sqrt(n)."""
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)
