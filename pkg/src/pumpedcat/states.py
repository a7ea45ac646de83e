"""Coherent-state dyad representation of the cavity field.

A field state is a finite sum

    rho = sum_k  c_k |x_k><y_k|

of dyads of coherent states. Damped, driven evolution maps this family
onto itself exactly, so the whole simulator manipulates lists of
(ket label, bra label, coefficient) triples instead of matrices.
Labels are stored in the frame rotating at the cavity frequency; the
lab frame is an output transformation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DegenerateCat, InternalConsistencyError


class Frame(enum.Enum):
    """Reference frame the dyad labels are expressed in."""

    ROTATING = "rotating"
    LAB = "lab"


class CoherentDyad(NamedTuple):
    """One term c |ket><bra| of a dyad sum."""

    ket: complex
    bra: complex
    coeff: complex


@dataclass(frozen=True)
class CavityParams:
    """Cavity, bath and pump parameters.

    Parameters
    ----------
    gamma : float
        Energy decay rate, > 0.
    omega0 : float
        Cavity frequency. Only enters lab-frame output; the engine works
        in the co-rotating frame.
    pump_amp : complex
        Pump amplitude F of the drive F e^{-i omega t} a^dag + h.c.
    pump_freq : float or None
        Pump frequency; None means resonant (omega0).
    nbar : float
        Mean thermal photon number of the bath.
    """

    gamma: float
    omega0: float = 0.0
    pump_amp: complex = 0j
    pump_freq: float | None = None
    nbar: float = 0.0

    def __post_init__(self):
        if not (self.gamma > 0.0) or not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite and > 0, got {self.gamma}")
        if not (self.nbar >= 0.0) or not math.isfinite(self.nbar):
            raise ValueError(f"nbar must be finite and >= 0, got {self.nbar}")
        if not math.isfinite(self.omega0):
            raise ValueError("omega0 must be finite")
        if not (math.isfinite(self.pump_amp.real) and math.isfinite(self.pump_amp.imag)):
            raise ValueError("pump_amp must be finite")
        object.__setattr__(self, "pump_amp", complex(self.pump_amp))
        if self.pump_freq is None:
            object.__setattr__(self, "pump_freq", float(self.omega0))
        elif not math.isfinite(self.pump_freq):
            raise ValueError("pump_freq must be finite")

    @property
    def detuning(self) -> float:
        """Pump detuning from the cavity, pump_freq - omega0."""
        return self.pump_freq - self.omega0


@dataclass(frozen=True, eq=False)
class DyadState:
    """Immutable dyad sum with its frame and the time it refers to.

    The container itself enforces nothing; constructors such as
    make_cat and the evolution/detection operations guarantee unit
    trace and Hermitian pairing, which validate_state can re-check.
    """

    dyads: tuple[CoherentDyad, ...]
    frame: Frame = Frame.ROTATING
    time: float = 0.0

    def __post_init__(self):
        object.__setattr__(
            self, "dyads", tuple(CoherentDyad(complex(k), complex(b), complex(c))
                                 for k, b, c in self.dyads))

    @cached_property
    def kets(self) -> np.ndarray:
        return np.array([d.ket for d in self.dyads], dtype=complex)

    @cached_property
    def bras(self) -> np.ndarray:
        return np.array([d.bra for d in self.dyads], dtype=complex)

    @cached_property
    def coeffs(self) -> np.ndarray:
        return np.array([d.coeff for d in self.dyads], dtype=complex)

    @property
    def n_dyads(self) -> int:
        return len(self.dyads)


def overlap(alpha, beta):
    """Coherent-state overlap <beta|alpha>, vectorized over labels."""
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    out = np.exp(np.conjugate(beta) * alpha
                 - 0.5 * (alpha.real**2 + alpha.imag**2)
                 - 0.5 * (beta.real**2 + beta.imag**2))
    return complex(out) if out.ndim == 0 else out


def coherent(alpha, frame: Frame = Frame.ROTATING, time: float = 0.0) -> DyadState:
    """Single coherent state |alpha><alpha|."""
    return DyadState((CoherentDyad(complex(alpha), complex(alpha), 1.0 + 0j),),
                     frame, time)


def vacuum() -> DyadState:
    return coherent(0.0)


def make_cat(alpha, phi: float = 0.0) -> DyadState:
    """Normalized cat (|alpha> + e^{i phi} |-alpha>)/N as four dyads.

    phi = 0 gives the even (parity +1) and phi = pi the odd (parity -1)
    superposition. Any phi is accepted and enters via cos(phi), but only
    the parity eigenstates are meaningful downstream.

    Raises DegenerateCat when N^2 = 2(1 + cos(phi) e^{-2|alpha|^2})
    vanishes (odd superposition at alpha -> 0).
    """
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    n2 = 2.0 * (1.0 + math.cos(phi) * math.exp(-2.0 * a2))
    if n2 <= 1e-300:
        raise DegenerateCat(f"cat norm vanished: alpha={alpha}, phi={phi}")
    if alpha == 0:
        # all four dyads coincide at the origin and sum to the vacuum
        return vacuum()
    c = 1.0 / n2
    cc = math.cos(phi) / n2
    return DyadState((
        CoherentDyad(alpha, alpha, c),
        CoherentDyad(-alpha, -alpha, c),
        CoherentDyad(alpha, -alpha, cc),
        CoherentDyad(-alpha, alpha, cc),
    ))


def _diag_overlaps(state: DyadState) -> np.ndarray:
    return overlap(state.kets, state.bras)


def trace(state: DyadState) -> complex:
    """Tr rho = sum c <bra|ket>."""
    if not state.dyads:
        return 0j
    return complex(np.sum(state.coeffs * _diag_overlaps(state)))


def purity(state: DyadState) -> float:
    """Tr rho^2, clamped to [0, 1].

    Raises InternalConsistencyError above 1 + 1e-8; anything in
    (1, 1 + 1e-8] is treated as roundoff.
    """
    if not state.dyads:
        return 0.0
    # G[i, j] = <y_i|x_j>
    g = np.exp(np.conjugate(state.bras)[:, None] * state.kets[None, :]
               - 0.5 * (np.abs(state.kets) ** 2)[None, :]
               - 0.5 * (np.abs(state.bras) ** 2)[:, None])
    c = state.coeffs
    p = complex(np.einsum("i,j,ij,ji->", c, c, g, g))
    if abs(p.imag) > 1e-8:
        raise InternalConsistencyError(f"purity has imaginary part {p.imag:.3e}")
    if p.real > 1.0 + 1e-8:
        raise InternalConsistencyError(f"purity {p.real!r} exceeds 1")
    return min(max(p.real, 0.0), 1.0)


def linear_entropy(state: DyadState) -> float:
    """S = 1 - Tr rho^2."""
    return 1.0 - purity(state)


def parity_expectation(state: DyadState) -> float:
    """<e^{i pi a^dag a}> = Re sum c <bra|-ket>."""
    if not state.dyads:
        return 0.0
    return float(np.sum(state.coeffs * overlap(-state.kets, state.bras)).real)


def mean_photon_number(state: DyadState) -> float:
    """<a^dag a> = Re sum c conj(bra) ket <bra|ket>."""
    if not state.dyads:
        return 0.0
    val = np.sum(state.coeffs * np.conjugate(state.bras) * state.kets
                 * _diag_overlaps(state))
    return float(val.real)


def mean_amplitude(state: DyadState) -> complex:
    """<a> = sum c ket <bra|ket>."""
    if not state.dyads:
        return 0j
    return complex(np.sum(state.coeffs * state.kets * _diag_overlaps(state)))


def hermiticity_defect(state: DyadState) -> float:
    """Worst-case mismatch between the dyad list and its adjoint.

    Greedily matches every dyad c|x><y| to a partner conj(c)|y><x| and
    returns the largest residual max(|label gap|, |coeff gap|); 0 for an
    exactly paired list.
    """
    dyads = list(state.dyads)
    unused = set(range(len(dyads)))
    worst = 0.0
    for i, (x, y, c) in enumerate(dyads):
        if i not in unused:
            continue
        best_j, best_r = None, math.inf
        for j in unused:
            xj, yj, cj = dyads[j]
            r = max(abs(xj - y), abs(yj - x), abs(cj - c.conjugate()))
            if r < best_r:
                best_j, best_r = j, r
        unused.discard(i)
        if best_j is not None and best_j != i:
            unused.discard(best_j)
        worst = max(worst, best_r)
    return worst


def validate_state(state: DyadState, *, trace_tol: float = 1e-10,
                   pairing_tol: float = 1e-9) -> None:
    """Check unit trace and Hermitian pairing; raise on violation."""
    tr = trace(state)
    if abs(tr - 1.0) > trace_tol:
        raise InternalConsistencyError(f"trace {tr} deviates from 1")
    defect = hermiticity_defect(state)
    if defect > pairing_tol:
        raise InternalConsistencyError(f"adjoint pairing broken by {defect:.3e}")


def _safe_weight(ket: complex, bra: complex, coeff: complex) -> float:
    # phase-free bound sup_theta |c <bra|e^{i theta n}|ket>|; never below the
    # trace weight and never below the parity weight, so pruning on it
    # cannot delete parity content hiding in tiny-trace dyads
    return abs(coeff) * math.exp(-0.5 * (abs(ket) - abs(bra)) ** 2)


def _pair_adjoints(dyads: list[CoherentDyad], tol: float) -> list[CoherentDyad]:
    # snap near-adjoint pairs to exact adjoint pairs; leaves genuinely
    # unpaired dyads (non-Hermitian input) untouched
    out: list[CoherentDyad] = []
    unused = list(range(len(dyads)))
    taken = set()
    for i in unused:
        if i in taken:
            continue
        xi, yi, ci = dyads[i]
        if abs(xi - yi) <= tol and abs(ci.imag) <= 1e-9 * max(1.0, abs(ci)):
            # self-paired: snap to the diagonal with a real coefficient
            taken.add(i)
            k = 0.5 * (xi + yi)
            out.append(CoherentDyad(k, k, complex(ci.real, 0.0)))
            continue
        partner = None
        for j in unused:
            if j <= i or j in taken:
                continue
            xj, yj, cj = dyads[j]
            if abs(xj - yi) <= tol and abs(yj - xi) <= tol:
                partner = j
                break
        taken.add(i)
        if partner is None:
            out.append(dyads[i])
            continue
        taken.add(partner)
        xj, yj, cj = dyads[partner]
        k = 0.5 * (xi + yj)
        b = 0.5 * (yi + xj)
        c = 0.5 * (ci + cj.conjugate())
        out.append(CoherentDyad(k, b, c))
        out.append(CoherentDyad(b, k, c.conjugate()))
    return out


def compact(state: DyadState, merge_tol: float = 1e-12,
            prune_tol: float = 1e-15) -> DyadState:
    """Merge near-coincident dyads, drop negligible ones, restore the trace.

    Dyads whose (ket, bra) labels agree within merge_tol are clustered;
    each cluster is replaced by the dyad of its weight-centroid labels
    with coefficient <k|rho_cluster|b>, which reduces to plain
    coefficient addition when the labels coincide exactly. Pruning drops
    dyads whose phase-free weight |c| e^{-(|x|-|y|)^2/2} falls below
    prune_tol (an upper bound on the trace weight |c <y|x>| that also
    bounds parity-type contributions, so content is never lost to a
    small trace alone). The adjoint pairing is re-enforced and the input
    trace is restored exactly.
    """
    if not state.dyads:
        return state
    tr_in = trace(state)

    reps: list[tuple[complex, complex]] = []
    groups: list[list[CoherentDyad]] = []
    for d in state.dyads:
        for gi, (rk, rb) in enumerate(reps):
            if abs(d.ket - rk) <= merge_tol and abs(d.bra - rb) <= merge_tol:
                groups[gi].append(d)
                break
        else:
            reps.append((d.ket, d.bra))
            groups.append([d])

    merged: list[CoherentDyad] = []
    for group in groups:
        if len(group) == 1:
            merged.append(group[0])
            continue
        ws = [_safe_weight(*d) for d in group]
        wt = sum(ws)
        if wt == 0.0:
            ws = [1.0] * len(group)
            wt = float(len(group))
        k = sum(w * d.ket for w, d in zip(ws, group)) / wt
        b = sum(w * d.bra for w, d in zip(ws, group)) / wt
        # projection coefficient <k|rho_group|b>
        c = sum(d.coeff * overlap(d.ket, k) * overlap(b, d.bra) for d in group)
        merged.append(CoherentDyad(k, b, c))

    kept = [d for d in merged if _safe_weight(*d) >= prune_tol]
    if not kept:
        if abs(tr_in) > 1e-12:
            raise InternalConsistencyError("compact pruned a state of unit trace away")
        return DyadState((), state.frame, state.time)

    kept = _pair_adjoints(kept, max(merge_tol, 1e-12))

    out = DyadState(tuple(kept), state.frame, state.time)
    tr_out = trace(out)
    if tr_out == 0 and tr_in != 0:
        raise InternalConsistencyError("compact lost the trace")
    if tr_out != 0 and tr_in != 0:
        scale = tr_in / tr_out
        if abs(scale.imag) <= 1e-12 * abs(scale):
            scale = scale.real  # keep conjugate pairing exact
        out = DyadState(tuple(CoherentDyad(d.ket, d.bra, d.coeff * scale)
                              for d in out.dyads), state.frame, state.time)
    return out


def to_lab_frame(state: DyadState, params: CavityParams) -> DyadState:
    """Rotate labels by e^{-i omega0 t}; coefficients are unchanged."""
    if state.frame is Frame.LAB:
        return state
    phase = np.exp(-1j * params.omega0 * state.time)
    return DyadState(tuple(CoherentDyad(d.ket * phase, d.bra * phase, d.coeff)
                           for d in state.dyads), Frame.LAB, state.time)


def state_to_dict(state: DyadState) -> dict:
    """JSON-ready dict with split real/imag parts."""
    return {
        "frame": state.frame.value,
        "time": float(state.time),
        "dyads": [
            {"re_ket": d.ket.real, "im_ket": d.ket.imag,
             "re_bra": d.bra.real, "im_bra": d.bra.imag,
             "re_c": d.coeff.real, "im_c": d.coeff.imag}
            for d in state.dyads
        ],
    }


def state_from_dict(data: dict) -> DyadState:
    dyads = tuple(
        CoherentDyad(complex(d["re_ket"], d["im_ket"]),
                     complex(d["re_bra"], d["im_bra"]),
                     complex(d["re_c"], d["im_c"]))
        for d in data["dyads"])
    return DyadState(dyads, Frame(data["frame"]), float(data["time"]))
