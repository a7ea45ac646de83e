"""Dispersive atom probes of the field: Ramsey readout, collapse, feedback.

A two-level atom crosses a Ramsey zone, a dispersive region, and a second
Ramsey zone before being detected. The pi/2 pulses act as

    |e> -> (|e> + |g>)/sqrt(2),      |g> -> (-|e> + |g>)/sqrt(2),

and the dispersive region multiplies field labels attached to the atomic
|e> component by -1 (a pi phase per photon). Detecting the atom in g or e
then collapses the field with

    rho_{g/e} = (1/4)(P rho P + rho +- (P rho + rho P)) / prob,

P being the photon-number parity operator: an exact projection onto the
even (g) or odd (e) photon-number subspace. On a coherent state this
manufactures a cat; repeated on a cat it refreshes or toggles the parity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateCat, InternalConsistencyError, NegativeTime,
                     OutsideCatManifold, ThermalNotSupported,
                     ZeroProbabilityBranch)
from .evolution import coeff_w, evolve_state
from .states import (CavityParams, CoherentDyad, DyadState, Frame, coherent,
                     compact, overlap, parity_expectation, trace)


@dataclass(frozen=True)
class AtomFieldState:
    """Joint atom-field operator in the atomic {e, g} basis.

    Blocks are dyad sums <i| rho_joint |j>; they are not individually
    normalized, only tr(ee) + tr(gg) = 1 holds.
    """

    ee: DyadState
    eg: DyadState
    ge: DyadState
    gg: DyadState


@dataclass(frozen=True)
class DetectionRecord:
    """One atom detection: when, what came out, how likely it was."""

    atom_index: int
    outcome: str
    probability: float
    time: float
    feedback_applied: bool = False


@dataclass(frozen=True)
class ProtocolConfig:
    """Configuration of a measurement sequence.

    delay is the free-evolution time between successive atoms (the first
    atom probes the freshly prepared coherent state at t = 0). dyad_cap
    bounds the dyad count kept after each detection: the merge tolerance
    escalates by decades until the state fits, which keeps long pumped
    sequences tractable at a controlled, deterministic approximation.
    """

    alpha: complex
    params: CavityParams
    delay: float
    n_atoms: int
    feedback: bool = False
    seed: int = 0
    n_trajectories: int = 1
    merge_tol: float = 1e-12
    prune_tol: float = 1e-15
    dyad_cap: int = 48

    def __post_init__(self):
        if self.n_atoms < 1:
            raise ValueError("need at least one atom")
        if self.delay < 0:
            raise NegativeTime(f"delay = {self.delay}")
        if self.n_trajectories < 1:
            raise ValueError("need at least one trajectory")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class Trajectory:
    """One sampled measurement record and the conditioned final state."""

    index: int
    seed: int
    records: tuple[DetectionRecord, ...]
    final_state: DyadState


def _empty_like(field: DyadState) -> DyadState:
    return DyadState((), field.frame, field.time)


def prepare_joint(field: DyadState) -> AtomFieldState:
    """Atom enters excited: |e><e| (x) field."""
    e = _empty_like(field)
    return AtomFieldState(ee=field, eg=e, ge=e, gg=e)


def _mix(field_like: DyadState, *signed: tuple[float, DyadState]) -> DyadState:
    dyads = []
    for s, block in signed:
        dyads.extend(CoherentDyad(d.ket, d.bra, s * d.coeff) for d in block.dyads)
    return DyadState(tuple(dyads), field_like.frame, field_like.time)


def ramsey_rotation(joint: AtomFieldState) -> AtomFieldState:
    """Apply the pi/2 pulse to the atom on every block."""
    h = 0.5
    ee, eg, ge, gg = joint.ee, joint.eg, joint.ge, joint.gg
    return AtomFieldState(
        ee=_mix(ee, (h, ee), (-h, eg), (-h, ge), (h, gg)),
        eg=_mix(ee, (h, ee), (h, eg), (-h, ge), (-h, gg)),
        ge=_mix(ee, (h, ee), (-h, eg), (h, ge), (-h, gg)),
        gg=_mix(ee, (h, ee), (h, eg), (h, ge), (h, gg)),
    )


def _flip(block: DyadState, kets: bool, bras: bool) -> DyadState:
    return DyadState(tuple(CoherentDyad(-d.ket if kets else d.ket,
                                        -d.bra if bras else d.bra,
                                        d.coeff) for d in block.dyads),
                     block.frame, block.time)


def dispersive_shift(joint: AtomFieldState) -> AtomFieldState:
    """Pi phase per photon conditioned on the atomic e component.

    Field kets pick up label -> -label when |e> stands on the ket side,
    bras when <e| stands on the bra side.
    """
    return AtomFieldState(
        ee=_flip(joint.ee, True, True),
        eg=_flip(joint.eg, True, False),
        ge=_flip(joint.ge, False, True),
        gg=joint.gg,
    )


def detect(joint: AtomFieldState, *, outcome: str | None = None,
           rng: np.random.Generator | None = None,
           merge_tol: float = 1e-12,
           prune_tol: float = 1e-15) -> tuple[str, DyadState, float]:
    """Measure the atom after the second Ramsey zone.

    Pass either a fixed outcome ('g'/'e') or a Generator to draw one by
    inverse CDF from a single uniform. Returns (outcome, collapsed
    normalized field state, probability).
    """
    if (outcome is None) == (rng is None):
        raise ValueError("pass exactly one of outcome or rng")
    p_g = trace(joint.gg).real
    p_e = trace(joint.ee).real
    if abs(p_g + p_e - 1.0) > 1e-12:
        raise InternalConsistencyError(
            f"detection completeness broken: p_g + p_e = {p_g + p_e!r}")
    if rng is not None:
        outcome = "g" if float(rng.random()) < p_g else "e"
    if outcome not in ("g", "e"):
        raise ValueError(f"outcome must be 'g' or 'e', got {outcome!r}")
    prob = p_g if outcome == "g" else p_e
    if prob < 1e-300:
        raise ZeroProbabilityBranch(f"branch {outcome!r} has probability {prob}")
    block = joint.gg if outcome == "g" else joint.ee
    state = DyadState(tuple(CoherentDyad(d.ket, d.bra, d.coeff / prob)
                            for d in block.dyads), block.frame, block.time)
    return outcome, compact(state, merge_tol, prune_tol), float(prob)


def collapse_field(field: DyadState, outcome: str, *, merge_tol: float = 1e-12,
                   prune_tol: float = 1e-15) -> tuple[float, DyadState]:
    """Parity-readout collapse written directly on the field dyads.

    Equivalent to running the full Ramsey pipeline and detecting; each
    input dyad spawns its four parity images with weight 1/4.
    """
    if outcome not in ("g", "e"):
        raise ValueError(f"outcome must be 'g' or 'e', got {outcome!r}")
    s = 1.0 if outcome == "g" else -1.0
    dyads = []
    for x, y, c in field.dyads:
        q = 0.25 * c
        dyads.append(CoherentDyad(-x, -y, q))
        dyads.append(CoherentDyad(x, y, q))
        dyads.append(CoherentDyad(-x, y, s * q))
        dyads.append(CoherentDyad(x, -y, s * q))
    raw = DyadState(tuple(dyads), field.frame, field.time)
    prob = trace(raw).real
    if prob < 1e-300:
        raise ZeroProbabilityBranch(f"branch {outcome!r} has probability {prob}")
    state = DyadState(tuple(CoherentDyad(d.ket, d.bra, d.coeff / prob)
                            for d in raw.dyads), field.frame, field.time)
    return float(prob), compact(state, merge_tol, prune_tol)


def atom_step(field: DyadState, *, outcome: str | None = None,
              rng: np.random.Generator | None = None,
              merge_tol: float = 1e-12,
              prune_tol: float = 1e-15) -> tuple[str, DyadState, float]:
    """One full atom transit: prepare, pi/2, dispersive, pi/2, detect."""
    joint = ramsey_rotation(dispersive_shift(ramsey_rotation(prepare_joint(field))))
    return detect(joint, outcome=outcome, rng=rng,
                  merge_tol=merge_tol, prune_tol=prune_tol)


def conditional_probability(phi_first: float, outcome_second: str, T: float,
                            alpha: complex, params: CavityParams) -> float:
    """Closed-form outcome probabilities for the second atom.

    The first atom left the cat of angle phi_first (0 for g, pi for e);
    the field then evolved for T under the configured pump before the
    second atom is read out. Exact for nbar = 0.
    """
    if params.nbar != 0.0:
        raise ThermalNotSupported("closed form assumes a zero-temperature bath")
    if outcome_second not in ("g", "e"):
        raise ValueError(f"outcome must be 'g' or 'e', got {outcome_second!r}")
    alpha = complex(alpha)
    a2 = abs(alpha) ** 2
    u = math.exp(-0.5 * params.gamma * T)
    w = coeff_w(T, params)
    cp = math.cos(phi_first)
    awbar = alpha * w.conjugate()
    bracket = (math.exp(-2.0 * a2 * u * u) * math.cosh(4.0 * u * awbar.real)
               + cp * math.exp(-2.0 * a2 * (1.0 - u * u))
               * math.cos(4.0 * u * awbar.imag))
    core = math.exp(-2.0 * abs(w) ** 2) / (1.0 + cp * math.exp(-2.0 * a2)) * bracket
    sign = 1.0 if outcome_second == "g" else -1.0
    return 0.5 * (1.0 + sign * core)


def estimate_cat_amplitude(state: DyadState) -> complex:
    """Representative label a of a state living near span{|a>, |-a>}.

    Weighted centroid of the ket labels after folding them onto the
    half-plane of the heaviest dyad.
    """
    if not state.dyads:
        raise OutsideCatManifold("empty state")
    weights = np.abs(state.coeffs * overlap(state.kets, state.bras))
    if not np.any(weights > 0):
        raise OutsideCatManifold("state carries no trace weight")
    ref = state.kets[int(np.argmax(weights))]
    signs = np.where((state.kets * np.conjugate(ref)).real >= 0, 1.0, -1.0)
    return complex(np.sum(weights * signs * state.kets) / np.sum(weights))


def feedback_flip(state: DyadState, alpha_ref: complex | None = None, *,
                  residue_tol: float = 1e-6) -> DyadState:
    """Exchange the even and odd cat components of a state on the
    manifold span{|a>, |-a>}.

    Decomposes rho in the orthonormal cat pair |+-> ~ |a> +- |-a>, swaps
    the two populations and transposes the cross terms (conjugation by
    the exchange unitary), and rebuilds four dyads on the labels +-a.
    Raises OutsideCatManifold when more than residue_tol of the trace
    lives outside the manifold, DegenerateCat when the odd component is
    unnormalizable (a ~ 0).
    """
    a = complex(alpha_ref) if alpha_ref is not None else estimate_cat_amplitude(state)
    k = math.exp(-2.0 * abs(a) ** 2)
    np2 = 2.0 * (1.0 + k)
    nm2 = 2.0 * (1.0 - k)
    if nm2 <= 1e-300:
        raise DegenerateCat(f"odd cat component degenerate at a = {a}")
    sp = 1.0 / math.sqrt(np2)
    sm = 1.0 / math.sqrt(nm2)
    # <+|x_d>, <-|x_d> and the bra-side conjugates
    vk_p = sp * (overlap(state.kets, a) + overlap(state.kets, -a))
    vk_m = sm * (overlap(state.kets, a) - overlap(state.kets, -a))
    vb_p = np.conjugate(sp * (overlap(state.bras, a) + overlap(state.bras, -a)))
    vb_m = np.conjugate(sm * (overlap(state.bras, a) - overlap(state.bras, -a)))
    c = state.coeffs
    m_pp = complex(np.sum(c * vk_p * vb_p))
    m_pm = complex(np.sum(c * vk_p * vb_m))
    m_mp = complex(np.sum(c * vk_m * vb_p))
    m_mm = complex(np.sum(c * vk_m * vb_m))
    tr = trace(state)
    residue = abs(tr - m_pp - m_mm)
    if residue > residue_tol:
        raise OutsideCatManifold(
            f"projection residue {residue:.3e} exceeds {residue_tol:.1e}")
    # exchange |+> <-> |->
    m2 = np.array([[m_mm, m_mp], [m_pm, m_pp]])
    t = np.array([[sp, sp], [sm, -sm]])  # rows: +, -; columns: |a>, |-a>
    cmat = t.T @ m2 @ t
    labels = (a, -a)
    dyads = tuple(CoherentDyad(labels[s], labels[r], complex(cmat[s, r]))
                  for s in range(2) for r in range(2))
    out = DyadState(dyads, state.frame, state.time)
    tr_out = trace(out)
    if tr_out == 0:
        raise InternalConsistencyError("feedback lost the trace")
    scale = tr / tr_out
    if abs(scale.imag) <= 1e-12 * abs(scale):
        scale = scale.real
    return DyadState(tuple(CoherentDyad(d.ket, d.bra, d.coeff * scale)
                           for d in out.dyads), state.frame, state.time)


def _bounded_compact(state: DyadState, config: ProtocolConfig) -> DyadState:
    tol = config.merge_tol
    while state.n_dyads > config.dyad_cap and tol < 0.2:
        tol *= 10.0
        state = compact(state, tol, config.prune_tol)
    return state


def run_sequence(config: ProtocolConfig) -> list[Trajectory]:
    """Sample measurement trajectories of a multi-atom sequence.

    Trajectory i draws from the counter-based stream keyed (seed, i), one
    uniform per atom, so results are reproducible bit for bit and
    independent of trajectory order. The conditioned field state is a
    deterministic function of the outcome prefix; states are therefore
    memoized on prefixes and shared across trajectories.
    """
    if config.params.nbar != 0.0:
        raise ThermalNotSupported("trajectory engine requires nbar = 0")
    field0 = coherent(config.alpha)
    ready: dict[tuple, tuple[DyadState, float]] = {}
    post: dict[tuple, tuple[DyadState, float, bool]] = {}

    def ready_state(prefix: tuple) -> tuple[DyadState, float]:
        hit = ready.get(prefix)
        if hit is not None:
            return hit
        if not prefix:
            s = field0
        else:
            s = evolve_state(post_state(prefix)[0], config.delay, config.params)
        p_g = 0.5 * (1.0 + parity_expectation(s))
        ready[prefix] = (s, p_g)
        return ready[prefix]

    def post_state(prefix: tuple) -> tuple[DyadState, float, bool]:
        hit = post.get(prefix)
        if hit is not None:
            return hit
        s, _ = ready_state(prefix[:-1])
        outcome = prefix[-1]
        prob, st = collapse_field(s, outcome, merge_tol=config.merge_tol,
                                  prune_tol=config.prune_tol)
        st = _bounded_compact(st, config)
        applied = False
        if config.feedback and outcome != prefix[0]:
            st = feedback_flip(st)
            applied = True
        post[prefix] = (st, prob, applied)
        return post[prefix]

    trajectories = []
    for i in range(config.n_trajectories):
        rng = np.random.Generator(
            np.random.Philox(key=np.array([config.seed, i], dtype=np.uint64)))
        prefix: tuple = ()
        records = []
        final = field0
        for k in range(config.n_atoms):
            _, p_g = ready_state(prefix)
            outcome = "g" if float(rng.random()) < p_g else "e"
            prefix += (outcome,)
            final, prob, applied = post_state(prefix)
            records.append(DetectionRecord(k, outcome, float(prob),
                                           k * config.delay, applied))
        trajectories.append(Trajectory(i, config.seed, tuple(records), final))
    return trajectories
