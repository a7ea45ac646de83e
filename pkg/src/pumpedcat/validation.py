"""Cross-validation suite: every closed-form result against the oracle.

Each check is self-contained (fixed parameters, fixed seeds, fixed
tolerances) and returns a pass/fail verdict with a one-line numeric
summary, so repeated runs of the suite produce identical reports. The
checks cover: the pump-locked fixed point, the vacuum-to-stationary
attractor, free-decay coherence loss, pumped cat evolution, the Wigner
closed form, linear entropy, two-atom conditional probabilities, Monte
Carlo outcome statistics, the thermal characteristic function, and
byte-level determinism of the command-line interface.
"""
from __future__ import annotations

import json
import math
import os
import subprocess
import sys
import tempfile
import time as _time
from dataclasses import dataclass

import numpy as np

from .evolution import (char_fn_normal, char_fn_symmetric, evolve_state,
                        free_decoherence_time, linear_entropy_closed_form,
                        pump_lock, stationary_amplitude)
from .fock import (detect_matrix, dyads_to_fock, excursion_bound, integrate,
                   recommended_dim, trace_distance, char_fn_point)
from .phase_space import (GridSpec, grid_normalization, wigner_cat_closed_form,
                          wigner_dyad, wigner_state)
from .protocol import ProtocolConfig, conditional_probability, run_sequence
from .states import (CavityParams, coherent, linear_entropy, make_cat,
                     parity_expectation, vacuum)

_SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True)
class CheckResult:
    number: int
    name: str
    passed: bool
    details: str
    elapsed: float


def _check_fixed_point():
    alpha = _SQRT5
    params = pump_lock(alpha, CavityParams(gamma=1.0))
    rho0 = coherent(alpha)
    times = (0.5, 1.0, 3.0)
    analytic = [evolve_state(rho0, t, params) for t in times]
    drift = max(max(abs(st.dyads[0].ket - alpha), abs(st.dyads[0].bra - alpha),
                    abs(st.dyads[0].coeff - 1.0)) for st in analytic)
    dim = 64
    snaps = integrate(dyads_to_fock(rho0, dim), times[-1], params,
                      dt=1e-3, t_eval=times)
    gap = max(trace_distance(dyads_to_fock(st, dim), sn)
              for st, sn in zip(analytic, snaps))
    ok = drift < 1e-12 and gap < 1e-5
    return ok, (f"label/coeff drift {drift:.2e} (tol 1e-12), "
                f"oracle distance {gap:.2e} (tol 1e-5)")


def _check_attractor():
    params = CavityParams(gamma=1.0, pump_amp=1.0)
    target = stationary_amplitude(params)
    rho0 = vacuum()
    a10 = evolve_state(rho0, 10.0, params)
    a25 = evolve_state(rho0, 25.0, params)
    dim = 40
    snaps = integrate(dyads_to_fock(rho0, dim), 25.0, params,
                      t_eval=(10.0, 25.0))
    f10 = dyads_to_fock(a10, dim)
    f25 = dyads_to_fock(a25, dim)
    fat = dyads_to_fock(coherent(target), dim)
    gap_oracle = max(trace_distance(f10, snaps[0]),
                     trace_distance(f25, snaps[1]))
    # the residual distance to the attractor is itself exactly predictable:
    # two coherent states sit at sqrt(1 - e^{-|delta|^2})
    w10 = a10.dyads[0].ket
    predicted = math.sqrt(1.0 - math.exp(-abs(w10 - target) ** 2))
    resid_gap = abs(trace_distance(f10, fat) - predicted)
    d25a = trace_distance(f25, fat)
    d25o = trace_distance(snaps[1], fat)
    ok = (gap_oracle < 1e-5 and resid_gap < 1e-5
          and d25a < 1e-5 and d25o < 1e-5)
    return ok, (f"analytic-oracle {gap_oracle:.2e}; residual mismatch at "
                f"gamma t=10 {resid_gap:.2e}; attractor distance at "
                f"gamma t=25 {d25a:.2e} / oracle {d25o:.2e} (tol 1e-5)")


def _check_free_decay():
    alpha = _SQRT5
    params = CavityParams(gamma=1.0)
    cat = make_cat(alpha, 0.0)
    c0 = cat.dyads[2].coeff
    worst = 0.0
    for t in (0.1, 1.0):
        ratio = evolve_state(cat, t, params).dyads[2].coeff / c0
        worst = max(worst, abs(ratio - math.exp(-10.0 * (1.0 - math.exp(-t)))))
    t_d = free_decoherence_time(alpha, params)
    mag = abs(evolve_state(cat, t_d, params).dyads[2].coeff / c0)
    in_band = math.exp(-1.05) <= mag <= math.exp(-0.95)
    ok = worst < 1e-12 and abs(t_d - 0.1) < 1e-15 and in_band
    return ok, (f"coherence factor error {worst:.2e} (tol 1e-12); "
                f"t_d {t_d:.3f}; factor at t_d {mag:.4f} in "
                f"[{math.exp(-1.05):.4f}, {math.exp(-0.95):.4f}]: {in_band}")


def _check_pumped_cat():
    alpha = _SQRT5
    params = CavityParams(gamma=1.0, pump_amp=1.0)
    cat = make_cat(alpha, 0.0)
    dim = recommended_dim(excursion_bound(cat, params))
    times = (0.1, 0.5, 1.0, 3.0)
    snaps = integrate(dyads_to_fock(cat, dim), times[-1], params, t_eval=times)
    gap = max(trace_distance(dyads_to_fock(evolve_state(cat, t, params), dim), sn)
              for t, sn in zip(times, snaps))
    return gap < 1e-5, f"worst oracle distance {gap:.2e} at dim {dim} (tol 1e-5)"


def _check_wigner():
    alpha = _SQRT5
    phi = 0.0
    params = CavityParams(gamma=1.0, pump_amp=1.0)
    cat = make_cat(alpha, phi)
    spec = GridSpec(-6.0, 6.0, -6.0, 6.0, 200, 200)
    zeta = spec.mesh()
    worst_pt = 0.0
    worst_norm = 0.0
    for t in (0.0, 1.0):
        grid = wigner_state(evolve_state(cat, t, params), spec)
        closed = wigner_cat_closed_form(alpha, phi, t, params, zeta)
        worst_pt = max(worst_pt, float(np.max(np.abs(grid.values - closed))))
        worst_norm = max(worst_norm, abs(grid_normalization(grid) - 1.0))
    center = sum(wigner_dyad(d, 0j) for d in cat.dyads)
    center_gap = abs(center.real - 2.0 / math.pi)
    ok = worst_pt < 1e-12 and center_gap < 1e-6 and worst_norm < 1e-4
    return ok, (f"pointwise gap {worst_pt:.2e} (tol 1e-12); origin value off "
                f"2/pi by {center_gap:.2e} (tol 1e-6); normalization off by "
                f"{worst_norm:.2e} (tol 1e-4)")


def _check_entropy():
    alpha = _SQRT5
    params = pump_lock(alpha, CavityParams(gamma=1.0))
    cat = make_cat(alpha, 0.0)
    ts = np.linspace(0.0, 10.0, 200)
    closed = np.asarray(linear_entropy_closed_form(alpha, ts, params, 0.0))
    engine = np.array([linear_entropy(evolve_state(cat, float(t), params))
                       for t in ts])
    gap = float(np.max(np.abs(closed - engine)))
    ok = gap <= 1e-10 and closed[0] < 1e-12 and closed[-1] < 1e-3
    return ok, (f"closed-form vs engine {gap:.2e} (tol 1e-10); "
                f"S(0) = {closed[0]:.2e}, S(10/gamma) = {closed[-1]:.2e}")


def _check_cond_probs():
    alpha = _SQRT5
    delays = (0.01, 0.1, 1.0, 3.0, 10.0, 20.0)
    worst = 0.0
    for f in (0.0, 0.5, 1.0, 2.0):
        params = CavityParams(gamma=1.0, pump_amp=f)
        cats = (make_cat(alpha, 0.0), make_cat(alpha, math.pi))
        dim = recommended_dim(excursion_bound(cats[0], params))
        rho0 = np.stack([dyads_to_fock(c, dim) for c in cats])
        snaps = integrate(rho0, delays[-1], params, t_eval=delays)
        # three-way agreement, both outcomes, over delay x pump x parity
        for it, t in enumerate(delays):
            for ip, phi in enumerate((0.0, math.pi)):
                evolved = evolve_state(cats[ip], t, params)
                par = parity_expectation(evolved)
                for outcome, sign in (("g", 1.0), ("e", -1.0)):
                    closed = conditional_probability(phi, outcome, t, alpha, params)
                    dyad = 0.5 * (1.0 + sign * par)
                    fock = detect_matrix(snaps[it][ip], outcome)[0]
                    worst = max(worst, abs(closed - dyad), abs(closed - fock),
                                abs(dyad - fock))
    big = math.sqrt(20.0)
    p1 = CavityParams(gamma=1.0, pump_amp=1.0)
    lim_small = max(
        abs(conditional_probability(0.0, "g", 1e-6, big, p1) - 1.0),
        abs(conditional_probability(math.pi, "g", 1e-6, big, p1) - 0.0))
    lim_late = max(abs(conditional_probability(phi, oc, 20.0, big, p1) - 0.5)
                   for phi in (0.0, math.pi) for oc in ("g", "e"))
    ok = worst < 1e-6 and lim_small < 1e-3 and lim_late < 1e-3
    return ok, (f"lattice three-way gap {worst:.2e} (tol 1e-6); fresh-cat "
                f"limit off {lim_small:.2e}, late-time limit off "
                f"{lim_late:.2e} (tol 1e-3)")


def _check_montecarlo():
    alpha = _SQRT5
    params = CavityParams(gamma=1.0, pump_amp=1.0)
    delay = 0.1
    cfg = ProtocolConfig(alpha=alpha, params=params, delay=delay, n_atoms=2,
                         feedback=False, seed=716258, n_trajectories=100_000)
    trajs = run_sequence(cfg)
    n = len(trajs)
    firsts = np.array([t.records[0].outcome == "g" for t in trajs])
    seconds = np.array([t.records[1].outcome == "g" for t in trajs])
    p1 = 0.5 * (1.0 + math.exp(-2.0 * alpha * alpha))
    zs = [abs(float(firsts.mean()) - p1) / math.sqrt(p1 * (1.0 - p1) / n)]
    for first_g, phi in ((True, 0.0), (False, math.pi)):
        sel = seconds[firsts == first_g]
        p = conditional_probability(phi, "g", delay, alpha, params)
        zs.append(abs(float(sel.mean()) - p)
                  / math.sqrt(p * (1.0 - p) / sel.size))
    zcfg = ProtocolConfig(alpha=alpha, params=params, delay=1e-4, n_atoms=10,
                          feedback=False, seed=424242, n_trajectories=10_000)
    repeat = float(np.mean([
        all(r.outcome == t.records[0].outcome for r in t.records)
        for t in run_sequence(zcfg)]))
    ok = max(zs) <= 3.0 and repeat >= 0.95
    return ok, (f"z-scores {', '.join(f'{z:.2f}' for z in zs)} (max 3); "
                f"repeated-outcome fraction {repeat:.4f} (min 0.95)")


def _check_thermal_cf():
    alpha = math.sqrt(2.0)
    cat = make_cat(alpha, 0.0)
    t = 0.7
    dim = 64
    etas = (0.2, -0.3 + 0.4j, 0.5j, -0.7, 1.0 + 0.3j,
            -0.2 - 0.9j, 1.3j, 0.8 - 0.8j, -1.2 + 0.5j, 1.5)
    worst = 0.0
    worst_int = 0.0
    for nbar in (0.5, 2.0):
        params = CavityParams(gamma=1.0, nbar=nbar)

        def chi0(e, _p=CavityParams(gamma=1.0)):
            return char_fn_normal(cat, e, 0.0, _p) * math.exp(-0.5 * abs(e) ** 2)

        snap = integrate(dyads_to_fock(cat, dim), t, params)
        for eta in etas:
            closed = char_fn_symmetric(chi0, eta, t, params)
            alt = char_fn_normal(cat, eta, t, params) * math.exp(-0.5 * abs(eta) ** 2)
            oracle = char_fn_point(snap, eta, order="symmetric")
            worst = max(worst, abs(closed - oracle))
            worst_int = max(worst_int, abs(closed - alt))
    ok = worst < 1e-5 and worst_int < 1e-12
    return ok, (f"closed-form vs oracle {worst:.2e} (tol 1e-5); "
                f"ordering identity residue {worst_int:.2e} (tol 1e-12)")


def _check_determinism():
    base = [sys.executable, "-m", "pumpedcat"]
    mc = ["montecarlo", "--alpha-sq", "5", "--pump", "1", "--delay", "0.1",
          "--atoms", "2", "--trajectories", "200", "--seed", "7"]
    val = ["validate", "--criteria", "3"]
    with tempfile.TemporaryDirectory() as td:
        paths = [os.path.join(td, name) for name in ("a.json", "b.json")]
        blobs = []
        for path in paths:
            r = subprocess.run(base + mc + ["--out", path],
                               capture_output=True, timeout=600)
            if r.returncode != 0:
                return False, (f"montecarlo run failed with code {r.returncode}: "
                               f"{r.stderr.decode(errors='replace')[:200]}")
            with open(path, "rb") as fh:
                blobs.append(fh.read())
        mc_same = blobs[0] == blobs[1]
        json.loads(blobs[0])  # must be well-formed
        outs = []
        codes = []
        for _ in range(2):
            r = subprocess.run(base + val, capture_output=True, timeout=600)
            outs.append(r.stdout)
            codes.append(r.returncode)
        val_same = outs[0] == outs[1] and codes[0] == codes[1] == 0
    ok = mc_same and val_same
    return ok, (f"montecarlo reruns identical: {mc_same}; "
                f"validate reruns identical and passing: {val_same}")


CRITERIA = (
    (1, "pump-locked stationary state", _check_fixed_point),
    (2, "pumped vacuum attractor", _check_attractor),
    (3, "free-decay coherence factor", _check_free_decay),
    (4, "pumped cat vs integrator", _check_pumped_cat),
    (5, "wigner closed form", _check_wigner),
    (6, "linear entropy closed form", _check_entropy),
    (7, "conditional outcome probabilities", _check_cond_probs),
    (8, "monte carlo outcome statistics", _check_montecarlo),
    (9, "thermal characteristic function", _check_thermal_cf),
    (10, "seeded rerun determinism", _check_determinism),
)

# wall-clock budgets (seconds); exceeding one fails the check
_BUDGETS = {1: 10.0, 4: 60.0, 8: 300.0}


def run_criteria(numbers=None) -> list[CheckResult]:
    """Run the numbered checks (all by default), in order."""
    if numbers is not None:
        numbers = set(int(n) for n in numbers)
        known = {num for num, _, _ in CRITERIA}
        bad = numbers - known
        if bad:
            raise ValueError(f"unknown criteria: {sorted(bad)}")
    results = []
    for num, name, fn in CRITERIA:
        if numbers is not None and num not in numbers:
            continue
        t0 = _time.perf_counter()
        ok, details = fn()
        elapsed = _time.perf_counter() - t0
        budget = _BUDGETS.get(num)
        if budget is not None and elapsed >= budget:
            ok = False
            details += f"; runtime {elapsed:.1f} s over the {budget:.0f} s budget"
        results.append(CheckResult(num, name, ok, details, elapsed))
    return results


def format_report(results) -> str:
    """Fixed-format pass/fail table (no wall times, so reruns byte-match)."""
    lines = [f"[{'PASS' if r.passed else 'FAIL'}] {r.number:>2} "
             f"{r.name}: {r.details}" for r in results]
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines)
