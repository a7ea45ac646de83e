"""Command-line interface: figure data, Monte Carlo runs, validation.

Commands
--------
wigner      evolve a cat and emit its Wigner function as CSV
entropy     closed-form linear entropy curve as CSV
probs       second-atom conditional probabilities vs delay as CSV (per pump)
montecarlo  seeded measurement trajectories as JSON
evolve      dyad states at requested times as JSON
validate    run the cross-validation suite and print a pass/fail table

Every command accepts --config FILE with a JSON object whose keys equal
the long option names (dashes as underscores, e.g. {"alpha_sq": 5});
explicit flags override file values and unknown keys are rejected.
Numbers in CSV output carry 17 significant digits; JSON floats use the
shortest exact representation. Identical configuration and seed produce
byte-identical output.

Exit codes: 0 success, 1 numeric failure, 2 usage error, 3 validation
failure.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

import numpy as np

from . import __version__
from .errors import CavityError
from .evolution import evolve_state, linear_entropy_closed_form, pump_lock
from .phase_space import GridSpec, wigner_state
from .protocol import ProtocolConfig, conditional_probability, run_sequence
from .states import CavityParams, make_cat, state_to_dict
from .validation import format_report, run_criteria


class _Usage(Exception):
    pass


_COMMON_DEFAULTS = {
    "gamma": 1.0, "omega0": 0.0, "alpha_sq": 5.0, "phi": 0.0,
    "pump": "1", "pump_lock": False, "pump_freq": None, "nbar": 0.0,
    "seed": 0, "out": None,
}

_CMD_DEFAULTS = {
    "wigner": {"time": 1.0, "grid": "-6:6:-6:6:200x200"},
    "entropy": {"t_max": 10.0, "samples": 201},
    "probs": {"pumps": "0,0.5,1,2", "t_max": 20.0, "samples": 201},
    "montecarlo": {"delay": 0.1, "atoms": 2, "trajectories": 1000,
                   "feedback": False, "dyad_cap": 48},
    "evolve": {"times": "0.5,1,3"},
    "validate": {"criteria": ""},
}

# probs sweeps its own pump list and fixes the first outcome to e;
# validate takes no physics parameters
_CMD_ALLOWED = {
    "wigner": set(_COMMON_DEFAULTS) | set(_CMD_DEFAULTS["wigner"]),
    "entropy": set(_COMMON_DEFAULTS) | set(_CMD_DEFAULTS["entropy"]),
    "probs": (set(_COMMON_DEFAULTS) - {"pump", "pump_lock", "phi"})
    | set(_CMD_DEFAULTS["probs"]),
    "montecarlo": set(_COMMON_DEFAULTS) | set(_CMD_DEFAULTS["montecarlo"]),
    "evolve": set(_COMMON_DEFAULTS) | set(_CMD_DEFAULTS["evolve"]),
    "validate": {"out", "criteria"},
}


def _add_common(p: argparse.ArgumentParser, *, pump: bool = True,
                phi: bool = True) -> None:
    p.add_argument("--gamma", type=float, help="cavity energy decay rate")
    p.add_argument("--omega0", type=float, help="cavity frequency (lab frame)")
    p.add_argument("--alpha-sq", dest="alpha_sq", type=float,
                   help="mean photon number |alpha|^2 of the initial cat")
    if phi:
        p.add_argument("--phi", type=float,
                       help="cat phase: 0 even, pi odd")
    if pump:
        p.add_argument("--pump", type=str,
                       help="complex pump amplitude F, e.g. '1' or '0.5j'")
        p.add_argument("--pump-lock", dest="pump_lock", action="store_true",
                       help="set F = i alpha gamma / 2 (freezes |alpha>)")
    p.add_argument("--pump-freq", dest="pump_freq", type=float,
                   help="pump frequency (default: resonant)")
    p.add_argument("--nbar", type=float, help="thermal photons of the bath")
    p.add_argument("--seed", type=int, help="random seed")
    p.add_argument("--out", type=str, help="output path (default: stdout)")
    p.add_argument("--config", type=str, help="JSON config file")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pumpedcat",
        description="pumped lossy cavity: cats, atoms, oracles")
    parser.add_argument("--version", action="version",
                        version=f"pumpedcat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def new(name, help_, *, pump=True, phi=True, common=True):
        p = sub.add_parser(name, help=help_,
                           argument_default=argparse.SUPPRESS)
        if common:
            _add_common(p, pump=pump, phi=phi)
        return p

    p = new("wigner", "Wigner function of the evolved cat as CSV")
    p.add_argument("--time", type=float, help="evolution time")
    p.add_argument("--grid", type=str, help="window re0:re1:im0:im1:NxM")

    p = new("entropy", "closed-form linear entropy curve as CSV")
    p.add_argument("--t-max", dest="t_max", type=float,
                   help="last gamma*t sample")
    p.add_argument("--samples", type=int, help="number of samples")

    p = new("probs", "second-atom outcome probabilities vs delay",
            pump=False, phi=False)
    p.add_argument("--pumps", type=str, help="comma-separated pump sweep")
    p.add_argument("--t-max", dest="t_max", type=float,
                   help="last gamma*T sample")
    p.add_argument("--samples", type=int, help="number of samples")

    p = new("montecarlo", "seeded measurement trajectories as JSON")
    p.add_argument("--delay", type=float, help="delay between atoms")
    p.add_argument("--atoms", type=int, help="atoms per trajectory")
    p.add_argument("--trajectories", type=int, help="number of trajectories")
    p.add_argument("--feedback", action="store_true",
                   help="flip the cat parity after a changed outcome")
    p.add_argument("--dyad-cap", dest="dyad_cap", type=int,
                   help="dyad budget kept after each detection")

    p = new("evolve", "dyad states at requested times as JSON")
    p.add_argument("--times", type=str, help="comma-separated times")

    p = new("validate", "run the cross-validation suite", common=False)
    p.add_argument("--criteria", type=str,
                   help="comma-separated check numbers (default: all)")
    p.add_argument("--out", type=str, help="output path (default: stdout)")
    p.add_argument("--config", type=str, help="JSON config file")
    return parser


def _as_complex(v) -> complex:
    if isinstance(v, bool):
        raise _Usage(f"cannot read a pump amplitude from {v!r}")
    if isinstance(v, (int, float, complex)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    if isinstance(v, str):
        try:
            return complex(v.replace(" ", ""))
        except ValueError:
            raise _Usage(f"bad complex number {v!r}") from None
    raise _Usage(f"cannot read a pump amplitude from {v!r}")


def _as_floats(v) -> list[float]:
    if isinstance(v, str):
        items = [s for s in v.split(",") if s.strip()]
    elif isinstance(v, (list, tuple)):
        items = v
    else:
        items = [v]
    try:
        return [float(x) for x in items]
    except (TypeError, ValueError):
        raise _Usage(f"bad number list {v!r}") from None


def _as_ints(v) -> list[int]:
    out = []
    for x in _as_floats(v):
        if x != int(x):
            raise _Usage(f"expected integers, got {x}")
        out.append(int(x))
    return out


def _parse_grid(s) -> GridSpec:
    parts = str(s).split(":")
    if len(parts) != 5 or "x" not in parts[4].lower():
        raise _Usage(f"grid must be re0:re1:im0:im1:NxM, got {s!r}")
    try:
        re0, re1, im0, im1 = (float(x) for x in parts[:4])
        n_re, n_im = (int(x) for x in parts[4].lower().split("x"))
    except ValueError:
        raise _Usage(f"grid must be re0:re1:im0:im1:NxM, got {s!r}") from None
    return GridSpec(re0, re1, im0, im1, n_re, n_im)


def _resolve(ns: argparse.Namespace) -> dict:
    cmd = ns.command
    allowed = _CMD_ALLOWED[cmd]
    defaults = {k: v for k, v in {**_COMMON_DEFAULTS,
                                  **_CMD_DEFAULTS[cmd]}.items() if k in allowed}
    provided = {k: v for k, v in vars(ns).items()
                if k not in ("command", "config")}
    file_cfg = {}
    path = getattr(ns, "config", None)
    if path:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise _Usage(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise _Usage("config file must hold a JSON object")
        unknown = sorted(set(raw) - allowed)
        if unknown:
            raise _Usage(f"unknown config keys for {cmd}: {', '.join(unknown)}")
        file_cfg = raw
    cfg = {**defaults, **file_cfg, **provided}
    cfg["command"] = cmd

    if "pump" in allowed and cfg.get("pump_lock") and (
            "pump" in provided or "pump" in file_cfg):
        raise _Usage("--pump and --pump-lock are mutually exclusive")
    if "alpha_sq" in cfg and not cfg["alpha_sq"] >= 0.0:
        raise _Usage(f"alpha-sq must be nonnegative, got {cfg['alpha_sq']}")
    for key in ("time", "delay"):
        if key in cfg and not cfg[key] >= 0.0:
            raise _Usage(f"{key} must be nonnegative, got {cfg[key]}")
    if "t_max" in cfg and not cfg["t_max"] > 0.0:
        raise _Usage(f"t-max must be positive, got {cfg['t_max']}")
    if "samples" in cfg and cfg["samples"] < 2:
        raise _Usage(f"samples must be at least 2, got {cfg['samples']}")
    for key in ("atoms", "trajectories"):
        if key in cfg and cfg[key] < 1:
            raise _Usage(f"{key} must be at least 1, got {cfg[key]}")
    if "dyad_cap" in cfg and cfg["dyad_cap"] < 4:
        raise _Usage(f"dyad-cap must be at least 4, got {cfg['dyad_cap']}")
    return cfg


def _params(cfg: dict) -> tuple[float, CavityParams]:
    alpha = math.sqrt(cfg["alpha_sq"])
    base = CavityParams(gamma=cfg["gamma"], omega0=cfg["omega0"],
                        pump_amp=0j, pump_freq=cfg["pump_freq"],
                        nbar=cfg["nbar"])
    if cfg.get("pump_lock"):
        return alpha, pump_lock(alpha, base)
    return alpha, replace(base, pump_amp=_as_complex(cfg.get("pump", 0)))


def _shown_config(cfg: dict) -> dict:
    return {k: v for k, v in cfg.items() if k != "out"}


def _header_lines(cfg: dict) -> list[str]:
    blob = json.dumps(_shown_config(cfg), sort_keys=True, default=str)
    return [f"# pumpedcat {__version__}", f"# config: {blob}"]


def _emit(out: str | None, text: str) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_wigner(cfg: dict) -> int:
    alpha, params = _params(cfg)
    spec = _parse_grid(cfg["grid"])
    state = evolve_state(make_cat(alpha, cfg["phi"]), cfg["time"], params)
    grid = wigner_state(state, spec)
    mesh = spec.mesh()
    lines = _header_lines(cfg)
    lines.append("re_zeta,im_zeta,w")
    vals = grid.values
    for i_im in range(spec.n_im):
        for i_re in range(spec.n_re):
            z = mesh[i_im, i_re]
            lines.append(f"{z.real:.17g},{z.imag:.17g},{vals[i_im, i_re]:.17g}")
    _emit(cfg["out"], "\n".join(lines) + "\n")
    return 0


def _cmd_entropy(cfg: dict) -> int:
    alpha, params = _params(cfg)
    gts = np.linspace(0.0, cfg["t_max"], cfg["samples"])
    vals = np.asarray(linear_entropy_closed_form(
        alpha, gts / params.gamma, params, cfg["phi"]))
    lines = _header_lines(cfg)
    lines.append("gamma_t,entropy")
    lines.extend(f"{gt:.17g},{v:.17g}" for gt, v in zip(gts, vals))
    _emit(cfg["out"], "\n".join(lines) + "\n")
    return 0


def _cmd_probs(cfg: dict) -> int:
    alpha = math.sqrt(cfg["alpha_sq"])
    pumps = _as_floats(cfg["pumps"])
    if not pumps:
        raise _Usage("probs needs at least one pump value")
    gts = np.linspace(0.0, cfg["t_max"], cfg["samples"])
    sections = []
    for f in pumps:
        params = CavityParams(gamma=cfg["gamma"], omega0=cfg["omega0"],
                              pump_amp=f, pump_freq=cfg["pump_freq"],
                              nbar=cfg["nbar"])
        sub = dict(cfg)
        sub["pumps"] = f"{f:g}"
        lines = _header_lines(sub)
        lines.append("gamma_T,p_g_e,p_e_e")
        for gt in gts:
            t = gt / params.gamma
            pg = conditional_probability(math.pi, "g", t, alpha, params)
            pe = conditional_probability(math.pi, "e", t, alpha, params)
            lines.append(f"{gt:.17g},{pg:.17g},{pe:.17g}")
        sections.append((f, "\n".join(lines) + "\n"))
    out = cfg["out"]
    if out is None:
        sys.stdout.write("\n".join(text for _, text in sections))
        return 0
    if len(sections) == 1:
        _emit(out, sections[0][1])
        return 0
    root, dot, ext = out.rpartition(".")
    for f, text in sections:
        suffixed = f"{root}_F{f:g}{dot}{ext}" if dot else f"{out}_F{f:g}"
        _emit(suffixed, text)
    return 0


def _cmd_montecarlo(cfg: dict) -> int:
    alpha, params = _params(cfg)
    pcfg = ProtocolConfig(alpha=alpha, params=params, delay=cfg["delay"],
                          n_atoms=cfg["atoms"], feedback=cfg["feedback"],
                          seed=cfg["seed"], n_trajectories=cfg["trajectories"],
                          dyad_cap=cfg["dyad_cap"])
    trajs = run_sequence(pcfg)
    payload = {
        "version": __version__,
        "config": _shown_config(cfg),
        "trajectories": [
            {
                "index": t.index,
                "seed": t.seed,
                "records": [
                    {"atom_index": r.atom_index, "outcome": r.outcome,
                     "probability": r.probability, "time": r.time,
                     "feedback_applied": r.feedback_applied}
                    for r in t.records],
                "final_state": state_to_dict(t.final_state),
            }
            for t in trajs],
    }
    _emit(cfg["out"], json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_evolve(cfg: dict) -> int:
    alpha, params = _params(cfg)
    times = _as_floats(cfg["times"])
    if not times:
        raise _Usage("evolve needs at least one time")
    if any(t < 0 for t in times):
        raise _Usage("times must be nonnegative")
    cat = make_cat(alpha, cfg["phi"])
    payload = {
        "version": __version__,
        "config": _shown_config(cfg),
        "times": times,
        "states": [state_to_dict(evolve_state(cat, t, params)) for t in times],
    }
    _emit(cfg["out"], json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return 0


def _cmd_validate(cfg: dict) -> int:
    numbers = _as_ints(cfg["criteria"]) if cfg["criteria"] else None
    results = run_criteria(numbers)
    _emit(cfg["out"], format_report(results) + "\n")
    return 0 if all(r.passed for r in results) else 3


_HANDLERS = {
    "wigner": _cmd_wigner,
    "entropy": _cmd_entropy,
    "probs": _cmd_probs,
    "montecarlo": _cmd_montecarlo,
    "evolve": _cmd_evolve,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = _build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _resolve(ns)
        return _HANDLERS[ns.command](cfg)
    except _Usage as exc:
        print(f"pumpedcat: error: {exc}", file=sys.stderr)
        return 2
    except CavityError as exc:
        print(f"pumpedcat: error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"pumpedcat: error: {exc}", file=sys.stderr)
        return 2
