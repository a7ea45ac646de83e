"""Exact dyad evolution under cavity damping and a classical pump.

In the frame rotating at the cavity frequency, the master equation

    d rho/dt = -i[F a^dag + conj(F) a, rho] + gamma D[a] rho      (nbar = 0)

maps a dyad |x><y| onto |u x + w><u y + w| with

    u(t) = e^{-gamma t/2},
    w(t) = F (e^{-i Delta t} - e^{-gamma t/2}) / (Delta + i gamma/2),

Delta being the pump detuning (w reduces to -i (2F/gamma)(1 - e^{-gamma t/2})
on resonance). Each dyad's contribution to the trace is individually
conserved, which pins the coefficient update; the exponent is assembled
as a single complex sum before exponentiating so labels with |x|^2 of a
few hundred neither overflow nor hit 0 * inf.

Thermal occupation spoils the dyad form; it survives at the level of
characteristic functions, provided here alongside the label algebra.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import replace
from typing import Callable

import numpy as np

from .errors import NegativeTime, ThermalNotSupported, ZeroAmplitude
from .states import CavityParams, CoherentDyad, DyadState, Frame, overlap


def coeff_u(t: float, params: CavityParams, frame: Frame = Frame.ROTATING) -> complex:
    """Label contraction factor u(t); picks up e^{-i omega0 t} in the lab frame."""
    if t < 0:
        raise NegativeTime(f"t = {t}")
    u = math.exp(-0.5 * params.gamma * t)
    if frame is Frame.LAB:
        return u * cmath.exp(-1j * params.omega0 * t)
    return complex(u)


def coeff_w(t: float, params: CavityParams, frame: Frame = Frame.ROTATING) -> complex:
    """Driven displacement w(t) accumulated by every label."""
    if t < 0:
        raise NegativeTime(f"t = {t}")
    g = params.gamma
    delta = params.detuning
    w = params.pump_amp * (cmath.exp(-1j * delta * t) - math.exp(-0.5 * g * t)) \
        / (delta + 0.5j * g)
    if frame is Frame.LAB:
        w *= cmath.exp(-1j * params.omega0 * t)
    return w


def thermal_factor(t: float, params: CavityParams) -> float:
    """(1 - e^{-gamma t}) (1/2 + nbar), the Gaussian blur of chi_S."""
    if t < 0:
        raise NegativeTime(f"t = {t}")
    return (1.0 - math.exp(-params.gamma * t)) * (0.5 + params.nbar)


def evolve_dyad(dyad: CoherentDyad, t: float, params: CavityParams) -> CoherentDyad:
    """Evolve one dyad for duration t (rotating-frame labels, nbar = 0)."""
    if params.nbar != 0.0:
        raise ThermalNotSupported("dyad evolution is exact only for nbar = 0")
    if t < 0:
        raise NegativeTime(f"t = {t}")
    u = math.exp(-0.5 * params.gamma * t)
    w = coeff_w(t, params)
    x, y, c = dyad
    x2 = u * x + w
    y2 = u * y + w
    # trace conservation: c' <y'|x'> = c <y|x>, computed as one exponent
    expo = (y.conjugate() * x - y2.conjugate() * x2
            + 0.5 * (abs(x2) ** 2 + abs(y2) ** 2 - abs(x) ** 2 - abs(y) ** 2))
    return CoherentDyad(x2, y2, c * cmath.exp(expo))


def evolve_state(state: DyadState, t: float, params: CavityParams) -> DyadState:
    """Evolve every dyad; advances the state clock by t."""
    if state.frame is not Frame.ROTATING:
        raise ValueError("lab-frame states are an output representation; "
                         "evolve the rotating-frame state and convert after")
    return DyadState(tuple(evolve_dyad(d, t, params) for d in state.dyads),
                     state.frame, state.time + t)


def char_fn_normal(state0: DyadState, eta: complex, t: float,
                   params: CavityParams) -> complex:
    """Normally ordered characteristic function of the evolved state.

    chi_N(eta, t) = chi_N(eta u(t), 0) e^{eta conj(w) - conj(eta) w}
                    x e^{-|eta|^2 (1 - e^{-gamma t}) nbar},
    with chi_N(., 0) evaluated on the dyad sum of state0. Valid for any
    nbar: thermal noise enters chi_N only through the last factor.
    """
    if state0.frame is not Frame.ROTATING:
        raise ValueError("expects a rotating-frame state")
    if t < 0:
        raise NegativeTime(f"t = {t}")
    u = math.exp(-0.5 * params.gamma * t)
    w = coeff_w(t, params)
    eta = complex(eta)
    eta0 = eta * u
    chi0 = sum(c * overlap(x, y) * cmath.exp(eta0 * y.conjugate() - eta0.conjugate() * x)
               for x, y, c in state0.dyads)
    chi = chi0 * cmath.exp(eta * w.conjugate() - eta.conjugate() * w)
    if params.nbar:
        chi *= math.exp(-abs(eta) ** 2 * (1.0 - math.exp(-params.gamma * t))
                        * params.nbar)
    return chi


def char_fn_symmetric(chi0: Callable[[complex], complex], eta: complex, t: float,
                      params: CavityParams) -> complex:
    """Symmetric-order chi_S(eta, t) from the initial chi_S(., 0) callable.

    chi_S(eta, t) = chi_S(eta u, 0) e^{eta conj(w) - conj(eta) w}
                    x e^{-|eta|^2 (1 - e^{-gamma t})(1/2 + nbar)}.
    """
    if t < 0:
        raise NegativeTime(f"t = {t}")
    u = math.exp(-0.5 * params.gamma * t)
    w = coeff_w(t, params)
    eta = complex(eta)
    return (complex(chi0(eta * u))
            * cmath.exp(eta * w.conjugate() - eta.conjugate() * w)
            * math.exp(-abs(eta) ** 2 * thermal_factor(t, params)))


def stationary_amplitude(params: CavityParams) -> complex:
    """Fixed point -2iF/gamma every label decays toward (resonant pump)."""
    if params.detuning != 0.0:
        raise ValueError("stationary amplitude is defined for a resonant pump")
    return -2j * params.pump_amp / params.gamma


def pump_lock(alpha: complex, params: CavityParams) -> CavityParams:
    """Parameters with the resonant pump F = i alpha gamma / 2 that freezes
    |alpha><alpha| in place."""
    return replace(params, pump_amp=0.5j * complex(alpha) * params.gamma,
                   pump_freq=params.omega0)


def free_decoherence_time(alpha: complex, params: CavityParams) -> float:
    """Cat coherence lifetime 1 / (2 gamma |alpha|^2)."""
    a2 = abs(complex(alpha)) ** 2
    if a2 <= 0.0:
        raise ZeroAmplitude("decoherence time diverges at alpha = 0")
    return 1.0 / (2.0 * params.gamma * a2)


def linear_entropy_closed_form(alpha: complex, t, params: CavityParams,
                               phi: float = 0.0):
    """Linear entropy of an evolved cat, S(t) = 1 - Tr rho^2, in closed form.

    Tr rho^2 = 2 [1 + e^{-4|a|^2 e^{-gt}} + e^{-4|a|^2 (1 - e^{-gt})}
                  + e^{-4|a|^2} + 4 cos(phi) e^{-2|a|^2}] / N^4.

    Pump-independent: the drive only displaces the state, which leaves
    purity untouched. Valid for parity eigenstates (phi = 0 or pi);
    accepts scalar or array t.
    """
    if abs(math.sin(phi)) > 1e-9:
        raise ValueError("closed form holds for parity eigenstates only "
                         "(phi = 0 or pi)")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise NegativeTime("negative times in entropy evaluation")
    a2 = abs(complex(alpha)) ** 2
    cp = math.cos(phi)
    e = np.exp(-params.gamma * t)
    n2 = 2.0 * (1.0 + cp * math.exp(-2.0 * a2))
    tr2 = 2.0 * (1.0 + np.exp(-4.0 * a2 * e) + np.exp(-4.0 * a2 * (1.0 - e))
                 + math.exp(-4.0 * a2) + 4.0 * cp * math.exp(-2.0 * a2)) / n2 ** 2
    out = 1.0 - tr2
    return float(out) if out.ndim == 0 else out
