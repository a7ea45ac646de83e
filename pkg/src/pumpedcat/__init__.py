"""Exact dyad-sum simulation of a pumped lossy cavity mode.

The density operator of a driven, damped harmonic oscillator prepared in
a superposition of coherent states stays, at zero temperature, a finite
sum of coherent dyads c |x><y| for all times. This package evolves that
sum in closed form, reads the field out with dispersive Ramsey atoms,
and cross-checks everything against an independent photon-number-basis
integrator.
"""
import os as _os

# honor the optional thread override before numpy binds its BLAS pools
_threads = _os.environ.get("PUMPEDCAT_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)
del _os

from .errors import (CavityError, DegenerateCat, DimMismatch,
                     InternalConsistencyError, NegativeTime,
                     NonHermitianState, OutsideCatManifold, StepTooLarge,
                     ThermalNotSupported, TruncationTooSmall, WindowTooSmall,
                     ZeroAmplitude, ZeroProbabilityBranch)
from .evolution import (char_fn_normal, char_fn_symmetric, coeff_u, coeff_w,
                        evolve_dyad, evolve_state, free_decoherence_time,
                        linear_entropy_closed_form, pump_lock,
                        stationary_amplitude)
from .phase_space import (GridSpec, WignerGrid, default_grid,
                          grid_normalization, wigner_cat_closed_form,
                          wigner_dyad, wigner_state)
from .protocol import (AtomFieldState, DetectionRecord, ProtocolConfig,
                       Trajectory, atom_step, collapse_field,
                       conditional_probability, detect, dispersive_shift,
                       estimate_cat_amplitude, feedback_flip, prepare_joint,
                       ramsey_rotation, run_sequence)
from .validation import CheckResult, format_report, run_criteria
from .states import (CavityParams, CoherentDyad, DyadState, Frame, coherent,
                     compact, hermiticity_defect, linear_entropy, make_cat,
                     mean_amplitude, mean_photon_number, overlap,
                     parity_expectation, purity, state_from_dict,
                     state_to_dict, to_lab_frame, trace, vacuum,
                     validate_state)

__version__ = "0.1.0"

__all__ = [
    "AtomFieldState", "CavityError", "CavityParams", "CheckResult",
    "CoherentDyad",
    "DegenerateCat", "DetectionRecord", "DimMismatch", "DyadState", "Frame",
    "GridSpec", "InternalConsistencyError", "NegativeTime",
    "NonHermitianState", "OutsideCatManifold", "ProtocolConfig",
    "StepTooLarge", "ThermalNotSupported", "Trajectory", "TruncationTooSmall",
    "WignerGrid", "WindowTooSmall", "ZeroAmplitude", "ZeroProbabilityBranch",
    "atom_step", "char_fn_normal", "char_fn_symmetric", "coeff_u", "coeff_w",
    "coherent", "collapse_field", "compact", "conditional_probability",
    "default_grid", "detect", "dispersive_shift", "estimate_cat_amplitude",
    "evolve_dyad", "evolve_state", "feedback_flip", "format_report",
    "free_decoherence_time",
    "grid_normalization", "hermiticity_defect", "linear_entropy",
    "linear_entropy_closed_form", "make_cat", "mean_amplitude",
    "mean_photon_number", "overlap", "parity_expectation", "prepare_joint",
    "pump_lock", "purity", "ramsey_rotation", "run_criteria", "run_sequence",
    "state_from_dict", "state_to_dict", "stationary_amplitude",
    "to_lab_frame", "trace", "vacuum", "validate_state",
    "wigner_cat_closed_form", "wigner_dyad", "wigner_state",
]
