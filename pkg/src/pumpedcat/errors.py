"""Exception and warning types shared across the package."""


class CavityError(Exception):
    """Base class for all simulator errors."""


class DegenerateCat(CavityError):
    """Cat normalization N^2 vanished (e.g. odd superposition at alpha ~ 0)."""


class NegativeTime(CavityError, ValueError):
    """Evolution durations must be >= 0."""


class ThermalNotSupported(CavityError):
    """The dyad engine is exact only at nbar = 0; use the characteristic
    function route or the Fock reference integrator for thermal input."""


class ZeroAmplitude(CavityError, ValueError):
    """Operation undefined at alpha = 0."""


class NonHermitianState(CavityError):
    """A quantity that must be real came out complex beyond tolerance."""


class InternalConsistencyError(CavityError):
    """A self-check failed (trace drift, purity > 1, broken completeness)."""


class ZeroProbabilityBranch(CavityError):
    """Requested collapse onto an outcome with probability below 1e-300."""


class OutsideCatManifold(CavityError):
    """State is not within tolerance of span{|a>, |-a>}."""


class TruncationTooSmall(CavityError):
    """Fock-space dimension leaves non-negligible tail mass."""


class StepTooLarge(CavityError, ValueError):
    """Integrator step exceeds the stability/accuracy bound."""


class DimMismatch(CavityError, ValueError):
    """Matrix operands have incompatible shapes."""


class WindowTooSmall(UserWarning):
    """Wigner grid clips non-negligible weight at its boundary."""
