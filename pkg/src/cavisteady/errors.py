"""Exception and warning types shared across the package."""


class CavisteadyError(Exception):
    """Base class for all package-specific errors."""


class NonPositiveGamma0(CavisteadyError, ValueError):
    """Zero-temperature decay rate gamma0 must be strictly positive."""


class BadTruncation(CavisteadyError, ValueError):
    """Exponent truncation n_max must be at least 1."""


class BadN(CavisteadyError, ValueError):
    """Number of cavities must be at least 1."""


class DimensionOverflow(CavisteadyError, RuntimeError):
    """Assembled system would exceed the configured size cap."""


class SingularSystem(CavisteadyError, RuntimeError):
    """Linear system is (numerically) singular; the steady state is not
    unique in this parameter region."""


class CapExceeded(CavisteadyError, RuntimeError):
    """Density-matrix oracle dimension exceeds the configured cap."""


class ExponentExceedsCutoff(CavisteadyError, ValueError):
    """Requested moment exponent is larger than the Fock cutoff."""


class PopulationTooSmall(CavisteadyError, ValueError):
    """g2 is undefined because the population is below the floor."""


class MissingMoment(CavisteadyError, KeyError):
    """A required correlator is not present in the solution (truncation
    too low, or pattern not included in a perturbative subset)."""


class UnsupportedN(CavisteadyError, ValueError):
    """Operation is not defined for this ring size."""


class IllConditionedWarning(UserWarning):
    """Condition-number estimate of the linear system exceeds the threshold."""


class ImaginaryResidueWarning(UserWarning):
    """A nominally real observable carries an imaginary part above tolerance."""
