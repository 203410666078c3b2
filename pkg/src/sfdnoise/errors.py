"""Exception hierarchy shared across the package."""


class SfdNoiseError(Exception):
    """Base class for all package-specific errors."""


class SchemaError(SfdNoiseError):
    """Input file does not match the expected schema (header, columns)."""


class OrderError(SfdNoiseError):
    """Frequency column is not strictly increasing."""


class DomainError(SfdNoiseError):
    """Frequency requested outside the interpolant's valid domain."""


class UnphysicalInput(SfdNoiseError):
    """Inputs that are individually valid combine into a meaningless request."""


class SingularResponse(SfdNoiseError):
    """Mechanical transfer denominator vanished (undamped resonance hit exactly)."""


class DegenerateAdmittance(SfdNoiseError):
    """Air admittance is identically zero; no series R-L equivalent exists."""


class NoResonanceInBand(SfdNoiseError):
    """No self-consistent resonance exists inside the interpolant domain."""


class FitError(SfdNoiseError):
    """Branch fit did not converge. Carries the best model found so far."""

    def __init__(self, message, best_model=None, best_residual=None):
        super().__init__(message)
        self.best_model = best_model
        self.best_residual = best_residual
