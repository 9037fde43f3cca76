"""Exception and warning types shared across the package.

Two error families map onto the CLI exit codes: DomainError (exit 1) for
inputs that are syntactically fine but physically or numerically out of
range, and UsageError (exit 2) for malformed calls, bad config keys, and
unsatisfiable requests.
"""


class DomainError(ValueError):
    """Input outside the physical or numerical domain of an operation."""


class UsageError(ValueError):
    """Malformed request: bad arguments, unknown keys, inconsistent shapes."""


class SaturatedRegimeError(DomainError):
    """Photon number beyond the logarithmic validity range of the loss model."""


class UnstableLoopError(DomainError):
    """Tracking-loop gain and gate time combination that cannot converge."""


class NonFiniteResidualError(RuntimeError):
    """Raised when a fit produces non-finite residuals mid-run.

    Carries the last parameter vector that still evaluated cleanly.
    """

    def __init__(self, message, last_params):
        super().__init__(message)
        self.last_params = last_params


class ModelValidityWarning(UserWarning):
    """Result produced outside a model's stated validity range."""
