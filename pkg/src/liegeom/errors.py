"""Exception hierarchy. The CLI maps these onto exit codes."""


class LiegeomError(Exception):
    """Base class for all package errors."""


class SchemaError(LiegeomError, ValueError):
    """Input document does not match its schema."""


class UnknownAlgebraError(LiegeomError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown algebra"


class InvalidBasisChangeError(LiegeomError, ValueError):
    """Basis change (or metric frame) matrix is singular."""


class ValidationError(LiegeomError):
    """An algebraic precondition does not hold."""


class NotNilpotentError(ValidationError):
    pass


class NotADerivationError(ValidationError):
    pass


class NotSymmetricError(ValidationError):
    pass


class SearchFailedError(LiegeomError):
    """A numerical search ended without meeting its target.

    ``best`` holds whatever the search found (metric frame, certificate, ...),
    ``residual`` the best objective value reached.
    """

    def __init__(self, message, residual=None, best=None):
        super().__init__(message)
        self.residual = residual
        self.best = best


class BudgetExhaustedError(SearchFailedError):
    pass


class SPDLossError(LiegeomError):
    """A flow step left the cone of positive-definite metrics."""


class StepUnderflowError(SearchFailedError):
    pass
