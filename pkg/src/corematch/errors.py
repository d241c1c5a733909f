"""Exception types raised by the solver."""


class CorematchError(ValueError):
    """Base class for all domain errors raised by this package."""


class LimitExceededError(CorematchError):
    """An exhaustive enumeration was requested above its configured size cap."""


class NotOptimalError(CorematchError):
    """A matching passed as reference is not optimal for the market."""


class NotBalancedError(CorematchError):
    """An operation that requires a capacity-balanced market got an unbalanced one."""


class NotInCoreError(CorematchError):
    """A payoff vector expected to be a core element is not."""


class NotImputationError(CorematchError):
    """A payoff vector expected to be an imputation is not efficient or not
    individually rational."""


class NotDominantDiagonalError(CorematchError):
    """An operation defined only for dominant-diagonal markets was applied
    to a market without that property."""


class UndefinedSolutionError(CorematchError):
    """A single-valued solution is undefined for this game (degenerate data)."""
