"""Exception types shared across the package."""


class ContractViolationError(ValueError):
    """An argument or state violates an operation's stated contract."""


class DegenerateRegimeError(ValueError):
    """Parameters fall outside the regime in which a formula is defined."""


class FeasibilityError(ValueError):
    """An exact computation was requested beyond its feasibility guard."""
