"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain where the model is defined."""


class SingularSystemError(ArithmeticError):
    """A linear system that should be solved is numerically singular."""


class VanishingProbabilityError(ArithmeticError):
    """An outcome has zero probability but a nonzero derivative."""
