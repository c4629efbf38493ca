"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the operation."""


class InvalidParameters(DomainError):
    """Model parameters (n, alpha) or an exponent are not admissible."""


class ConvergenceError(ArithmeticError):
    """A series or iteration hit its cap before reaching tolerance."""


class DegeneracyError(ArithmeticError):
    """A normalising factor vanished and cannot be divided by."""


class BracketError(ArithmeticError):
    """A root-finding bracket does not enclose a sign change."""
