"""Exception hierarchy shared across the package."""


class LatlogError(Exception):
    """Base class for every error this package raises deliberately."""


class ParseError(LatlogError):
    """Malformed surface syntax or an ill-formed program."""

    def __init__(self, message, line=None, col=None):
        self.message = message
        self.line = line
        self.col = col
        where = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnsupportedModeError(ParseError):
    """Table mode whose meaning depends on clause order (first/last/sum)."""


class RangeRestrictionError(ParseError):
    """A variable is not bound by the time it is needed."""


class ArityError(ParseError):
    """A predicate is used with inconsistent arities."""


class LatticeError(LatlogError):
    """Base class for errors in lattice construction or use."""


class JoinUndefinedError(LatticeError):
    def __init__(self, relation, x, y):
        self.relation = relation
        self.x = x
        self.y = y
        super().__init__(f"join {relation} is undefined on ({x}, {y})")


class LatticeLawViolationError(LatticeError):
    """A user-supplied join or order relation breaks a semilattice law."""


class DomainError(LatticeError):
    """A term falls outside the value domain of its lattice."""


class ArithmeticTypeError(LatlogError):
    """An arithmetic builtin was applied to a non-integer operand."""


class InternalInconsistencyError(LatlogError):
    """Two internally-equivalent computations disagreed; an implementation bug."""
