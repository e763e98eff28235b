"""Exception hierarchy shared by every module of the package."""


class FamVerifyError(Exception):
    """Base class of all errors raised by famverify."""


class PreconditionError(FamVerifyError):
    """The equation family does not meet a requirement of the verifying-set construction."""


# phasepoly
class MissingAssignment(FamVerifyError, KeyError):
    pass


class ZeroAtNegativePower(FamVerifyError, ZeroDivisionError):
    pass


class DimensionMismatch(FamVerifyError, ValueError):
    pass


# diagram
class DiagramError(FamVerifyError, ValueError):
    """Structural problem with a diagram or equation family."""


class NotLaminar(DiagramError):
    pass


class UnknownLabel(DiagramError, KeyError):
    pass


class UnknownKind(DiagramError):
    pass


class WrongValueKind(DiagramError, TypeError):
    pass


class BoundaryMismatch(DiagramError):
    pass


class LanguageMismatch(DiagramError):
    pass


class NotMaximalBox(PreconditionError):
    pass


# interp
class HasBangbox(FamVerifyError, ValueError):
    pass


class NotSimple(FamVerifyError, ValueError):
    pass


class DimensionCapExceeded(FamVerifyError, MemoryError):
    pass


class ShapeMismatch(FamVerifyError, ValueError):
    pass


# planner
class NotSeparated(PreconditionError):
    def __init__(self, pairs, side=None):
        self.pairs = list(pairs)
        self.side = side
        names = ", ".join(f"({a}, {b})" for a, b in self.pairs)
        where = f" on the {side} side" if side else ""
        super().__init__(f"!-boxes not separated{where}: {names}")


class NotWellNested(PreconditionError):
    pass


class QuotientTooSmall(PreconditionError):
    pass


class GridTooSmall(PreconditionError):
    pass


# cli
class ParseError(FamVerifyError):
    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            super().__init__(f"{where}: {message}")
        else:
            super().__init__(message)


class SemanticError(ParseError):
    pass
