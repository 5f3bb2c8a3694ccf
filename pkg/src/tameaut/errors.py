"""Exception types shared across the engine."""


class TameAutError(Exception):
    pass


class InvalidField(TameAutError, ValueError):
    pass


class FieldMismatch(TameAutError, ValueError):
    pass


class DivisionByZero(TameAutError, ZeroDivisionError):
    pass


class PoleAtZero(TameAutError, ValueError):
    pass


class ContextMismatch(TameAutError, ValueError):
    pass


class FlavorError(TameAutError, ValueError):
    """Operation requires the other (commutative / noncommutative) flavor."""


class ParseError(TameAutError, ValueError):
    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        where = ""
        if line is not None:
            where = f"line {line}, column {col}: " if col is not None else f"line {line}: "
        super().__init__(where + msg)


class NotInvertible(TameAutError, ValueError):
    pass


class NotElementary(TameAutError, ValueError):
    pass


class SingularSystem(TameAutError, ValueError):
    def __init__(self, msg, kernel=None):
        self.kernel = kernel
        super().__init__(msg)


class SynthesisError(TameAutError, ValueError):
    pass


class SpanDeficiency(TameAutError):
    def __init__(self, msg, unmatched=None):
        self.unmatched = unmatched
        super().__init__(msg)


class ShapeError(TameAutError, ValueError):
    pass


class NoPlan(TameAutError, ValueError):
    pass
