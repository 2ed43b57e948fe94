"""Exception hierarchy shared by every solver."""


class SeriesolveError(Exception):
    """Base class for all library errors."""


class DivisionByZero(SeriesolveError, ZeroDivisionError):
    pass


class MixedFields(SeriesolveError, ValueError):
    pass


class CharacteristicTooSmall(SeriesolveError, ValueError):
    """Some division by an integer 1..N-1 would hit zero in the field."""


class IndexOutOfRange(SeriesolveError, IndexError):
    pass


class NotInvertible(SeriesolveError, ValueError):
    pass


class SingularMatrix(SeriesolveError, ValueError):
    pass


class DimensionMismatch(SeriesolveError, ValueError):
    pass


class NotOrdinaryPoint(SeriesolveError, ValueError):
    """Leading coefficient vanishes at t = 0."""


class InconsistentBaseCase(SeriesolveError, ValueError):
    pass


class PadeFailure(SeriesolveError, ValueError):
    pass


class ResidualNonzero(SeriesolveError, ArithmeticError):
    pass


class EngineUnsupported(SeriesolveError, ValueError):
    pass


class ParseError(SeriesolveError, ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
