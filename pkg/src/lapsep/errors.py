"""Exception types raised by lapsep."""


class LapsepError(ValueError):
    """Base class for all lapsep errors."""


class NotHermitian(LapsepError):
    pass


class NoConvergence(LapsepError, ArithmeticError):
    pass


class IndexOutOfRange(LapsepError, IndexError):
    pass


class ShapeMismatch(LapsepError):
    pass


class EmptyGraph(LapsepError):
    pass


class ReflectionCollision(UserWarning):
    """Two edges reflected onto the same endpoint pair; their weights were summed."""


class NegativeEntry(LapsepError):
    pass


class NotLineSumSymmetric(LapsepError):
    pass


class NotUnitary(LapsepError):
    pass


class BadEmbedding(LapsepError):
    pass


class NotInClass(LapsepError):
    pass


class BlockNotLSS(LapsepError):
    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class NegativeBlockEntry(LapsepError):
    def __init__(self, message, block=None):
        super().__init__(message)
        self.block = block


class ResidualNotPSD(LapsepError):
    pass


class ParseError(LapsepError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
