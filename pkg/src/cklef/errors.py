"""Exception types shared across the package."""


class CkError(Exception):
    """Base class for all errors raised by this package."""


class NonSquare(CkError):
    pass


class EntryOutOfRange(CkError):
    pass


class ZeroRowOrColumn(CkError):
    """The matrix has an all-zero row or column (degenerate algebra)."""


class MatrixMismatch(CkError):
    """Operands were built over different transition matrices."""


class DepthTooSmall(CkError):
    pass


class NotAProjection(CkError):
    pass


class UnallowableWord(CkError):
    def __init__(self, word, position=None):
        self.word = word
        self.position = position
        where = f" at {position[0]}:{position[1]}" if position else ""
        super().__init__(f"word {word!r} is not allowable{where}")


class UnknownLetter(CkError):
    def __init__(self, letter, position=None):
        self.letter = letter
        self.position = position
        where = f" at {position[0]}:{position[1]}" if position else ""
        super().__init__(f"letter {letter!r} outside the alphabet{where}")


class ZeroMonomialPair(CkError):
    """A presentation pair (nu, mu) whose monomial is zero in the algebra."""


class DuplicateMuAfterNormalization(CkError):
    pass


class InvalidEndomorphism(CkError):
    pass


class NoStabilization(CkError):
    def __init__(self, max_depth, per_k):
        self.max_depth = max_depth
        self.per_k = per_k
        super().__init__(
            f"index series did not meet the stabilization window by depth {max_depth}"
        )


class ExponentUnderflow(CkError):
    def __init__(self, m, minimal_m):
        self.m = m
        self.minimal_m = minimal_m
        super().__init__(
            f"m={m} too small for the polynomial formula; minimal admissible m is {minimal_m}"
        )


class WellDefinednessFailure(CkError):
    pass


class DimensionMismatch(CkError):
    pass


class ReconstructionInconsistent(CkError):
    pass


class ShapeMismatch(CkError):
    pass


class NotDegreeZero(CkError):
    pass


class DegeneratePairing(CkError):
    pass


class CkSyntaxError(CkError):
    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"{message} (line {line}, column {col})")
