"""Exception hierarchy. Every error is a ``ValueError`` so callers can catch broadly."""


class CollectiveWitnessError(ValueError):
    pass


class DuplicateEigenvalue(CollectiveWitnessError):
    pass


class TooFewEigenvalues(CollectiveWitnessError):
    pass


class GridTooLarge(CollectiveWitnessError):
    pass


class EmptyCoefficients(CollectiveWitnessError):
    pass


class InvalidK(CollectiveWitnessError):
    pass


class EpsOutOfRange(CollectiveWitnessError):
    pass


class OddN(CollectiveWitnessError):
    pass


class NotHermitian(CollectiveWitnessError):
    pass


class DimensionMismatch(CollectiveWitnessError):
    pass


class DegenerateRange(CollectiveWitnessError):
    pass


class NonpositiveA(CollectiveWitnessError):
    pass


class RankZero(CollectiveWitnessError):
    pass


class NegativeZeta(CollectiveWitnessError):
    pass


class NotConvex(CollectiveWitnessError):
    pass


class NonzeroAtZero(CollectiveWitnessError):
    pass


class InfeasibleLevel(CollectiveWitnessError):
    pass


class DegenerateK(CollectiveWitnessError):
    pass


class BadNormalization(CollectiveWitnessError):
    pass


class InvariantViolation(CollectiveWitnessError):
    """A state or ensemble breaks normalization, hermiticity or positivity."""


class ThicknessHypothesisViolated(CollectiveWitnessError):
    """The measured thickness of a state is below the assumed one."""


class ParseError(CollectiveWitnessError):
    pass


class InvalidParams(CollectiveWitnessError):
    """Missing or inconsistent command parameters."""
