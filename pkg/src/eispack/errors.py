"""Exception hierarchy shared by all modules.

Each exception carries a CLI exit code so the command layer can map
library failures onto the documented process status without a lookup table.
"""


class EisError(Exception):
    exit_code = 2


class NotEisenstein(EisError):
    pass


class NonPositiveSum(EisError):
    pass


class NotPrimitive(EisError):
    pass


class NotStandardPosition(EisError):
    pass


class NotTangent(EisError):
    pass


class DegenerateQuadruple(EisError):
    pass


class BoundTooSmall(EisError):
    pass


class InsufficientData(EisError):
    pass


class NotSemidefinite(EisError):
    pass


class DiscriminantMismatch(EisError):
    pass


class InvalidDiscriminant(EisError):
    pass


class NotCoprime(EisError):
    pass


class NotAdmissible(EisError):
    pass


class ZeroCurvature(EisError):
    pass


class InvalidResidue(EisError):
    exit_code = 4


class NotOnSheet(EisError):
    pass


class WrongCoset(EisError):
    pass


class EmptyWindow(EisError):
    pass


class LevelTooHigh(EisError):
    exit_code = 3


class CapacityExceeded(EisError):
    exit_code = 3


class InconsistentChi2(EisError):
    exit_code = 4


class IntegerOverflow(EisError):
    exit_code = 3
