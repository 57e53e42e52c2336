"""Exception hierarchy shared by every qcorr module."""


class QCorrError(ValueError):
    """Base class for all qcorr errors."""


class NotHermitian(QCorrError):
    pass


class NoConvergence(QCorrError):
    pass


class InvalidState(QCorrError):
    """A density operator violates Hermiticity, trace or positivity."""


class InvalidArity(QCorrError):
    pass


class WrongArity(QCorrError):
    pass


class BadDistribution(QCorrError):
    pass


class BadRank(QCorrError):
    pass


class BadIndexSet(QCorrError):
    pass


class OverlappingGroups(QCorrError):
    pass


class BadPartition(QCorrError):
    pass


class NotPure(QCorrError):
    pass


class NotQubits(QCorrError):
    pass


class NegativeEntropy(QCorrError):
    pass


class OutOfRange(QCorrError):
    pass


class NoDecomposition(QCorrError):
    pass


class SpecFormatError(QCorrError):
    """A state file is not valid JSON or does not follow the schema."""
