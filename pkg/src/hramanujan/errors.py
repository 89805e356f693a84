"""Exception types raised across the package."""


class LabError(ValueError):
    """Base class for every error raised by :mod:`hramanujan`."""


# series
class VariableMismatch(LabError):
    pass


class NonUnitLeadingTerm(LabError):
    pass


class UnsupportedWeight(LabError):
    pass


class DimensionMismatch(LabError):
    pass


class TruncationUnderflow(LabError):
    pass


# charts
class UnsupportedChart(LabError):
    pass


class ChartMismatch(LabError):
    pass


# symplectic / periods
class OddSize(LabError):
    pass


class SingularCocycle(LabError):
    pass


class NotInStarCell(LabError):
    pass


class NotParabolic(LabError):
    pass


class NotSiegel(LabError):
    pass


class SizeMismatch(LabError):
    pass


class OutsideLeafDomain(LabError):
    pass


# flows
class PathLeavesDomain(LabError):
    pass


class StepTooLarge(LabError):
    pass


class InsufficientSamples(LabError):
    pass


# hilbert
class InvalidField(LabError):
    pass


class NotInGroup(LabError):
    pass


class NotInInverseDifferent(LabError):
    pass
