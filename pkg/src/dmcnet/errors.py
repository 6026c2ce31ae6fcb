"""Exception hierarchy shared by all dmcnet modules.

Validation problems (bad arguments, malformed inputs, degenerate data)
derive from ValidationError; filesystem problems derive from IoFailure.
The CLI maps these to exit codes 2 and 3 respectively.
"""


class DmcnetError(Exception):
    """Base class for all dmcnet errors."""


class ValidationError(DmcnetError):
    """Invalid arguments or data that violate an operation's preconditions."""


class IoFailure(DmcnetError):
    """Filesystem or serialization failure."""


# dataset
class MissingClassDirectory(ValidationError):
    pass


class EmptyDataset(ValidationError):
    pass


class UnreadableFile(ValidationError):
    pass


class BadMagic(ValidationError):
    pass


class UnsupportedMaxval(ValidationError):
    pass


class TruncatedFile(ValidationError):
    pass


class InsufficientClassCount(ValidationError):
    pass


class DegenerateSplit(ValidationError):
    pass


# features
class ImageTooSmall(ValidationError):
    pass


# svm
class DegenerateLabels(ValidationError):
    pass


class DimensionMismatch(ValidationError):
    pass


class NonFiniteInput(ValidationError):
    pass


class MissingClass(ValidationError):
    pass


# nn
class ShapeMismatch(ValidationError):
    pass


class EmptyTrainingSet(ValidationError):
    pass


class BadCheckpoint(ValidationError):
    pass


# metrics
class LengthMismatch(ValidationError):
    pass


class InvalidLabel(ValidationError):
    pass


class EmptyMatrix(ValidationError):
    pass


class SingleClassTruth(ValidationError):
    pass


class OutOfRange(ValidationError):
    pass


class NotADistribution(ValidationError):
    pass


# dimred
class DegenerateDistances(ValidationError):
    pass


class SupportMismatch(ValidationError):
    pass


# harness
class UnknownMethod(ValidationError):
    pass
