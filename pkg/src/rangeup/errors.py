"""Exception hierarchy shared by all rangeup modules."""


class RangeupError(Exception):
    """Base class for all library errors."""


class ShapeMismatchError(RangeupError):
    """Operands have incompatible shapes."""


class ZeroPointError(RangeupError):
    """A point at the sensor origin has no defined projection."""


class OutOfFovError(RangeupError):
    """Elevation angle falls outside the sensor's vertical field of view."""


class IndivisibleHeightError(RangeupError):
    """Image height is not divisible by the row-skip factor."""


class IndivisibleShapeError(RangeupError):
    """Image dimensions are not divisible by the patch dimensions."""


class IndivisibleGridError(RangeupError):
    """Token grid is not divisible by the attention window dimensions."""


class OddGridError(RangeupError):
    """Token grid cannot be halved for patch merging."""


class IndivisibleChannelsError(RangeupError):
    """Channel count cannot be redistributed spatially."""


class NonScalarLossError(RangeupError):
    """Backward pass requires a scalar loss node."""


class EmptyCloudError(RangeupError):
    """Point cloud metric requires at least one point on each side."""


class NonFiniteLossError(RangeupError):
    """Training loss became NaN or Inf."""


class IoFailureError(RangeupError):
    """A dataset or checkpoint file could not be read or written."""


class CheckpointMismatchError(RangeupError):
    """Checkpoint tensors do not match the shapes implied by the stored config."""
