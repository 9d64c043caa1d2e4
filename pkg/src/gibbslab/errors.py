"""Exception types shared across the package."""


class GibbsLabError(Exception):
    """Base class for all package-specific errors."""


class InvalidFovError(GibbsLabError, ValueError):
    """A field-of-view interval is degenerate or non-finite."""


class InvalidGridError(GibbsLabError, ValueError):
    """Grid counts are too small or inconsistent with the data."""


class GridMismatchError(GibbsLabError, ValueError):
    """Two objects that must share a grid (or FOV) do not."""


class DegenerateWindowError(GibbsLabError, ArithmeticError):
    """The normalizing weight sum of an interpolation window vanished."""


class DegenerateKernelError(GibbsLabError, ArithmeticError):
    """The kernel's minimum weight sum is ~0, so bound ratios are unusable."""


class BoundHypothesisError(GibbsLabError, ValueError):
    """An error-bound query fell outside the interior-interval hypothesis."""


class EmptyVoiError(GibbsLabError, ValueError):
    """A statistic was requested over an empty volume of interest."""


class SuspiciousInputError(GibbsLabError, ValueError):
    """Input violates a structural assumption (e.g. not piecewise constant)."""


class CorruptFileError(GibbsLabError, ValueError):
    """A volume container failed its size or content validation."""


class UnsupportedFormatError(GibbsLabError, ValueError):
    """A volume container declares a version or dtype we do not read."""
