"""Exception types shared across the package."""


class ColorsigError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ColorsigError):
    """Two signatures or weight vectors have incompatible dimensions."""


class EmptyImage(ColorsigError):
    """An image with zero pixels was given where at least one is required."""


class UnsupportedFormat(ColorsigError):
    """The file is not one of the supported image formats."""


class CorruptFile(ColorsigError):
    """The file could not be read or does not parse as its claimed format."""


class DuplicateId(ColorsigError):
    """An image id was inserted twice into the same tree."""


class EmptyIndex(ColorsigError):
    """A query was issued against an index or manifest with no images."""


class FormatVersionMismatch(ColorsigError):
    """The index file carries an unknown magic or format version."""


class CorruptIndex(ColorsigError):
    """The index file is truncated, fails its checksum, or is inconsistent."""
