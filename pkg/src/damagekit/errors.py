"""Exception types shared across the toolkit.

Parse-style errors carry the source name and a 1-based line number when one
is known, so command-line tools can print "file:line: message" diagnostics.
"""


class DamageKitError(Exception):
    """Base class for all toolkit errors."""


class ParseError(DamageKitError):
    """Malformed input file or stream."""

    def __init__(self, message, source=None, line=None):
        super().__init__(message)
        self.source = source
        self.line = line

    def __str__(self):
        prefix = ""
        if self.source is not None:
            prefix = str(self.source) + ":"
            if self.line is not None:
                prefix += f"{self.line}:"
            prefix += " "
        return prefix + super().__str__()


class MissingHeaderKey(ParseError):
    """Raster header line is absent, out of order, or has a bad value."""


class NonIntegerCell(ParseError):
    """Raster body token is not an integer."""


class CellCountMismatch(ParseError):
    """Raster body has more or fewer cells than the header declares."""


class InvalidClassCode(ParseError):
    """Raster cell holds a code outside {0, 1, 2, nodata}."""


class UnknownCategory(ParseError):
    """Damage category string is not one of the five known labels."""


class IndexOutOfRange(DamageKitError):
    """Pixel index outside the raster grid."""


class DuplicateFootprintId(DamageKitError):
    """Two footprints share an id."""


class DuplicatePointId(DamageKitError):
    """Two ground-truth points share an id."""


class MissingEstimate(DamageKitError):
    """A matched footprint has no damage estimate."""


class EmptySampleSet(DamageKitError):
    """Metrics requested over zero samples."""


class NoPositiveSamples(DamageKitError):
    """Metrics requested over samples with no positive labels."""


class SwathOutsideScene(DamageKitError):
    """Synthetic damage swath misses every building in the scene."""
