"""Esri ASCII grid reader/writer for per-pixel damage classification rasters.

Cell codes: 0 background, 1 intact building, 2 damaged building. Any cell may
also hold the nodata code (default -1). Row 0 is the northernmost row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (CellCountMismatch, IndexOutOfRange, InvalidClassCode,
                     MissingHeaderKey, NonIntegerCell)
from .geom import GeoPoint

CLASS_BACKGROUND = 0
CLASS_BUILDING = 1
CLASS_DAMAGED = 2
VALID_CLASSES = (CLASS_BACKGROUND, CLASS_BUILDING, CLASS_DAMAGED)

DEFAULT_NODATA = -1

_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")


@dataclass
class ClassRaster:
    """A classification raster with its georeferencing header.

    cells is a (nrows, ncols) integer array in row-major order with row 0
    at the northern edge. Treat instances as immutable once built.
    """

    ncols: int
    nrows: int
    xll: float
    yll: float
    cellsize: float
    nodata: int
    cells: np.ndarray

    def __post_init__(self):
        self.ncols = int(self.ncols)
        self.nrows = int(self.nrows)
        self.xll = float(self.xll)
        self.yll = float(self.yll)
        self.cellsize = float(self.cellsize)
        self.nodata = int(self.nodata)
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError("raster dimensions must be positive")
        if not (math.isfinite(self.cellsize) and self.cellsize > 0):
            raise ValueError("cellsize must be positive")
        cells = np.asarray(self.cells)
        if not np.issubdtype(cells.dtype, np.integer):
            raise ValueError("cells must be an integer array")
        if cells.shape != (self.nrows, self.ncols):
            raise ValueError(
                f"cells shape {cells.shape} does not match "
                f"(nrows, ncols)=({self.nrows}, {self.ncols})")
        bad = ~(np.isin(cells, VALID_CLASSES) | (cells == self.nodata))
        if bad.any():
            row, col = np.argwhere(bad)[0]
            raise ValueError(
                f"cell ({row}, {col}) holds invalid class code {cells[row, col]}")
        self.cells = cells


def pixel_center(raster: ClassRaster, col: int, row: int) -> GeoPoint:
    """Geographic centre of the pixel at (col, row); row 0 is northernmost."""
    if not (0 <= col < raster.ncols and 0 <= row < raster.nrows):
        raise IndexOutOfRange(f"pixel ({col}, {row}) outside "
                              f"{raster.ncols}x{raster.nrows} raster")
    lon = raster.xll + (col + 0.5) * raster.cellsize
    lat = raster.yll + (raster.nrows - row - 0.5) * raster.cellsize
    return GeoPoint(lon, lat)


def _header_value(key, text, line_no, source):
    if key in ("ncols", "nrows"):
        try:
            value = int(text)
        except ValueError:
            raise MissingHeaderKey(f"{key} must be an integer, got {text!r}",
                                   source=source, line=line_no) from None
        if value < 1:
            raise MissingHeaderKey(f"{key} must be positive, got {value}",
                                   source=source, line=line_no)
        return value
    try:
        value = float(text)
    except ValueError:
        raise MissingHeaderKey(f"{key} must be a number, got {text!r}",
                               source=source, line=line_no) from None
    if key == "cellsize" and not (math.isfinite(value) and value > 0):
        raise MissingHeaderKey(f"cellsize must be positive, got {text!r}",
                               source=source, line=line_no)
    return value


def parse_ascii_grid(text: str, source: str = "<ascii-grid>") -> ClassRaster:
    """Parse Esri ASCII grid text into a ClassRaster.

    Header keys must appear in canonical order (case-insensitive):
    ncols, nrows, xllcorner, yllcorner, cellsize, then an optional
    nodata_value. The body must hold exactly ncols*nrows integer cells,
    each in {0, 1, 2} or equal to the nodata code.
    """
    lines = text.splitlines()
    header = {}
    line_idx = 0
    for key in _HEADER_KEYS:
        # Skip blank lines between header entries.
        while line_idx < len(lines) and not lines[line_idx].split():
            line_idx += 1
        if line_idx >= len(lines):
            raise MissingHeaderKey(f"missing header key {key}",
                                   source=source, line=len(lines) or 1)
        tokens = lines[line_idx].split()
        if tokens[0].lower() != key or len(tokens) != 2:
            raise MissingHeaderKey(
                f"expected header line '{key} <value>', got {lines[line_idx]!r}",
                source=source, line=line_idx + 1)
        header[key] = _header_value(key, tokens[1], line_idx + 1, source)
        line_idx += 1

    nodata = DEFAULT_NODATA
    while line_idx < len(lines) and not lines[line_idx].split():
        line_idx += 1
    if line_idx < len(lines):
        tokens = lines[line_idx].split()
        if tokens[0].lower() == "nodata_value":
            if len(tokens) != 2:
                raise MissingHeaderKey(
                    f"expected header line 'nodata_value <value>', "
                    f"got {lines[line_idx]!r}",
                    source=source, line=line_idx + 1)
            try:
                nodata = int(tokens[1])
            except ValueError:
                raise MissingHeaderKey(
                    f"nodata_value must be an integer, got {tokens[1]!r}",
                    source=source, line=line_idx + 1) from None
            line_idx += 1

    ncols = header["ncols"]
    nrows = header["nrows"]
    expected = ncols * nrows
    values = np.empty(expected, dtype=np.int64)
    count = 0
    for body_idx in range(line_idx, len(lines)):
        for token in lines[body_idx].split():
            try:
                value = int(token)
            except ValueError:
                raise NonIntegerCell(f"cell value {token!r} is not an integer",
                                     source=source, line=body_idx + 1) from None
            if count >= expected:
                raise CellCountMismatch(
                    f"more than {expected} cells in body",
                    source=source, line=body_idx + 1)
            if value != nodata and value not in VALID_CLASSES:
                raise InvalidClassCode(
                    f"cell value {value} not in {{0, 1, 2}} or nodata ({nodata})",
                    source=source, line=body_idx + 1)
            values[count] = value
            count += 1
    if count != expected:
        raise CellCountMismatch(
            f"expected {expected} cells, found {count}",
            source=source, line=len(lines) or 1)

    cells = values.astype(np.int32).reshape(nrows, ncols)
    return ClassRaster(ncols=ncols, nrows=nrows, xll=header["xllcorner"],
                       yll=header["yllcorner"], cellsize=header["cellsize"],
                       nodata=nodata, cells=cells)


def write_ascii_grid(raster: ClassRaster) -> str:
    """Serialise a raster to canonical Esri ASCII grid text.

    Lowercase header keys in canonical order, one raster row per line,
    LF line endings. parse_ascii_grid() round-trips the result exactly.
    """
    out = [
        f"ncols {raster.ncols}",
        f"nrows {raster.nrows}",
        f"xllcorner {raster.xll!r}",
        f"yllcorner {raster.yll!r}",
        f"cellsize {raster.cellsize!r}",
        f"nodata_value {raster.nodata}",
    ]
    for row in raster.cells:
        out.append(" ".join(str(v) for v in row.tolist()))
    return "\n".join(out) + "\n"
