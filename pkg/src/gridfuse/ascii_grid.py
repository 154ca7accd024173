"""ESRI ASCII grid rasters: parsing, writing and value queries.

The header is a block of ``key value`` lines (``ncols``, ``nrows``,
``xllcorner``, ``yllcorner``, ``cellsize`` and optionally ``NODATA_value``);
keys are case-insensitive. Values follow, top row first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import NoData, OutOfExtent, ParseError
from .geo import BBox

DEFAULT_NODATA = -9999.0
_REQUIRED = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")


@dataclass(frozen=True, eq=False)
class RasterGrid:
    """A north-up raster; ``values[0]`` is the northernmost row."""

    ncols: int
    nrows: int
    xllcorner: float
    yllcorner: float
    cellsize: float
    nodata: float
    values: np.ndarray
    feature_name: str = "value"

    def __post_init__(self):
        if self.ncols < 1 or self.nrows < 1:
            raise ValueError("raster needs at least one row and column")
        if not self.cellsize > 0:
            raise ValueError(f"cellsize must be positive, got {self.cellsize}")
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.nrows, self.ncols):
            raise ValueError(f"values shape {values.shape} != ({self.nrows}, {self.ncols})")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other):
        if not isinstance(other, RasterGrid):
            return NotImplemented
        return (
            (self.ncols, self.nrows, self.xllcorner, self.yllcorner, self.cellsize)
            == (other.ncols, other.nrows, other.xllcorner, other.yllcorner, other.cellsize)
            and _same_float(self.nodata, other.nodata)
            and self.feature_name == other.feature_name
            and np.array_equal(self.values, other.values, equal_nan=True)
        )

    @property
    def extent(self):
        return BBox(
            self.yllcorner,
            self.yllcorner + self.nrows * self.cellsize,
            self.xllcorner,
            self.xllcorner + self.ncols * self.cellsize,
        )

    @cached_property
    def lon_centers(self):
        return self.xllcorner + (np.arange(self.ncols) + 0.5) * self.cellsize

    @cached_property
    def lat_centers(self):
        return self.yllcorner + (self.nrows - np.arange(self.nrows) - 0.5) * self.cellsize

    def pixel_center(self, i, j):
        return float(self.lat_centers[i]), float(self.lon_centers[j])

    def is_nodata(self, v):
        return math.isnan(v) or v == self.nodata


def _same_float(a, b):
    return a == b or (math.isnan(a) and math.isnan(b))


def _number(token, lineno, what):
    try:
        return float(token)
    except ValueError:
        raise ParseError(f"bad {what} {token!r}", lineno) from None


def parse_ascii_grid(source, feature_name="value"):
    """Parse an ESRI ASCII grid from a text stream or string."""
    text = source if isinstance(source, str) else source.read()
    lines = text.splitlines()
    header = {}
    lineno = 0
    for lineno, line in enumerate(lines, start=1):
        parts = line.split()
        if not parts:
            continue
        if not parts[0][0].isalpha():
            break
        if len(parts) != 2:
            raise ParseError(f"malformed header line {line.strip()!r}", lineno)
        key = parts[0].lower()
        if key in header:
            raise ParseError(f"duplicate header key {parts[0]!r}", lineno)
        header[key] = (parts[1], lineno)
    else:
        lineno = len(lines) + 1

    for key in _REQUIRED:
        if key not in header and not (key.endswith("corner") and key.replace("corner", "center") in header):
            raise ParseError(f"missing header key {key!r}")

    def get(key, convert):
        token, ln = header[key]
        try:
            return convert(token)
        except ValueError:
            raise ParseError(f"bad value for {key}: {token!r}", ln) from None

    ncols = get("ncols", int)
    nrows = get("nrows", int)
    cellsize = get("cellsize", float)
    if ncols < 1 or nrows < 1:
        raise ParseError(f"ncols/nrows must be positive, got {ncols}x{nrows}")
    if not cellsize > 0:
        raise ParseError(f"cellsize must be positive, got {cellsize}", header["cellsize"][1])
    origin = []
    for axis in ("x", "y"):
        if f"{axis}llcorner" in header:
            origin.append(get(f"{axis}llcorner", float))
        else:
            origin.append(get(f"{axis}llcenter", float) - cellsize / 2.0)
    nodata = get("nodata_value", float) if "nodata_value" in header else DEFAULT_NODATA
    unknown = set(header) - set(_REQUIRED) - {"nodata_value", "xllcenter", "yllcenter"}
    if unknown:
        raise ParseError(f"unknown header keys {sorted(unknown)}")

    values = []
    for ln in range(lineno, len(lines) + 1):
        for token in lines[ln - 1].split():
            values.append(_number(token, ln, "value"))
    expected = nrows * ncols
    if len(values) != expected:
        raise ParseError(f"value count: expected {expected} values, found {len(values)}")
    return RasterGrid(
        ncols, nrows, origin[0], origin[1], cellsize, nodata,
        np.array(values, dtype=np.float64).reshape(nrows, ncols), feature_name,
    )


def read_ascii_grid(path, feature_name="value"):
    with open(path, encoding="utf-8") as fh:
        return parse_ascii_grid(fh, feature_name)


def format_ascii_grid(g):
    """Serialise ``g``; floats use ``repr`` so a re-parse is bit-exact."""
    out = [
        f"ncols {g.ncols}",
        f"nrows {g.nrows}",
        f"xllcorner {g.xllcorner!r}",
        f"yllcorner {g.yllcorner!r}",
        f"cellsize {g.cellsize!r}",
        f"NODATA_value {g.nodata!r}",
    ]
    for row in g.values:
        out.append(" ".join(repr(float(v)) for v in row))
    return "\n".join(out) + "\n"


def _pixel_index(g, lat, lon):
    ext = g.extent
    if not ext.contains(lat, lon):
        raise OutOfExtent(f"({lat}, {lon}) outside raster extent {ext}")
    j = min(int(math.floor((lon - g.xllcorner) / g.cellsize)), g.ncols - 1)
    k = min(int(math.floor((lat - g.yllcorner) / g.cellsize)), g.nrows - 1)
    return g.nrows - 1 - k, j


def query_point(g, p):
    """Value of the pixel containing ``p``."""
    i, j = _pixel_index(g, p.lat, p.lon)
    v = float(g.values[i, j])
    if g.is_nodata(v):
        raise NoData(f"pixel ({i}, {j}) holds nodata")
    return v


def query_bbox_mean(g, box):
    """Mean of valid pixels whose centres fall in ``box`` (half-open).

    Falls back to :func:`query_point` at the box centre when no pixel centre
    (or no valid one) lies inside the box.
    """
    if not box.intersects(g.extent):
        raise OutOfExtent(f"{box} does not overlap raster extent {g.extent}")
    rows = (g.lat_centers >= box.min_lat) & (g.lat_centers < box.max_lat)
    cols = (g.lon_centers >= box.min_lon) & (g.lon_centers < box.max_lon)
    sub = g.values[np.ix_(rows, cols)].ravel()
    valid = sub[~(np.isnan(sub) | (sub == g.nodata))]
    if valid.size:
        return math.fsum(valid.tolist()) / valid.size
    return query_point(g, box.center)
