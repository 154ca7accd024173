"""Coordinates, metre/degree conversion and bounding boxes.

A city is handled in a local frame: integer half-metre offsets ``(dx, dy)``
east and north of the city centre. All lattice work happens in that frame;
conversion to degrees is the last step and uses one fixed scale per city
(equirectangular, evaluated at the centre latitude).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PolarRegion

METERS_PER_DEGREE = 111320.0
MAX_ABS_LAT = 89.0


@dataclass(frozen=True)
class GeoPoint:
    lat: float
    lon: float

    def __post_init__(self):
        if not (-90.0 <= self.lat <= 90.0) or not (-180.0 <= self.lon <= 180.0):
            raise ValueError(f"coordinates out of range: lat={self.lat}, lon={self.lon}")


@dataclass(frozen=True, order=True)
class LocalOffset:
    """Exact offset from a city centre in half-metres (east, north)."""

    dx: int
    dy: int

    def __add__(self, other):
        return LocalOffset(self.dx + other.dx, self.dy + other.dy)


@dataclass(frozen=True)
class BBox:
    """Axis-aligned box in degrees with half-open membership ``[min, max)``."""

    min_lat: float
    max_lat: float
    min_lon: float
    max_lon: float

    def __post_init__(self):
        if not (self.min_lat < self.max_lat and self.min_lon < self.max_lon):
            raise ValueError(f"degenerate bbox: {self}")

    def contains(self, lat, lon):
        return self.min_lat <= lat < self.max_lat and self.min_lon <= lon < self.max_lon

    @property
    def center(self):
        return GeoPoint(
            (self.min_lat + self.max_lat) / 2.0, (self.min_lon + self.max_lon) / 2.0
        )

    def intersects(self, other):
        return (
            self.min_lat < other.max_lat
            and other.min_lat < self.max_lat
            and self.min_lon < other.max_lon
            and other.min_lon < self.max_lon
        )


def _check_lat(at_lat):
    if abs(at_lat) >= MAX_ABS_LAT:
        raise PolarRegion(f"|lat| = {abs(at_lat)} >= {MAX_ABS_LAT}: longitude scale degenerate")


def degrees_per_meter(at_lat):
    """Return ``(deg_lat_per_m, deg_lon_per_m)`` at latitude ``at_lat``."""
    _check_lat(at_lat)
    return 1.0 / METERS_PER_DEGREE, 1.0 / (METERS_PER_DEGREE * math.cos(math.radians(at_lat)))


def meters_to_degrees(b_meters, at_lat):
    """Convert a length in metres to ``(dlat, dlon)`` degrees at ``at_lat``."""
    if not b_meters > 0:
        raise ValueError(f"length must be positive, got {b_meters}")
    _check_lat(at_lat)
    dlat = b_meters / METERS_PER_DEGREE
    dlon = b_meters / (METERS_PER_DEGREE * math.cos(at_lat * math.pi / 180.0))
    return dlat, dlon


def offset_to_geo(center, off):
    """Decode a half-metre offset relative to ``center`` into a GeoPoint."""
    _check_lat(center.lat)
    lat = center.lat + (off.dy / 2.0) / METERS_PER_DEGREE
    lon = center.lon + (off.dx / 2.0) / (METERS_PER_DEGREE * math.cos(center.lat * math.pi / 180.0))
    return GeoPoint(lat, lon)


def decode_offsets(center, dx, dy):
    """Array form of :func:`offset_to_geo`; gives bit-identical results."""
    _check_lat(center.lat)
    lat = center.lat + (np.asarray(dy) / 2.0) / METERS_PER_DEGREE
    lon = center.lon + (np.asarray(dx) / 2.0) / (METERS_PER_DEGREE * math.cos(center.lat * math.pi / 180.0))
    return lat, lon


def geo_to_meters(center, lat, lon):
    """Project degrees to local metres ``(x_east, y_north)`` around ``center``.

    Accepts scalars or numpy arrays.
    """
    _check_lat(center.lat)
    x = (lon - center.lon) * METERS_PER_DEGREE * math.cos(center.lat * math.pi / 180.0)
    y = (lat - center.lat) * METERS_PER_DEGREE
    return x, y


def cell_bbox(center, b_real_m, city_center_lat):
    """Box of side ``b_real_m`` metres around ``center``.

    The degree size is taken at ``city_center_lat`` so every cell of a city
    has the same angular size.
    """
    if not b_real_m > 0:
        raise ValueError(f"box side must be positive, got {b_real_m}")
    dlat, dlon = meters_to_degrees(b_real_m, city_center_lat)
    return BBox(
        center.lat - dlat / 2.0,
        center.lat + dlat / 2.0,
        center.lon - dlon / 2.0,
        center.lon + dlon / 2.0,
    )


def offset_bbox(city_center, off, b_real_m):
    """Cell box for the lattice centre ``off``, with edges decoded from the lattice.

    Neighbouring cells decode their shared edge from the same integer offset,
    so the boundary is bit-identical on both sides and the half-open boxes
    tile the city exactly.
    """
    b = int(b_real_m)
    sw = offset_to_geo(city_center, LocalOffset(off.dx - b, off.dy - b))
    ne = offset_to_geo(city_center, LocalOffset(off.dx + b, off.dy + b))
    return BBox(sw.lat, ne.lat, sw.lon, ne.lon)
