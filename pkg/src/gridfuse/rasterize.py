"""Square city rasterisation by perfect-square layer expansion.

Starting from the city centre, each iteration turns every current vertex
into the four corners of a box around it and removes duplicates. The
distinct-vertex counts grow as 4, 9, 16, ... until one final expansion with
the real box size yields the ``s * s`` grid centres.

Vertices live on an integer lattice of half-metres, so duplicate removal is
exact. :func:`rasterize_quantized` keeps the older floating-point variant
(dedup by rounding degrees) to show how it breaks.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CountMismatch, InvalidSize
from .geo import GeoPoint, LocalOffset, decode_offsets, meters_to_degrees

EVEN = "even"
ODD = "odd"
TRIVIAL = "trivial"


def round_half_away(x):
    """Nearest integer, ties away from zero (``round`` uses banker's rounding)."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class GridSpec:
    a_m: float
    r_m: float
    s: int
    g: int
    parity: str
    i_total: int
    i_vir: int
    b_real_m: int
    b_vir_m: int


def derive_spec(a_m, r_m):
    """Derive the rasterisation parameters for a city of side ``a_m`` at resolution ``r_m``.

    >>> spec = derive_spec(3000, 500)
    >>> spec.s, spec.g, spec.parity, spec.i_total, spec.i_vir
    (6, 36, 'even', 3, 2)
    """
    if not (a_m > 0 and r_m > 0):
        raise InvalidSize(f"city size and resolution must be positive (A={a_m}, r={r_m})")
    s = round_half_away(a_m / r_m)
    if s < 1:
        raise InvalidSize(f"A/r = {a_m / r_m:.3f} rounds to zero steps")
    b_real = round_half_away(a_m / s)
    if b_real < 1:
        raise InvalidSize(f"real box side rounds to {b_real} m")
    g = s * s
    if s == 1:
        return GridSpec(a_m, r_m, s, g, TRIVIAL, 0, 0, b_real, b_real)
    if s % 2 == 0:
        i_total = s // 2
        return GridSpec(a_m, r_m, s, g, EVEN, i_total, i_total - 1, b_real, 2 * b_real)
    i_total = s - 1
    return GridSpec(a_m, r_m, s, g, ODD, i_total, i_total - 1, b_real, b_real)


def expand_corners(p, b_m):
    """Corners of the box of side ``b_m`` metres centred on ``p``.

    In half-metre units the corners sit at ``p + (+-b_m, +-b_m)``.
    """
    b = int(b_m)
    return [
        LocalOffset(p.dx + b, p.dy + b),
        LocalOffset(p.dx + b, p.dy - b),
        LocalOffset(p.dx - b, p.dy + b),
        LocalOffset(p.dx - b, p.dy - b),
    ]


@dataclass
class CenterList:
    city_center: GeoPoint
    offsets: list
    decoded: list
    virtual_counts: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.offsets)

    def to_csv(self, fh=None):
        """Write ``lat,lon`` rows with 7 fractional digits; returns the text if ``fh`` is None."""
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["lat", "lon"])
        for p in self.decoded:
            writer.writerow([f"{p.lat:.7f}", f"{p.lon:.7f}"])
        if fh is None:
            return out.getvalue()


_SIGNS = np.array([(1, 1), (1, -1), (-1, 1), (-1, -1)], dtype=np.int64)


def _expand_layer(vertices, b):
    """Four corners of every vertex, duplicates removed.

    Each ``(dx, dy)`` is packed into one exact int64 key, so the result comes
    back unique and sorted by ``(dy, dx)``.
    """
    corners = (vertices[:, None, :] + b * _SIGNS[None, :, :]).reshape(-1, 2)
    lo = corners.min(axis=0)
    width = int(corners[:, 0].max() - lo[0]) + 1
    keys = np.unique((corners[:, 1] - lo[1]) * width + (corners[:, 0] - lo[0]))
    return np.stack([keys % width + lo[0], keys // width + lo[1]], axis=1)


def lattice_layers(spec):
    """Run the layered expansion on the integer lattice.

    Returns ``(virtual_counts, final)``: distinct-vertex counts after each
    virtual iteration and an ``(n, 2)`` array of ``(dx, dy)`` centres.
    """
    origin = np.zeros((1, 2), dtype=np.int64)
    if spec.parity == TRIVIAL:
        return (), origin
    if spec.i_total == 1:
        return (), _expand_layer(origin, spec.b_real_m)
    # the seed expansion is virtual iteration 0
    vertices = _expand_layer(origin, spec.b_vir_m)
    counts = [len(vertices)]
    for _ in range(1, spec.i_vir):
        vertices = _expand_layer(vertices, spec.b_vir_m)
        counts.append(len(vertices))
    return tuple(counts), _expand_layer(vertices, spec.b_real_m)


def rasterize(center, spec, *, layers=lattice_layers):
    """Grid centres of the city around ``center``, sorted by ``(dy, dx)``.

    Raises :class:`CountMismatch` if the centre count differs from ``spec.g``.
    """
    counts, final = layers(spec)
    if len(final) != spec.g:
        raise CountMismatch(spec.g, len(final))
    # final arrives sorted by (dy, dx)
    offsets = [LocalOffset(x, y) for x, y in final.tolist()]
    lat, lon = decode_offsets(center, final[:, 0], final[:, 1])
    decoded = [GeoPoint(a, b) for a, b in zip(lat.tolist(), lon.tolist())]
    return CenterList(center, offsets, decoded, counts)


def rasterize_quantized(center, spec, decimals=4):
    """Floating-degree variant that detects duplicates by rounding to ``decimals`` places.

    Coordinates are expanded directly in degrees, so the same vertex reached
    along different paths can carry slightly different floats. Rounding
    either merges distinct vertices (spacing below ``10**-decimals``) or
    splits one vertex across a rounding boundary; both surface as
    :class:`CountMismatch`. Returned ``decoded`` points are rounded to
    ``decimals`` places.
    """
    if not 1 <= decimals <= 9:
        raise ValueError(f"decimals must be in [1, 9], got {decimals}")

    def key(lat, lon):
        return round(lat, decimals), round(lon, decimals)

    def expand(points, b_m):
        hlat, hlon = meters_to_degrees(b_m / 2.0, center.lat)
        b = int(b_m)
        out = {}
        for lat, lon, dx, dy in points:
            for sy in (1, -1):
                for sx in (1, -1):
                    nlat, nlon = lat + sy * hlat, lon + sx * hlon
                    out.setdefault(key(nlat, nlon), (nlat, nlon, dx + sx * b, dy + sy * b))
        return list(out.values())

    seed = [(center.lat, center.lon, 0, 0)]
    counts = []
    if spec.parity == TRIVIAL:
        final = seed
    elif spec.i_total == 1:
        final = expand(seed, spec.b_real_m)
    else:
        vertices = expand(seed, spec.b_vir_m)
        counts.append(len(vertices))
        for _ in range(1, spec.i_vir):
            vertices = expand(vertices, spec.b_vir_m)
            counts.append(len(vertices))
        final = expand(vertices, spec.b_real_m)
    if len(final) != spec.g:
        raise CountMismatch(spec.g, len(final))
    final.sort(key=lambda p: (p[3], p[2]))
    offsets = [LocalOffset(dx, dy) for _, _, dx, dy in final]
    decoded = [GeoPoint(*key(lat, lon)) for lat, lon, _, _ in final]
    return CenterList(center, offsets, decoded, tuple(counts))
