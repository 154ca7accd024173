"""Deterministic synthetic cities for desk-scale runs and tests.

The raster encodes its own pixel index (``value = row * ncols + col``), so
the expected value on every edge can be recomputed independently.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .ascii_grid import DEFAULT_NODATA, RasterGrid, format_ascii_grid
from .errors import InvalidSize
from .geo import METERS_PER_DEGREE, GeoPoint
from .graph import Edge, RoadGraph, edge_length_m, format_geojson
from .rasterize import derive_spec

HIGHWAY_TYPES = ("residential", "primary", "secondary", "tertiary", "service")
COORD_DECIMALS = 7


@dataclass
class SyntheticCity:
    city_id: str
    center: GeoPoint
    a_m: float
    r_m: float
    graph: RoadGraph
    raster: RasterGrid


def _to_geo(center, x, y):
    lat = center.lat + y / METERS_PER_DEGREE
    lon = center.lon + x / (METERS_PER_DEGREE * math.cos(math.radians(center.lat)))
    return GeoPoint(round(lat, COORD_DECIMALS), round(lon, COORD_DECIMALS))


def index_raster(center, spec, feature_name="value"):
    """North-up raster over the city square with one pixel row per grid row.

    Pixels are ``b_real_m`` metres tall; at the equator they are also exactly
    one grid cell wide.
    """
    cs = spec.b_real_m / METERS_PER_DEGREE
    nrows = spec.s
    ncols = max(1, math.ceil(round(spec.s / math.cos(math.radians(center.lat)), 9)))
    values = np.arange(nrows * ncols, dtype=np.float64).reshape(nrows, ncols)
    return RasterGrid(
        ncols, nrows,
        center.lon - ncols * cs / 2.0,
        center.lat - nrows * cs / 2.0,
        cs, DEFAULT_NODATA, values, feature_name,
    )


def make_synthetic(seed, a_m, r_m, edges_per_cell, *, center=None, city_id=None, feature_name="value"):
    """Build a random road graph covering the city square plus its index raster.

    Each cell holds two nodes; each of the ``edges_per_cell`` edges per cell
    starts at a node in the cell and ends at a node in the same or a
    neighbouring cell, bending through a jittered interior vertex, so some
    edges cross cell boundaries.
    """
    if not (a_m > 0 and r_m > 0) or edges_per_cell < 0:
        raise InvalidSize(f"bad synthetic parameters A={a_m}, r={r_m}, edges/cell={edges_per_cell}")
    spec = derive_spec(a_m, r_m)
    rng = np.random.default_rng(seed)
    if center is None:
        center = GeoPoint(0.0, round(float(rng.uniform(-170.0, 170.0)), 4))
    city_id = city_id if city_id is not None else f"synthetic-{seed}"

    s, b = spec.s, float(spec.b_real_m)
    half = s * b / 2.0
    node_xy = {}
    cell_nodes = {}
    nodes = {}
    for row in range(s):
        for col in range(s):
            ids = []
            for _ in range(2):
                x = -half + (col + rng.uniform(0.05, 0.95)) * b
                y = -half + (row + rng.uniform(0.05, 0.95)) * b
                nid = f"n{len(nodes)}"
                nodes[nid] = _to_geo(center, x, y)
                node_xy[nid] = (x, y)
                ids.append(nid)
            cell_nodes[row, col] = ids

    edges = []
    for row in range(s):
        for col in range(s):
            for _ in range(edges_per_cell):
                u = cell_nodes[row, col][int(rng.integers(2))]
                nr = min(max(row + int(rng.integers(-1, 2)), 0), s - 1)
                nc = min(max(col + int(rng.integers(-1, 2)), 0), s - 1)
                candidates = [n for n in cell_nodes[nr, nc] if n != u]
                v = candidates[int(rng.integers(len(candidates)))]
                (x0, y0), (x1, y1) = node_xy[u], node_xy[v]
                jx, jy = rng.uniform(-0.2, 0.2, size=2) * b
                mid = _to_geo(center, (x0 + x1) / 2.0 + jx, (y0 + y1) / 2.0 + jy)
                geometry = (nodes[u], mid, nodes[v])
                attrs = {
                    "highway": HIGHWAY_TYPES[int(rng.integers(len(HIGHWAY_TYPES)))],
                    "length": round(edge_length_m(geometry), 1),
                }
                edges.append(Edge(f"e{len(edges)}", u, v, geometry, attrs))

    graph = RoadGraph(nodes, edges)
    raster = index_raster(center, spec, feature_name)
    return SyntheticCity(city_id, center, a_m, r_m, graph, raster)


def gen_synthetic(seed, a_m, r_m, edges_per_cell, out_dir, *, center=None, city_id=None, feature_name="value"):
    """Write a synthetic city's graph (GeoJSON) and raster (ASCII grid) to ``out_dir``.

    Returns ``(graph_path, raster_path, CityRecord)``.
    """
    from .batch import CityRecord

    city = make_synthetic(seed, a_m, r_m, edges_per_cell, center=center, city_id=city_id,
                          feature_name=feature_name)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    graph_path = out / f"{city.city_id}.geojson"
    raster_path = out / f"{city.city_id}_{feature_name}.asc"
    graph_path.write_text(format_geojson(city.graph), encoding="utf-8")
    raster_path.write_text(format_ascii_grid(city.raster), encoding="utf-8")
    record = CityRecord(city.city_id, city.center, a_m, graph_path, [(feature_name, raster_path)])
    return graph_path, raster_path, record
