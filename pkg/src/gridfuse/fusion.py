"""Stamp raster values onto road edges, one grid cell at a time.

Each grid centre gets a box of the real cell size. The raster value for the
box (mean of contained pixels, or the pixel under the centre) is written to
every edge whose midpoint falls in that box. Edges outside the city square
go to the nearest cell. Before returning, the per-cell edge counts must add
up to the number of edges in the graph.
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .ascii_grid import query_bbox_mean, query_point
from .errors import ConservationViolation, NoData, OutOfExtent, RasterCoverageError
from .geo import geo_to_meters, offset_bbox
from .graph import assign_edge_values

DEFAULT_NODATA_THRESHOLD = 0.10
SAMPLING_MODES = ("mean", "point")


@dataclass
class FusionReport:
    city_id: str
    feature: str
    g: int
    edges_total: int
    edges_assigned: int
    edges_valued: int = 0
    cells_empty: int = 0
    cells_nodata: int = 0
    value_min: float | None = None
    value_max: float | None = None
    value_mean: float | None = None
    status: str = "ok"
    error: str | None = None

    def to_json(self):
        return json.dumps(asdict(self), separators=(",", ":"), allow_nan=False)

    @classmethod
    def from_json(cls, line):
        return cls(**json.loads(line))

    @classmethod
    def failed(cls, city_id, feature, exc, g=0):
        return cls(city_id, feature, g, 0, 0, status="error", error=f"{type(exc).__name__}: {exc}")


def cell_boxes(centers, spec):
    return [offset_bbox(centers.city_center, off, spec.b_real_m) for off in centers.offsets]


def cell_owners(graph, centers, spec, boxes=None):
    """Owning cell index of every edge, plus the per-cell edge counts.

    An edge belongs to the cell whose half-open box holds its midpoint, or
    to the nearest cell centre when no box does.
    """
    boxes = cell_boxes(centers, spec) if boxes is None else boxes
    n = len(graph.edges)
    owner = np.full(n, -1, dtype=np.int64)
    counts = np.zeros(len(boxes), dtype=np.int64)
    if n == 0:
        return owner, counts
    lat, lon = graph.midpoints()
    for k, box in enumerate(boxes):
        inside = (lat >= box.min_lat) & (lat < box.max_lat) & (lon >= box.min_lon) & (lon < box.max_lon)
        owner[inside] = k
        counts[k] += int(np.count_nonzero(inside))

    stray = np.flatnonzero(owner < 0)
    if stray.size:
        x, y = geo_to_meters(centers.city_center, lat[stray], lon[stray])
        cx = np.array([o.dx / 2.0 for o in centers.offsets])
        cy = np.array([o.dy / 2.0 for o in centers.offsets])
        d2 = (x[:, None] - cx[None, :]) ** 2 + (y[:, None] - cy[None, :]) ** 2
        nearest = np.argmin(d2, axis=1)  # ties go to the first cell in canonical order
        owner[stray] = nearest
        np.add.at(counts, nearest, 1)
    return owner, counts


def fuse(
    graph,
    raster,
    centers,
    spec,
    feature_name,
    *,
    city_id="",
    sampling="mean",
    nodata_threshold=DEFAULT_NODATA_THRESHOLD,
):
    """Assign ``feature_name`` from ``raster`` to the edges of ``graph``.

    Returns the updated graph and a :class:`FusionReport`. Cells whose raster
    query hits nodata or falls outside the raster leave their edges without
    the attribute; if more than ``nodata_threshold`` of cells do so,
    :class:`RasterCoverageError` is raised.
    """
    if sampling not in SAMPLING_MODES:
        raise ValueError(f"sampling must be one of {SAMPLING_MODES}, got {sampling!r}")
    boxes = cell_boxes(centers, spec)

    cell_values = []
    for box, center in zip(boxes, centers.decoded):
        try:
            if sampling == "mean":
                cell_values.append(query_bbox_mean(raster, box))
            else:
                cell_values.append(query_point(raster, center))
        except (NoData, OutOfExtent):
            cell_values.append(None)
    cells_nodata = sum(v is None for v in cell_values)

    owner, counts = cell_owners(graph, centers, spec, boxes)
    edges_total = len(graph.edges)
    edges_assigned = int(counts.sum())
    if edges_assigned != edges_total or (owner < 0).any():
        raise ConservationViolation(edges_total, edges_assigned)
    if cells_nodata > nodata_threshold * len(boxes):
        raise RasterCoverageError(cells_nodata, len(boxes), nodata_threshold)

    values = {}
    for e, k in zip(graph.edges, owner.tolist()):
        if cell_values[k] is not None:
            values[e.id] = cell_values[k]
    fused = assign_edge_values(graph, feature_name, values)

    report = FusionReport(
        city_id=city_id,
        feature=feature_name,
        g=spec.g,
        edges_total=edges_total,
        edges_assigned=edges_assigned,
        edges_valued=len(values),
        cells_empty=int(np.count_nonzero(counts == 0)),
        cells_nodata=cells_nodata,
    )
    if values:
        vals = list(values.values())
        report.value_min = min(vals)
        report.value_max = max(vals)
        report.value_mean = math.fsum(vals) / len(vals)
    return fused, report
