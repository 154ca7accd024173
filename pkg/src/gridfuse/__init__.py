"""Assign raster feature values to road-network edges of square city maps.

Typical flow::

    spec = derive_spec(size_m, resolution_m)
    centers = rasterize(GeoPoint(lat, lon), spec)
    fused, report = fuse(graph, raster, centers, spec, "pm25")
"""
from .ascii_grid import RasterGrid, format_ascii_grid, parse_ascii_grid, query_bbox_mean, query_point, read_ascii_grid
from .batch import CityRecord, read_city_list, run_batch, write_city_list, write_reports
from .errors import (
    ConservationViolation,
    CountMismatch,
    GridFuseError,
    InvalidSize,
    NoData,
    OutOfExtent,
    ParseError,
    PolarRegion,
    RasterCoverageError,
    UnknownEdge,
)
from .fusion import FusionReport, cell_owners, fuse
from .geo import BBox, GeoPoint, LocalOffset, cell_bbox, meters_to_degrees, offset_bbox, offset_to_geo
from .graph import Edge, RoadGraph, edges_in_bbox, format_geojson, parse_geojson, read_geojson, set_edge_attr
from .rasterize import CenterList, GridSpec, derive_spec, expand_corners, rasterize, rasterize_quantized
from .synthetic import gen_synthetic, make_synthetic

__version__ = "0.1.0"
