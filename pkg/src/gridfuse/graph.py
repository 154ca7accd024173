"""Road networks as nodes plus attributed polyline edges, with GeoJSON I/O.

GeoJSON layout: a FeatureCollection where ``Point`` features are nodes
(property ``id``) and ``LineString`` features are edges (properties ``id``,
``u``, ``v``). Every other property is carried through untouched.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ParseError, UnknownEdge
from .geo import METERS_PER_DEGREE, GeoPoint

# endpoint/node mismatch tolerated when reading, in degrees (about 1 cm)
ENDPOINT_TOLERANCE = 1e-7


@dataclass(frozen=True)
class Edge:
    id: object
    u: object
    v: object
    geometry: tuple
    attrs: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.geometry) < 2:
            raise ValueError(f"edge {self.id!r} needs at least two points")


@dataclass
class RoadGraph:
    nodes: dict
    edges: list
    node_attrs: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    _midpoints: tuple = field(default=None, init=False, repr=False, compare=False)
    _index: dict = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.node_attrs = {nid: self.node_attrs.get(nid, {}) for nid in self.nodes}
        ids = set()
        for e in self.edges:
            if e.id in ids:
                raise ValueError(f"duplicate edge id {e.id!r}")
            ids.add(e.id)
            for end in (e.u, e.v):
                if end not in self.nodes:
                    raise ValueError(f"edge {e.id!r} references unknown node {end!r}")

    @property
    def edge_ids(self):
        return [e.id for e in self.edges]

    def edge(self, edge_id):
        if self._index is None:
            self._index = {e.id: k for k, e in enumerate(self.edges)}
        try:
            return self.edges[self._index[edge_id]]
        except KeyError:
            raise UnknownEdge(edge_id) from None

    def midpoints(self):
        """Arc-length midpoints of all edges as ``(lat, lon)`` arrays, in edge order."""
        if self._midpoints is None:
            pts = [edge_midpoint(e.geometry) for e in self.edges]
            lat = np.array([p.lat for p in pts], dtype=np.float64)
            lon = np.array([p.lon for p in pts], dtype=np.float64)
            self._midpoints = (lat, lon)
        return self._midpoints


def edge_midpoint(geometry):
    """Point halfway along a polyline.

    Segment lengths are measured in an equirectangular frame scaled at the
    polyline's mean latitude; the point is interpolated linearly in degrees.
    """
    lat0 = sum(p.lat for p in geometry) / len(geometry)
    kx = math.cos(math.radians(lat0))
    seglen = [
        math.hypot((b.lon - a.lon) * kx, b.lat - a.lat) for a, b in zip(geometry, geometry[1:])
    ]
    total = sum(seglen)
    if total == 0.0:
        return geometry[0]
    half = total / 2.0
    acc = 0.0
    for (a, b), length in zip(zip(geometry, geometry[1:]), seglen):
        if length > 0.0 and acc + length >= half:
            t = (half - acc) / length
            return GeoPoint(a.lat + t * (b.lat - a.lat), a.lon + t * (b.lon - a.lon))
        acc += length
    return geometry[-1]


def edge_length_m(geometry):
    kx = math.cos(math.radians(sum(p.lat for p in geometry) / len(geometry)))
    return METERS_PER_DEGREE * sum(
        math.hypot((b.lon - a.lon) * kx, b.lat - a.lat) for a, b in zip(geometry, geometry[1:])
    )


def edges_in_bbox(g, box):
    """Ids of edges whose midpoint lies in the half-open ``box``."""
    if not g.edges:
        return []
    lat, lon = g.midpoints()
    mask = (lat >= box.min_lat) & (lat < box.max_lat) & (lon >= box.min_lon) & (lon < box.max_lon)
    return [g.edges[k].id for k in np.flatnonzero(mask)]


def assign_edge_values(g, name, values):
    """Copy of ``g`` with attribute ``name`` set from the ``{edge_id: value}`` map."""
    if not values:
        return g
    for edge_id in values:
        g.edge(edge_id)
    edges = [
        replace(e, attrs={**e.attrs, name: values[e.id]}) if e.id in values else e
        for e in g.edges
    ]
    out = RoadGraph(g.nodes, edges, g.node_attrs, g.meta)
    out._midpoints = g._midpoints
    return out


def set_edge_attr(g, ids, name, value):
    """Set ``name = value`` on the edges ``ids``; everything else is left as is."""
    return assign_edge_values(g, name, dict.fromkeys(ids, value))


# -- GeoJSON -----------------------------------------------------------------


def _point(coords, where):
    try:
        lon, lat = float(coords[0]), float(coords[1])
        return GeoPoint(lat, lon)
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"{where}: bad coordinates {coords!r} ({exc})") from None


def _near(a, b):
    return abs(a.lat - b.lat) <= ENDPOINT_TOLERANCE and abs(a.lon - b.lon) <= ENDPOINT_TOLERANCE


def graph_from_geojson(doc):
    """Build a RoadGraph from an already-decoded GeoJSON mapping."""
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("top-level object is not a FeatureCollection")
    features = doc.get("features")
    if not isinstance(features, list):
        raise ParseError("FeatureCollection has no 'features' list")
    meta = {k: v for k, v in doc.items() if k not in ("type", "features")}

    nodes, node_attrs, raw_edges = {}, {}, []
    for k, feat in enumerate(features):
        where = f"feature {k}"
        if not isinstance(feat, dict):
            raise ParseError(f"{where}: not a JSON object")
        geom = feat.get("geometry") or {}
        props = dict(feat.get("properties") or {})
        kind = geom.get("type")
        if kind == "Point":
            if "id" not in props:
                raise ParseError(f"{where}: Point without 'id' property")
            nid = props.pop("id")
            if nid in nodes:
                raise ParseError(f"{where}: duplicate node id {nid!r}")
            nodes[nid] = _point(geom.get("coordinates"), where)
            node_attrs[nid] = props
        elif kind == "LineString":
            missing = [key for key in ("id", "u", "v") if key not in props]
            if missing:
                raise ParseError(f"{where}: LineString missing properties {missing}")
            coords = geom.get("coordinates") or []
            if len(coords) < 2:
                raise ParseError(f"{where}: LineString needs at least two positions")
            geometry = tuple(_point(c, where) for c in coords)
            raw_edges.append((where, props.pop("id"), props.pop("u"), props.pop("v"), geometry, props))
        else:
            raise ParseError(f"{where}: unsupported geometry type {kind!r}")

    edges, seen = [], set()
    for where, eid, u, v, geometry, attrs in raw_edges:
        if eid in seen:
            raise ParseError(f"{where}: duplicate edge id {eid!r}")
        seen.add(eid)
        for end in (u, v):
            if end not in nodes:
                raise ParseError(f"{where}: dangling reference to node {end!r}")
        if not (_near(geometry[0], nodes[u]) and _near(geometry[-1], nodes[v])):
            raise ParseError(f"{where}: geometry endpoints do not match nodes {u!r}/{v!r}")
        edges.append(Edge(eid, u, v, geometry, attrs))
    return RoadGraph(nodes, edges, node_attrs, meta)


def parse_geojson(source):
    """Parse a GeoJSON road graph from a text stream or string."""
    text = source if isinstance(source, str) else source.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (column {exc.colno})", exc.lineno) from None
    return graph_from_geojson(doc)


def read_geojson(path):
    with open(path, encoding="utf-8") as fh:
        return parse_geojson(fh)


def graph_to_geojson(g):
    features = []
    for nid, p in g.nodes.items():
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [p.lon, p.lat]},
            "properties": {"id": nid, **g.node_attrs.get(nid, {})},
        })
    for e in g.edges:
        features.append({
            "type": "Feature",
            "geometry": {"type": "LineString", "coordinates": [[p.lon, p.lat] for p in e.geometry]},
            "properties": {"id": e.id, "u": e.u, "v": e.v, **e.attrs},
        })
    return {"type": "FeatureCollection", **g.meta, "features": features}


def format_geojson(g, indent=None):
    return json.dumps(graph_to_geojson(g), indent=indent, allow_nan=False) + "\n"
