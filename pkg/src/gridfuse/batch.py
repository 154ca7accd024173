"""Run rasterise-then-fuse over a list of cities."""
from __future__ import annotations

import csv
import functools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .ascii_grid import read_ascii_grid
from .errors import GridFuseError
from .fusion import DEFAULT_NODATA_THRESHOLD, FusionReport, fuse
from .geo import GeoPoint
from .graph import format_geojson, read_geojson
from .rasterize import derive_spec, rasterize

log = logging.getLogger(__name__)

CITY_LIST_HEADER = ["city_id", "lat", "lon", "size_m", "graph_path"]


@dataclass
class CityRecord:
    city_id: str
    center: GeoPoint
    a_m: float
    graph_path: Path
    features: list = field(default_factory=list)  # (feature_name, raster_path) pairs


def read_city_list(path, features=()):
    """Read the city list CSV; relative graph paths resolve against the CSV's folder.

    ``features`` is the list of ``(feature_name, raster_path)`` pairs applied
    to every city.
    """
    path = Path(path)
    base = path.parent
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or [f.strip() for f in reader.fieldnames] != CITY_LIST_HEADER:
            raise GridFuseError(f"{path}: expected header {','.join(CITY_LIST_HEADER)}, got {reader.fieldnames}")
        for lineno, row in enumerate(reader, start=2):
            try:
                center = GeoPoint(float(row["lat"]), float(row["lon"]))
                size = float(row["size_m"])
            except (TypeError, ValueError) as exc:
                raise GridFuseError(f"{path}:{lineno}: {exc}") from None
            graph_path = Path(row["graph_path"])
            if not graph_path.is_absolute():
                graph_path = base / graph_path
            records.append(CityRecord(row["city_id"], center, size, graph_path, list(features)))
    return records


def write_city_list(path, records):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CITY_LIST_HEADER)
        for rec in records:
            writer.writerow([rec.city_id, repr(rec.center.lat), repr(rec.center.lon), repr(rec.a_m), str(rec.graph_path)])


def process_city(city, r_m, *, sampling="mean", nodata_threshold=DEFAULT_NODATA_THRESHOLD, out_dir=None):
    """Rasterise one city and fuse each of its features; never raises for bad inputs."""
    names = [name for name, _ in city.features] or [""]
    try:
        spec = derive_spec(city.a_m, r_m)
        centers = rasterize(city.center, spec)
        graph = read_geojson(city.graph_path)
    except (GridFuseError, OSError, ValueError) as exc:
        log.warning("city %s failed before fusion: %s", city.city_id, exc)
        return [FusionReport.failed(city.city_id, name, exc) for name in names]

    reports = []
    for name, raster_path in city.features:
        try:
            raster = read_ascii_grid(raster_path, name)
            graph, report = fuse(graph, raster, centers, spec, name, city_id=city.city_id,
                                 sampling=sampling, nodata_threshold=nodata_threshold)
        except (GridFuseError, OSError, ValueError) as exc:
            log.warning("city %s feature %s failed: %s", city.city_id, name, exc)
            report = FusionReport.failed(city.city_id, name, exc, spec.g)
        reports.append(report)

    if out_dir is not None:
        out = Path(out_dir) / f"{city.city_id}.geojson"
        _atomic_write(out, format_geojson(graph))
    return reports


def _atomic_write(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(path)


def run_batch(cities, r_m, parallelism=1, *, sampling="mean",
              nodata_threshold=DEFAULT_NODATA_THRESHOLD, out_dir=None):
    """Process ``cities`` and return their reports in input order.

    Each city yields one report per feature. Failures are recorded in the
    report (``status == "error"``) and do not stop the batch. Results do not
    depend on ``parallelism``.
    """
    if not r_m > 0:
        raise ValueError(f"resolution must be positive, got {r_m}")
    work = functools.partial(process_city, r_m=r_m, sampling=sampling,
                             nodata_threshold=nodata_threshold, out_dir=out_dir)
    cities = list(cities)
    if parallelism <= 1 or len(cities) <= 1:
        per_city = [work(c) for c in cities]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            per_city = list(pool.map(work, cities))
    return [r for reports in per_city for r in reports]


def write_reports(path, reports, append=True):
    with open(path, "a" if append else "w", encoding="utf-8") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
