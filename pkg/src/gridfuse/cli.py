"""Command-line front end.

Exit codes: 0 ok, 1 verification failed, 2 bad input, 3 centre count
mismatch, 4 edge conservation violated, 5 raster coverage too low.
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import verify
from .ascii_grid import read_ascii_grid
from .batch import _atomic_write, read_city_list, run_batch, write_city_list, write_reports
from .errors import (
    ConservationViolation,
    CountMismatch,
    GridFuseError,
    RasterCoverageError,
)
from .fusion import DEFAULT_NODATA_THRESHOLD, SAMPLING_MODES, fuse
from .geo import GeoPoint
from .graph import format_geojson, read_geojson
from .rasterize import derive_spec, rasterize, rasterize_quantized
from .synthetic import gen_synthetic

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_COUNT, EXIT_CONSERVATION, EXIT_COVERAGE = range(6)


def _err(msg):
    print(msg, file=sys.stderr)


def _city_args(p):
    p.add_argument("--center-lat", type=float, required=True)
    p.add_argument("--center-lon", type=float, required=True)
    p.add_argument("--size-m", type=float, required=True)
    p.add_argument("--resolution-m", type=float, required=True)
    p.add_argument("--decimals", type=int, choices=range(1, 10), metavar="{1..9}",
                   help="use the floating-degree pipeline with duplicates rounded to this many places")


def build_parser():
    parser = argparse.ArgumentParser(prog="gridfuse", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rasterize", help="write the grid centres of one city as lat,lon CSV")
    _city_args(p)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("fuse", help="assign raster values to the road edges of one city")
    _city_args(p)
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--raster", type=Path, required=True)
    p.add_argument("--feature", required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--nodata-threshold", type=float, default=DEFAULT_NODATA_THRESHOLD)
    p.add_argument("--sampling", choices=SAMPLING_MODES, default="mean")

    p = sub.add_parser("batch", help="fuse every city of a city list")
    p.add_argument("--cities", type=Path, required=True)
    p.add_argument("--resolution-m", type=float, required=True)
    p.add_argument("--feature", action="append", required=True, help="repeat together with --raster")
    p.add_argument("--raster", type=Path, action="append", required=True)
    p.add_argument("--out", type=Path, required=True, help="JSON-lines report file (appended)")
    p.add_argument("--graph-out", type=Path, help="directory for fused GeoJSON graphs")
    p.add_argument("--parallelism", type=int, default=1)
    p.add_argument("--nodata-threshold", type=float, default=DEFAULT_NODATA_THRESHOLD)
    p.add_argument("--sampling", choices=SAMPLING_MODES, default="mean")

    p = sub.add_parser("gen", help="write a synthetic city (graph, index raster, city list)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--size-m", type=float, required=True)
    p.add_argument("--resolution-m", type=float, required=True)
    p.add_argument("--edges-per-cell", type=int, default=3)
    p.add_argument("--feature", default="value")
    p.add_argument("--center-lat", type=float)
    p.add_argument("--center-lon", type=float)
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("verify", help="check the rasteriser against the meshgrid oracle")
    p.add_argument("--max-s", type=int, default=41)
    return parser


def _centers(args, spec):
    center = GeoPoint(args.center_lat, args.center_lon)
    if args.decimals is not None:
        return rasterize_quantized(center, spec, args.decimals)
    return rasterize(center, spec)


def cmd_rasterize(args):
    spec = derive_spec(args.size_m, args.resolution_m)
    print(f"s={spec.s} G={spec.g} parity={spec.parity} I_total={spec.i_total} "
          f"I_vir={spec.i_vir} B_real={spec.b_real_m} B_vir={spec.b_vir_m}")
    try:
        centers = _centers(args, spec)
    except CountMismatch as exc:
        print(f"#latlon == G: FAIL ({exc.got} != {exc.expected})")
        raise
    if centers.virtual_counts:
        print("virtual vertex counts: " + " ".join(map(str, centers.virtual_counts)))
    print(f"#latlon == G: OK ({len(centers)} == {spec.g})")
    _atomic_write(args.out, centers.to_csv())
    return EXIT_OK


def cmd_fuse(args):
    spec = derive_spec(args.size_m, args.resolution_m)
    graph = read_geojson(args.graph)
    raster = read_ascii_grid(args.raster, args.feature)
    centers = _centers(args, spec)
    fused, report = fuse(graph, raster, centers, spec, args.feature, city_id=args.graph.stem,
                         sampling=args.sampling, nodata_threshold=args.nodata_threshold)
    _atomic_write(args.out, format_geojson(fused))
    print(report.to_json())
    return EXIT_OK


def cmd_batch(args):
    if len(args.feature) != len(args.raster):
        raise GridFuseError("--feature and --raster must be given the same number of times")
    cities = read_city_list(args.cities, list(zip(args.feature, args.raster)))
    reports = run_batch(cities, args.resolution_m, args.parallelism, sampling=args.sampling,
                        nodata_threshold=args.nodata_threshold, out_dir=args.graph_out)
    write_reports(args.out, reports)
    failed = sum(r.status != "ok" for r in reports)
    _err(f"{len(reports) - failed}/{len(reports)} city reports ok")
    return EXIT_OK


def cmd_gen(args):
    center = None
    if args.center_lat is not None or args.center_lon is not None:
        center = GeoPoint(args.center_lat or 0.0, args.center_lon or 0.0)
    graph_path, raster_path, record = gen_synthetic(
        args.seed, args.size_m, args.resolution_m, args.edges_per_cell, args.out,
        center=center, feature_name=args.feature)
    record.graph_path = Path(graph_path.name)
    write_city_list(Path(args.out) / "cities.csv", [record])
    print(graph_path)
    print(raster_path)
    print(Path(args.out) / "cities.csv")
    return EXIT_OK


def cmd_verify(args):
    t0 = time.perf_counter()
    results = verify.sweep(args.max_s, rasterize_fn=rasterize)
    failures = [r for r in results if not r.ok]
    for r in failures:
        _err(f"FAIL s={r.s} A={r.a_m} r={r.r_m}: {r.detail}")
    elapsed = time.perf_counter() - t0
    verdict = "pass" if not failures else "FAIL"
    print(f"verify max_s={args.max_s}: {len(results) - len(failures)}/{len(results)} cases {verdict} "
          f"({elapsed:.3f} s)")
    return EXIT_OK if not failures else EXIT_VERIFY


COMMANDS = {
    "rasterize": cmd_rasterize,
    "fuse": cmd_fuse,
    "batch": cmd_batch,
    "gen": cmd_gen,
    "verify": cmd_verify,
}


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except CountMismatch as exc:
        _err(f"error: {exc}")
        return EXIT_COUNT
    except ConservationViolation as exc:
        _err(f"error: {exc}")
        return EXIT_CONSERVATION
    except RasterCoverageError as exc:
        _err(f"error: {exc}")
        return EXIT_COVERAGE
    except (GridFuseError, OSError, ValueError) as exc:
        _err(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
