"""Command-line pipeline: synth, assess, match, validate, pr-plot.

INVOCATION EXAMPLES

    damagekit synth scene.json out/
    damagekit assess out/footprints.geojson out/raster.asc --out assessed.geojson
    damagekit match out/truth.csv out/footprints.geojson --out matched.csv
    damagekit validate assessed.geojson matched.csv out/truth.csv \
        --scheme major_plus --report report.json --curve curve.csv
    damagekit pr-plot curve.csv --out curve.svg

Data goes to stdout when no output path is given; diagnostics go to stderr.

Exit codes: 0 ok, 2 parse failure, 3 duplicate id, 4 unknown damage
category, 5 missing estimate for a matched footprint, 6 no positive
samples, 7 swath misses every building.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import formats, plot
from .errors import (DuplicateFootprintId, DuplicatePointId, EmptySampleSet,
                     MissingEstimate, NoPositiveSamples, ParseError,
                     SwathOutsideScene, UnknownCategory)
from .geom import GeoPoint
from .raster import parse_ascii_grid, write_ascii_grid
from .synth import SceneSpec, generate
from .truth import join_samples, match_points, parse_scheme
from .zonal import assess_all


def _emit(text: str, out_path) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        formats.write_text(out_path, text)


def _load_scene_spec(path) -> SceneSpec:
    doc = formats.parse_json(formats.read_text(path), path)
    if not isinstance(doc, dict):
        raise ParseError("scene spec must be a JSON object", source=path)
    known = {"seed", "grid_cols", "grid_rows", "building_size_m", "spacing_m",
             "origin", "swath_start", "swath_end", "swath_width_m",
             "cellsize_m", "pixel_noise_rate", "point_jitter_sigma_m",
             "point_drop_rate"}
    unknown = set(doc) - known
    if unknown:
        raise ParseError(f"unknown scene spec keys: {sorted(unknown)}",
                         source=path)
    kwargs = dict(doc)
    try:
        for key in ("origin", "swath_start", "swath_end"):
            if key in kwargs:
                lon, lat = kwargs[key]
                kwargs[key] = GeoPoint(float(lon), float(lat))
        return SceneSpec(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad scene spec: {exc}", source=path) from exc


def cmd_synth(args) -> int:
    spec = _load_scene_spec(args.spec)
    scene = generate(spec)
    os.makedirs(args.out_dir, exist_ok=True)
    join = os.path.join
    formats.write_text(join(args.out_dir, "footprints.geojson"),
                       formats.write_footprints_geojson(list(scene.footprints)))
    formats.write_text(join(args.out_dir, "raster.asc"),
                       write_ascii_grid(scene.raster))
    formats.write_text(join(args.out_dir, "truth.csv"),
                       formats.write_truth_csv(list(scene.truth)))
    formats.write_text(join(args.out_dir, "oracle.csv"),
                       formats.write_oracle_csv(scene.oracle_categories))
    print(f"scene written to {args.out_dir}: {len(scene.footprints)} footprints, "
          f"{scene.raster.ncols}x{scene.raster.nrows} raster, "
          f"{len(scene.truth)} truth points", file=sys.stderr)
    return 0


def cmd_assess(args) -> int:
    footprints, properties = formats.parse_footprints_with_properties(
        formats.read_text(args.footprints), source=args.footprints)
    raster = parse_ascii_grid(formats.read_text(args.raster),
                              source=args.raster)
    estimates = assess_all(raster, footprints)
    _emit(formats.write_assessed_geojson(footprints, estimates, properties),
          args.out)
    return 0


def cmd_match(args) -> int:
    points = formats.load_truth(args.points)
    footprints = formats.load_footprints(args.footprints)
    matched, unmatched = match_points(points, footprints,
                                      radius_m=args.radius_m)
    _emit(formats.write_matches_csv([p.id for p in points],
                                    matched, unmatched), args.out)
    print(f"matched {len(matched)} of {len(points)} points "
          f"({len(unmatched)} unmatched)", file=sys.stderr)
    return 0


def cmd_validate(args) -> int:
    from .metrics import validate

    scheme = parse_scheme(args.scheme)
    _, estimates = formats.parse_assessed_geojson(
        formats.read_text(args.assessed), source=args.assessed)
    matched, _ = formats.parse_matches_csv(formats.read_text(args.matched),
                                           source=args.matched)
    points = formats.load_truth(args.points)
    samples = join_samples(matched, estimates, points, scheme)
    report = validate(samples, scheme.id)
    _emit(formats.write_report_json(report), args.report)
    if args.curve is not None:
        formats.write_text(args.curve,
                           formats.write_curve_csv(list(report.curve.points)))
    return 0


def cmd_pr_plot(args) -> int:
    points = formats.parse_curve_csv(formats.read_text(args.curve),
                                     source=args.curve)
    _emit(plot.render_pr_curve_svg(points), args.out)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="damagekit",
        description="Building damage assessment pipeline tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic scene")
    p.add_argument("spec", help="scene spec JSON file")
    p.add_argument("out_dir", help="output directory")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("assess", help="estimate per-building damage")
    p.add_argument("footprints", help="footprints GeoJSON")
    p.add_argument("raster", help="classification raster (.asc)")
    p.add_argument("--out", default=None, help="output GeoJSON (default stdout)")
    p.set_defaults(func=cmd_assess)

    p = sub.add_parser("match", help="match truth points to footprints")
    p.add_argument("points", help="ground truth CSV")
    p.add_argument("footprints", help="footprints GeoJSON")
    p.add_argument("--radius-m", type=float, default=20.0,
                   help="match radius in metres (default 20)")
    p.add_argument("--out", default=None, help="output CSV (default stdout)")
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("validate", help="compute validation metrics")
    p.add_argument("assessed", help="assessed footprints GeoJSON")
    p.add_argument("matched", help="matches CSV")
    p.add_argument("points", help="ground truth CSV")
    p.add_argument("--scheme", default="major_plus",
                   help="major_plus, destroyed_only, or comma-separated "
                        "category labels (default major_plus)")
    p.add_argument("--report", default=None,
                   help="report JSON path (default stdout)")
    p.add_argument("--curve", default=None,
                   help="also write the PR curve CSV here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("pr-plot", help="render a PR curve as SVG")
    p.add_argument("curve", help="curve CSV from validate")
    p.add_argument("--out", default=None, help="output SVG (default stdout)")
    p.set_defaults(func=cmd_pr_plot)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownCategory as exc:
        return _fail(exc, 4)
    except ParseError as exc:
        return _fail(exc, 2)
    except (DuplicateFootprintId, DuplicatePointId) as exc:
        return _fail(exc, 3)
    except MissingEstimate as exc:
        return _fail(exc, 5)
    except (NoPositiveSamples, EmptySampleSet) as exc:
        return _fail(exc, 6)
    except SwathOutsideScene as exc:
        return _fail(exc, 7)
    except ValueError as exc:
        return _fail(exc, 2)


def _fail(exc, code: int) -> int:
    print(f"damagekit: error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
