"""File formats: GeoJSON footprints, CSV tables, and the report JSON.

Writers emit canonical bytes (LF endings, fixed key order, repr floats) so
identical inputs always serialise identically. Readers raise ParseError with
file and line information where it is known. CSV files here are plain
comma-separated with no quoting; ids are restricted to [A-Za-z0-9_-].
"""

from __future__ import annotations

import json
from decimal import ROUND_HALF_UP, Decimal

from .errors import ParseError
from .geom import Footprint, GeoPoint, Ring
from .metrics import PRPoint, ValidationReport
from .truth import FemaCategory, GroundTruthPoint, PointMatch
from .zonal import DamageEstimate

TRUTH_HEADER = "point_id,lon,lat,category"
MATCH_HEADER = "point_id,footprint_id,distance_m"
CURVE_HEADER = "theta,precision,recall"
ORACLE_HEADER = "footprint_id,category"


def read_text(path) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ParseError(str(exc), source=path) from exc


def write_text(path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)


# ---------------------------------------------------------------- GeoJSON

def parse_json(text: str, source):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", source=source,
                         line=exc.lineno) from exc


def _feature_to_footprint(feature, index, source) -> Footprint:
    if not isinstance(feature, dict) or feature.get("type") != "Feature":
        raise ParseError(f"feature {index} is not a GeoJSON Feature",
                         source=source)
    properties = feature.get("properties") or {}
    fid = feature.get("id", properties.get("id"))
    if fid is None or fid == "":
        raise ParseError(f"feature {index} has no id", source=source)
    fid = str(fid)
    geometry = feature.get("geometry") or {}
    if geometry.get("type") != "Polygon":
        raise ParseError(f"feature {fid!r} geometry must be a Polygon",
                         source=source)
    rings = geometry.get("coordinates")
    if not isinstance(rings, list) or not rings:
        raise ParseError(f"feature {fid!r} has no polygon rings", source=source)
    built = []
    for ring in rings:
        try:
            vertices = tuple(GeoPoint(float(lon), float(lat))
                             for lon, lat in ring)
            built.append(Ring(vertices))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"feature {fid!r}: {exc}", source=source) from exc
    try:
        return Footprint(fid, built[0], tuple(built[1:]))
    except ValueError as exc:
        raise ParseError(f"feature {fid!r}: {exc}", source=source) from exc


def parse_footprints_with_properties(text: str, source="<geojson>"):
    """Parse a FeatureCollection into ([Footprint], [input properties])."""
    doc = parse_json(text, source)
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("expected a GeoJSON FeatureCollection", source=source)
    features = doc.get("features")
    if not isinstance(features, list):
        raise ParseError("FeatureCollection has no feature list", source=source)
    footprints = [_feature_to_footprint(f, i, source)
                  for i, f in enumerate(features)]
    properties = [dict(f.get("properties") or {}) for f in features]
    return footprints, properties


def parse_footprints_geojson(text: str, source="<geojson>") -> list[Footprint]:
    return parse_footprints_with_properties(text, source)[0]


def load_footprints(path) -> list[Footprint]:
    return parse_footprints_geojson(read_text(path), source=path)


def _ring_coordinates(ring: Ring):
    return [[v.lon, v.lat] for v in ring.vertices]


def _footprint_geometry(fp: Footprint):
    return {
        "type": "Polygon",
        "coordinates": [_ring_coordinates(fp.exterior)]
                       + [_ring_coordinates(h) for h in fp.holes],
    }


def write_footprints_geojson(footprints: list[Footprint]) -> str:
    doc = {
        "type": "FeatureCollection",
        "features": [
            {"type": "Feature", "id": fp.id,
             "geometry": _footprint_geometry(fp), "properties": {}}
            for fp in footprints
        ],
    }
    return json.dumps(doc, separators=(",", ":")) + "\n"


def round_half_up(value: float, places: int = 2) -> float:
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(str(value)).quantize(quantum, rounding=ROUND_HALF_UP))


def write_assessed_geojson(footprints: list[Footprint],
                           estimates: list[DamageEstimate],
                           input_properties: list[dict] | None = None) -> str:
    """Footprints plus their estimates: damage_pct is rounded half-up to
    two decimals; the integer counts keep full fidelity."""
    features = []
    for idx, (fp, est) in enumerate(zip(footprints, estimates)):
        properties = dict(input_properties[idx]) if input_properties else {}
        properties.update({
            "damage_pct": round_half_up(est.damage_pct),
            "n_inside": est.n_inside,
            "n_damaged": est.n_damaged,
            "supersampled": est.supersampled,
            "no_coverage": est.no_coverage,
        })
        features.append({"type": "Feature", "id": fp.id,
                         "geometry": _footprint_geometry(fp),
                         "properties": properties})
    doc = {"type": "FeatureCollection", "features": features}
    return json.dumps(doc, separators=(",", ":")) + "\n"


def parse_assessed_geojson(text: str, source="<geojson>"):
    """Read an assessed collection back as (footprints, estimates).

    The working damage percentage is rebuilt from the stored counts, so the
    two-decimal display rounding of damage_pct loses nothing downstream.
    """
    doc = parse_json(text, source)
    if not isinstance(doc, dict) or doc.get("type") != "FeatureCollection":
        raise ParseError("expected a GeoJSON FeatureCollection", source=source)
    footprints = []
    estimates = []
    for index, feature in enumerate(doc.get("features", [])):
        fp = _feature_to_footprint(feature, index, source)
        properties = feature.get("properties") or {}
        try:
            n_inside = int(properties["n_inside"])
            n_damaged = int(properties["n_damaged"])
            supersampled = bool(properties["supersampled"])
            no_coverage = bool(properties["no_coverage"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"feature {fp.id!r} lacks assessment properties",
                             source=source) from exc
        pct = 100.0 * n_damaged / n_inside if n_inside > 0 else 0.0
        footprints.append(fp)
        estimates.append(DamageEstimate(fp.id, pct, n_inside, n_damaged,
                                        supersampled=supersampled,
                                        no_coverage=no_coverage))
    return footprints, estimates


# -------------------------------------------------------------------- CSV

def _rows(text: str, source, header: str):
    lines = text.splitlines()
    if not lines or lines[0].strip() != header:
        raise ParseError(f"expected header {header!r}", source=source, line=1)
    for number, line in enumerate(lines[1:], start=2):
        if line.strip():
            yield number, line


def write_truth_csv(points: list[GroundTruthPoint]) -> str:
    out = [TRUTH_HEADER]
    for p in points:
        out.append(f"{p.id},{p.location.lon!r},{p.location.lat!r},"
                   f"{p.category.label}")
    return "\n".join(out) + "\n"


def parse_truth_csv(text: str, source="<csv>") -> list[GroundTruthPoint]:
    points = []
    for number, line in _rows(text, source, TRUTH_HEADER):
        fields = line.split(",")
        if len(fields) != 4:
            raise ParseError(f"expected 4 fields, got {len(fields)}",
                             source=source, line=number)
        pid, lon_text, lat_text, label = fields
        try:
            location = GeoPoint(float(lon_text), float(lat_text))
        except ValueError as exc:
            raise ParseError(str(exc), source=source, line=number) from exc
        category = FemaCategory.from_label(label)
        try:
            points.append(GroundTruthPoint(pid, location, category))
        except ValueError as exc:
            raise ParseError(str(exc), source=source, line=number) from exc
    return points


def load_truth(path) -> list[GroundTruthPoint]:
    return parse_truth_csv(read_text(path), source=path)


def write_matches_csv(point_ids: list[str],
                      matched: list[PointMatch],
                      unmatched: list[str]) -> str:
    """One row per input point in input order; unmatched rows leave the
    footprint and distance fields empty."""
    by_point = {m.point_id: m for m in matched}
    unmatched_set = set(unmatched)
    out = [MATCH_HEADER]
    for pid in point_ids:
        m = by_point.get(pid)
        if m is not None:
            out.append(f"{pid},{m.footprint_id},{m.distance_m!r}")
        elif pid in unmatched_set:
            out.append(f"{pid},,")
        else:
            raise ValueError(f"point {pid!r} neither matched nor unmatched")
    return "\n".join(out) + "\n"


def parse_matches_csv(text: str, source="<csv>"):
    matched = []
    unmatched = []
    for number, line in _rows(text, source, MATCH_HEADER):
        fields = line.split(",")
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}",
                             source=source, line=number)
        pid, fid, distance_text = fields
        if fid == "" and distance_text == "":
            unmatched.append(pid)
            continue
        try:
            matched.append(PointMatch(pid, fid, float(distance_text)))
        except ValueError as exc:
            raise ParseError(f"bad distance {distance_text!r}",
                             source=source, line=number) from exc
    return matched, unmatched


def write_oracle_csv(oracle_categories: dict[str, FemaCategory]) -> str:
    out = [ORACLE_HEADER]
    for fid, category in oracle_categories.items():
        out.append(f"{fid},{category.label}")
    return "\n".join(out) + "\n"


def parse_oracle_csv(text: str, source="<csv>") -> dict[str, FemaCategory]:
    oracle = {}
    for number, line in _rows(text, source, ORACLE_HEADER):
        fields = line.split(",")
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}",
                             source=source, line=number)
        oracle[fields[0]] = FemaCategory.from_label(fields[1])
    return oracle


def write_curve_csv(points: list[PRPoint]) -> str:
    out = [CURVE_HEADER]
    for p in points:
        out.append(f"{p.theta!r},{p.precision!r},{p.recall!r}")
    return "\n".join(out) + "\n"


def parse_curve_csv(text: str, source="<csv>") -> list[PRPoint]:
    points = []
    for number, line in _rows(text, source, CURVE_HEADER):
        fields = line.split(",")
        if len(fields) != 3:
            raise ParseError(f"expected 3 fields, got {len(fields)}",
                             source=source, line=number)
        try:
            points.append(PRPoint(theta=float(fields[0]),
                                  precision=float(fields[1]),
                                  recall=float(fields[2])))
        except ValueError as exc:
            raise ParseError("bad curve row", source=source,
                             line=number) from exc
    if not points:
        raise ParseError("curve has no data rows", source=source, line=1)
    return points


# ----------------------------------------------------------------- report

def write_report_json(report: ValidationReport) -> str:
    """Report with full-precision numbers (repr keeps 17 significant digits)."""
    doc = {
        "n_samples": report.n_samples,
        "n_positive": report.n_positive,
        "scheme": report.scheme,
        "precision0": report.precision0,
        "recall0": report.recall0,
        "average_precision": report.average_precision,
    }
    return json.dumps(doc, indent=2) + "\n"
