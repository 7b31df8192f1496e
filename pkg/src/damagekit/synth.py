"""Deterministic synthetic tornado scenes for end-to-end testing.

A scene is a lattice of square buildings crossed by a damage swath. Distance
from a building's centroid to the swath centreline sets its FEMA category in
four bands (half swath width: destroyed, one width: major, 1.5: minor, 2:
affected). The rendered raster marks pixels of major-plus buildings as class
2 and other building pixels as class 1, then optionally flips pixels to a
random class. Ground-truth points sit at building centroids with optional
Gaussian jitter and random drops.

All randomness comes from a SplitMix64 stream seeded by the scene spec, with
a fixed draw budget per entity (2 per building, 2 per noisy pixel, 3 per
point) so output is reproducible bit for bit. When pixel_noise_rate is zero
the raster noise stage is skipped and consumes no draws.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SwathOutsideScene
from .geom import EARTH_RADIUS_M, Footprint, GeoPoint, Ring, contains_many
from .raster import (CLASS_BACKGROUND, CLASS_BUILDING, CLASS_DAMAGED,
                     DEFAULT_NODATA, ClassRaster)
from .truth import FemaCategory, GroundTruthPoint

_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_MIX_1 = 0xBF58476D1CE4E5B9
_MIX_2 = 0x94D049BB133111EB
_MASK64 = (1 << 64) - 1
_TWO_64 = 2.0 ** 64


def splitmix64_next(state: int) -> tuple[int, int]:
    """One SplitMix64 step: returns (new_state, output)."""
    state = (state + _GOLDEN_GAMMA) & _MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX_1) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_2) & _MASK64
    return state, z ^ (z >> 31)


class SplitMix64:
    """SplitMix64 stream with scalar and bulk draws that stay in lockstep."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state, output = splitmix64_next(self.state)
        return output

    def next_unit(self) -> float:
        """Uniform draw in (0, 1): (output + 0.5) / 2**64."""
        return (self.next_u64() + 0.5) / _TWO_64

    def unit_array(self, n: int) -> np.ndarray:
        """n unit draws at once; identical values to n next_unit() calls.

        SplitMix64 state advances by a constant per step, so the k-th draw
        is mix(state + k*gamma) and the whole block vectorises.
        """
        steps = np.arange(1, n + 1, dtype=np.uint64)
        z = np.uint64(self.state) + steps * np.uint64(_GOLDEN_GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX_1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX_2)
        z = z ^ (z >> np.uint64(31))
        self.state = (self.state + n * _GOLDEN_GAMMA) & _MASK64
        return (z.astype(np.float64) + 0.5) / _TWO_64


@dataclass(frozen=True)
class SceneSpec:
    """Parameters of a synthetic scene. Same spec, same bytes out."""

    seed: int = 42
    grid_cols: int = 30
    grid_rows: int = 30
    building_size_m: float = 10.0
    spacing_m: float = 20.0
    origin: GeoPoint = GeoPoint(-90.88, 32.90)
    swath_start: GeoPoint | None = None
    swath_end: GeoPoint | None = None
    swath_width_m: float | None = None
    cellsize_m: float = 1.0
    pixel_noise_rate: float = 0.0
    point_jitter_sigma_m: float = 0.0
    point_drop_rate: float = 0.0

    def __post_init__(self):
        if self.grid_cols < 1 or self.grid_rows < 1:
            raise ValueError("grid dimensions must be positive")
        if self.building_size_m <= 0 or self.spacing_m <= 0:
            raise ValueError("building size and spacing must be positive")
        if self.cellsize_m <= 0:
            raise ValueError("cellsize_m must be positive")
        if not 0.0 <= self.pixel_noise_rate <= 1.0:
            raise ValueError("pixel_noise_rate must be within [0, 1]")
        if not 0.0 <= self.point_drop_rate <= 1.0:
            raise ValueError("point_drop_rate must be within [0, 1]")
        if self.point_jitter_sigma_m < 0:
            raise ValueError("point_jitter_sigma_m must be non-negative")
        pitch = self.building_size_m + self.spacing_m
        # Default swath: along the middle building row, clear past both ends,
        # narrow enough that only that row falls in the destroyed band.
        if self.swath_width_m is None:
            object.__setattr__(self, "swath_width_m", 0.8 * pitch)
        if self.swath_width_m <= 0:
            raise ValueError("swath_width_m must be positive")
        if self.swath_start is None or self.swath_end is None:
            mid_y = (self.grid_rows // 2 + 0.5) * pitch
            start = self._to_geo(-2.0 * pitch, mid_y)
            end = self._to_geo((self.grid_cols + 2.0) * pitch, mid_y)
            object.__setattr__(self, "swath_start", start)
            object.__setattr__(self, "swath_end", end)

    # Metres east/north of the origin <-> degrees, at the origin's latitude.
    @property
    def m_per_deg_lat(self) -> float:
        return EARTH_RADIUS_M * math.pi / 180.0

    @property
    def m_per_deg_lon(self) -> float:
        return self.m_per_deg_lat * math.cos(self.origin.lat * math.pi / 180.0)

    def _to_geo(self, x_m: float, y_m: float) -> GeoPoint:
        return GeoPoint(self.origin.lon + x_m / self.m_per_deg_lon,
                        self.origin.lat + y_m / self.m_per_deg_lat)

    def _to_metric(self, p: GeoPoint) -> tuple[float, float]:
        return ((p.lon - self.origin.lon) * self.m_per_deg_lon,
                (p.lat - self.origin.lat) * self.m_per_deg_lat)


@dataclass(frozen=True)
class SynthScene:
    footprints: tuple[Footprint, ...]
    raster: ClassRaster
    truth: tuple[GroundTruthPoint, ...]
    oracle_categories: dict[str, FemaCategory]


def _distance_to_segment_m(spec: SceneSpec, p: GeoPoint) -> float:
    px, py = spec._to_metric(p)
    x1, y1 = spec._to_metric(spec.swath_start)
    x2, y2 = spec._to_metric(spec.swath_end)
    dx = x2 - x1
    dy = y2 - y1
    denom = dx * dx + dy * dy
    if denom == 0.0:
        return math.hypot(px - x1, py - y1)
    t = ((px - x1) * dx + (py - y1) * dy) / denom
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(px - (x1 + t * dx), py - (y1 + t * dy))


def category_from_swath(centroid: GeoPoint, spec: SceneSpec) -> FemaCategory:
    """Damage category from distance between centroid and swath centreline."""
    d = _distance_to_segment_m(spec, centroid)
    w = spec.swath_width_m
    if d <= 0.5 * w:
        return FemaCategory.DESTROYED
    if d <= w:
        return FemaCategory.MAJOR_DAMAGE
    if d <= 1.5 * w:
        return FemaCategory.MINOR_DAMAGE
    if d <= 2.0 * w:
        return FemaCategory.AFFECTED
    return FemaCategory.NO_VISIBLE_DAMAGE


def _window(raster_meta, fp):
    """Index window of pixels near a footprint (mirrors zonal windowing)."""
    ncols, nrows, xll, yll, cs = raster_meta
    b = fp.bounds
    col_lo = max(int(math.floor((b.min_lon - xll) / cs)) - 1, 0)
    col_hi = min(int(math.floor((b.max_lon - xll) / cs)) + 1, ncols - 1)
    row_lo = max(int(math.floor(nrows - (b.max_lat - yll) / cs)) - 1, 0)
    row_hi = min(int(math.floor(nrows - (b.min_lat - yll) / cs)) + 1, nrows - 1)
    return col_lo, col_hi, row_lo, row_hi


def generate(spec: SceneSpec) -> SynthScene:
    """Build the full synthetic scene for a spec.

    PRNG draw order: per building jitter x then y in row-major lattice
    order; raster noise row-major (flip decision then replacement class,
    skipped entirely at rate 0); per point in footprint-id order a drop
    decision then one Box-Muller pair for the x/y jitter.
    """
    rng = SplitMix64(spec.seed)
    pitch = spec.building_size_m + spec.spacing_m
    half = spec.building_size_m / 2.0
    jitter_range = spec.spacing_m / 8.0

    footprints = []
    centroids = []
    for i in range(spec.grid_rows):
        for j in range(spec.grid_cols):
            jx = (rng.next_unit() * 2.0 - 1.0) * jitter_range
            jy = (rng.next_unit() * 2.0 - 1.0) * jitter_range
            cx = (j + 0.5) * pitch + jx
            cy = (i + 0.5) * pitch + jy
            corners = [
                spec._to_geo(cx - half, cy - half),
                spec._to_geo(cx + half, cy - half),
                spec._to_geo(cx + half, cy + half),
                spec._to_geo(cx - half, cy + half),
            ]
            ring = Ring(tuple(corners + [corners[0]]))
            fid = f"b{i * spec.grid_cols + j:06d}"
            footprints.append(Footprint(fid, ring))
            centroids.append(spec._to_geo(cx, cy))

    oracle = {}
    for fp, centroid in zip(footprints, centroids):
        oracle[fp.id] = category_from_swath(centroid, spec)
    if all(c == FemaCategory.NO_VISIBLE_DAMAGE for c in oracle.values()):
        raise SwathOutsideScene("no building lies within any damage band")

    # Raster frame: two cells of margin around every footprint vertex.
    cs_deg = spec.cellsize_m / spec.m_per_deg_lat
    all_lons = [v.lon for fp in footprints for v in fp.exterior.vertices]
    all_lats = [v.lat for fp in footprints for v in fp.exterior.vertices]
    xll = min(all_lons) - 2.0 * cs_deg
    yll = min(all_lats) - 2.0 * cs_deg
    ncols = int(math.ceil((max(all_lons) + 2.0 * cs_deg - xll) / cs_deg))
    nrows = int(math.ceil((max(all_lats) + 2.0 * cs_deg - yll) / cs_deg))

    cells = np.full((nrows, ncols), CLASS_BACKGROUND, dtype=np.int32)
    meta = (ncols, nrows, xll, yll, cs_deg)
    for fp in footprints:
        col_lo, col_hi, row_lo, row_hi = _window(meta, fp)
        if col_lo > col_hi or row_lo > row_hi:
            continue
        cols = np.arange(col_lo, col_hi + 1, dtype=np.float64)
        rows = np.arange(row_lo, row_hi + 1, dtype=np.float64)
        lons = xll + (cols + 0.5) * cs_deg
        lats = yll + (nrows - rows - 0.5) * cs_deg
        inside = contains_many(fp, lons[np.newaxis, :], lats[:, np.newaxis])
        if oracle[fp.id] in (FemaCategory.MAJOR_DAMAGE, FemaCategory.DESTROYED):
            value = CLASS_DAMAGED
        else:
            value = CLASS_BUILDING
        window_cells = cells[row_lo:row_hi + 1, col_lo:col_hi + 1]
        window_cells[inside] = value

    if spec.pixel_noise_rate > 0.0:
        draws = rng.unit_array(2 * nrows * ncols)
        flip = draws[0::2] < spec.pixel_noise_rate
        replacement = np.floor(draws[1::2] * 3.0).astype(np.int32)
        flat = cells.ravel()
        flat[flip] = replacement[flip]

    raster = ClassRaster(ncols=ncols, nrows=nrows, xll=xll, yll=yll,
                         cellsize=cs_deg, nodata=DEFAULT_NODATA, cells=cells)

    sigma = spec.point_jitter_sigma_m
    truth = []
    for k, (fp, centroid) in enumerate(zip(footprints, centroids)):
        drop_draw = rng.next_unit()
        u1 = rng.next_unit()
        u2 = rng.next_unit()
        if drop_draw < spec.point_drop_rate:
            continue
        radius = math.sqrt(-2.0 * math.log(u1))
        dx = sigma * (radius * math.cos(2.0 * math.pi * u2))
        dy = sigma * (radius * math.sin(2.0 * math.pi * u2))
        location = GeoPoint(centroid.lon + dx / spec.m_per_deg_lon,
                            centroid.lat + dy / spec.m_per_deg_lat)
        truth.append(GroundTruthPoint(f"p{k:06d}", location, oracle[fp.id]))

    return SynthScene(footprints=tuple(footprints), raster=raster,
                      truth=tuple(truth), oracle_categories=oracle)
