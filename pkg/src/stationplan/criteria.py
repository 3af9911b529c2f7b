"""Evaluation of candidate station placements against the five siting criteria.

Response criteria assume nearest-station dispatch over the union of existing
and candidate stations (the new-stations-only alternative is a switch).
Service overlap compares k-minute reachable cell sets between the candidate
stations and the existing layout.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from .core import (
    KM_PER_DEG_LAT,
    GeoPoint,
    GridSpec,
    FireRecord,
    Station,
    cell_center,
    cell_of,
    haversine_km_vec,
)
from .mobility import TravelParams, travel_distance_km, travel_time, travel_time_to_cells


class Criterion(str, Enum):
    ART = "ART"  # average response time, minutes
    MRT = "MRT"  # maximum response time, minutes
    ATD = "ATD"  # average travel distance, kilometers
    MTD = "MTD"  # maximum travel distance, kilometers
    SO = "SO"    # service overlap with the existing layout, fraction


@dataclass(frozen=True)
class TargetArea:
    """Decision space for new stations: a simple polygon or a set of grid cells."""

    polygon: tuple[GeoPoint, ...] | None = None
    cells: frozenset[tuple[int, int]] | None = None
    grid: GridSpec | None = None

    @classmethod
    def from_polygon(cls, points: Sequence[GeoPoint]) -> "TargetArea":
        ring = list(points)
        if len(ring) >= 2 and ring[0] == ring[-1]:
            ring = ring[:-1]
        if len(ring) < 3:
            raise ValueError("polygon needs at least 3 distinct vertices")
        if len({(p.lat, p.lng) for p in ring}) != len(ring):
            raise ValueError("polygon has repeated vertices")
        _check_simple(ring)
        return cls(polygon=tuple(ring))

    @classmethod
    def from_cells(cls, cells: Iterable[tuple[int, int]], grid: GridSpec) -> "TargetArea":
        cellset = frozenset((int(i), int(j)) for i, j in cells)
        if not cellset:
            raise ValueError("cell set must be non-empty")
        for i, j in cellset:
            if not (0 <= i < grid.rows and 0 <= j < grid.cols):
                raise ValueError(f"cell ({i}, {j}) outside {grid.rows}x{grid.cols} grid")
        return cls(cells=cellset, grid=grid)

    def contains(self, p: GeoPoint) -> bool:
        if self.polygon is not None:
            return _point_in_ring(p, self.polygon)
        cell = cell_of(p, self.grid)
        return cell is not None and cell in self.cells

    def bbox(self) -> tuple[float, float, float, float]:
        """(lat_min, lat_max, lng_min, lng_max)."""
        if self.polygon is not None:
            lats = [p.lat for p in self.polygon]
            lngs = [p.lng for p in self.polygon]
            return min(lats), max(lats), min(lngs), max(lngs)
        centers = [cell_center(i, j, self.grid) for i, j in sorted(self.cells)]
        half_lat = 0.5 * self.grid.cell_size_km / KM_PER_DEG_LAT
        half_lng = 0.5 * self.grid.cell_size_km / self.grid.km_per_deg_lng
        return (
            min(c.lat for c in centers) - half_lat,
            max(c.lat for c in centers) + half_lat,
            min(c.lng for c in centers) - half_lng,
            max(c.lng for c in centers) + half_lng,
        )

    def interior_point(self) -> GeoPoint:
        """A deterministic point inside the area, used as the repair anchor."""
        if self.polygon is not None:
            candidate = _ring_centroid(self.polygon)
        else:
            centers = [cell_center(i, j, self.grid) for i, j in sorted(self.cells)]
            candidate = GeoPoint(
                lat=sum(c.lat for c in centers) / len(centers),
                lng=sum(c.lng for c in centers) / len(centers),
            )
        if self.contains(candidate):
            return candidate
        if self.cells is not None:
            i, j = min(self.cells)
            return cell_center(i, j, self.grid)
        rng = np.random.default_rng(1)  # deterministic fallback for odd polygons
        lat_min, lat_max, lng_min, lng_max = self.bbox()
        for _ in range(100_000):
            p = GeoPoint(
                lat=rng.uniform(lat_min, lat_max), lng=rng.uniform(lng_min, lng_max)
            )
            if self.contains(p):
                return p
        raise ValueError("could not find an interior point of the target area")

    def sample_point(self, rng: np.random.Generator, max_tries: int = 1000) -> GeoPoint:
        lat_min, lat_max, lng_min, lng_max = self.bbox()
        for _ in range(max_tries):
            p = GeoPoint(
                lat=rng.uniform(lat_min, lat_max), lng=rng.uniform(lng_min, lng_max)
            )
            if self.contains(p):
                return p
        return self.interior_point()


def _ring_centroid(ring: tuple[GeoPoint, ...]) -> GeoPoint:
    # Shoelace centroid in the (lng, lat) plane; falls back to the vertex mean
    # for degenerate (near zero area) rings.
    area2 = 0.0
    cx = 0.0
    cy = 0.0
    n = len(ring)
    for idx in range(n):
        x1, y1 = ring[idx].lng, ring[idx].lat
        x2, y2 = ring[(idx + 1) % n].lng, ring[(idx + 1) % n].lat
        cross = x1 * y2 - x2 * y1
        area2 += cross
        cx += (x1 + x2) * cross
        cy += (y1 + y2) * cross
    if abs(area2) < 1e-15:
        return GeoPoint(
            lat=sum(p.lat for p in ring) / n, lng=sum(p.lng for p in ring) / n
        )
    return GeoPoint(lat=cy / (3.0 * area2), lng=cx / (3.0 * area2))


def _point_in_ring(p: GeoPoint, ring: tuple[GeoPoint, ...]) -> bool:
    inside = False
    n = len(ring)
    for idx in range(n):
        a, b = ring[idx], ring[(idx + 1) % n]
        if (a.lat > p.lat) != (b.lat > p.lat):
            lng_cross = a.lng + (p.lat - a.lat) * (b.lng - a.lng) / (b.lat - a.lat)
            if lng_cross > p.lng:
                inside = not inside
    return inside


def _check_simple(ring: list[GeoPoint]) -> None:
    n = len(ring)
    segs = [((ring[i].lng, ring[i].lat), (ring[(i + 1) % n].lng, ring[(i + 1) % n].lat)) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint with a neighbor is fine
            if _segments_cross(segs[i], segs[j]):
                raise ValueError("polygon must be simple (no self-intersections)")


def _segments_cross(s1, s2) -> bool:
    (ax, ay), (bx, by) = s1
    (cx, cy), (dx, dy) = s2

    def orient(px, py, qx, qy, rx, ry) -> float:
        return (qx - px) * (ry - py) - (qy - py) * (rx - px)

    d1 = orient(ax, ay, bx, by, cx, cy)
    d2 = orient(ax, ay, bx, by, dx, dy)
    d3 = orient(cx, cy, dx, dy, ax, ay)
    d4 = orient(cx, cy, dx, dy, bx, by)
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def responder(
    fire: GeoPoint, stations: Sequence[Station], p: TravelParams
) -> tuple[Station, float, float]:
    """Nearest responder with its travel time (min) and detoured distance (km).

    Exact travel-time ties break on lexicographic station id.
    """
    if not stations:
        raise ValueError("responder needs at least one station")
    best = min(stations, key=lambda s: (travel_time(s.location, fire, p), s.id))
    return best, travel_time(best.location, fire, p), travel_distance_km(best.location, fire, p)


class EvaluationContext:
    """Precomputed arrays for repeated candidate evaluation over one problem.

    Existing-station travel times to every fire and the existing k-minute
    reachable mask are computed once; each candidate evaluation is then a few
    vectorized operations, which is what makes the population-parallel
    optimizer cheap.
    """

    def __init__(
        self,
        fires: Sequence[FireRecord],
        existing: Sequence[Station],
        criteria: Sequence[Criterion],
        grid: GridSpec,
        params: TravelParams,
        k: float,
        area: TargetArea | None = None,
        new_stations_only: bool = False,
    ):
        if area is not None:
            fires = [f for f in fires if area.contains(f.location)]
        if not fires:
            raise ValueError("no fires in the target area")
        if not criteria:
            raise ValueError("select at least one criterion")
        self.criteria = tuple(Criterion(c) for c in criteria)
        if len(set(self.criteria)) != len(self.criteria):
            raise ValueError("criteria must be unique")
        self.fires = list(fires)
        self.existing = list(existing)
        self.grid = grid
        self.params = params
        self.k = k
        self.area = area
        self.new_stations_only = new_stations_only

        self.fire_lat = np.array([f.location.lat for f in self.fires])
        self.fire_lng = np.array([f.location.lng for f in self.fires])

        self._base_km = None
        if self.existing and not new_stations_only:
            per_station = np.stack(
                [
                    haversine_km_vec(s.location.lat, s.location.lng, self.fire_lat, self.fire_lng)
                    for s in self.existing
                ]
            )
            self._base_km = per_station.min(axis=0)

        self._existing_mask = None
        if Criterion.SO in self.criteria and self.existing:
            best = np.full((grid.rows, grid.cols), np.inf)
            for s in self.existing:
                np.minimum(best, travel_time_to_cells(s.location, grid, params), out=best)
            self._existing_mask = best <= k

    def evaluate_points(self, points: np.ndarray) -> np.ndarray:
        """Objective vector (selected criteria order) for candidate points (k, 2)."""
        points = np.asarray(points, dtype=float).reshape(-1, 2)
        if points.shape[0] < 1:
            raise ValueError("candidate set must contain at least one station")
        if self.area is not None:
            for lat, lng in points:
                if not self.area.contains(GeoPoint(lat=float(lat), lng=float(lng))):
                    raise ValueError(f"candidate ({lat}, {lng}) outside target area")

        new_km = np.stack(
            [haversine_km_vec(lat, lng, self.fire_lat, self.fire_lng) for lat, lng in points]
        ).min(axis=0)
        km = new_km if self._base_km is None else np.minimum(self._base_km, new_km)
        dist = km * self.params.detour_factor
        minutes = dist / self.params.speed_kmh * 60.0

        values = []
        for criterion in self.criteria:
            if criterion is Criterion.ART:
                values.append(float(minutes.mean()))
            elif criterion is Criterion.MRT:
                values.append(float(minutes.max()))
            elif criterion is Criterion.ATD:
                values.append(float(dist.mean()))
            elif criterion is Criterion.MTD:
                values.append(float(dist.max()))
            else:
                values.append(self._service_overlap(points))
        return np.array(values)

    def _service_overlap(self, points: np.ndarray) -> float:
        best = np.full((self.grid.rows, self.grid.cols), np.inf)
        for lat, lng in points:
            np.minimum(
                best,
                travel_time_to_cells(GeoPoint(lat=float(lat), lng=float(lng)), self.grid, self.params),
                out=best,
            )
        new_mask = best <= self.k
        denom = int(new_mask.sum())
        if denom == 0 or self._existing_mask is None:
            return 0.0
        return float((new_mask & self._existing_mask).sum() / denom)


def evaluate(
    x: Sequence[GeoPoint],
    fires: Sequence[FireRecord],
    existing: Sequence[Station],
    criteria: Sequence[Criterion],
    grid: GridSpec,
    params: TravelParams,
    k: float,
    area: TargetArea | None = None,
    new_stations_only: bool = False,
) -> dict[Criterion, float]:
    """One-off evaluation of a candidate placement; see EvaluationContext."""
    ctx = EvaluationContext(
        fires=fires,
        existing=existing,
        criteria=criteria,
        grid=grid,
        params=params,
        k=k,
        area=area,
        new_stations_only=new_stations_only,
    )
    points = np.array([[p.lat, p.lng] for p in x])
    values = ctx.evaluate_points(points)
    return dict(zip(ctx.criteria, (float(v) for v in values)))
