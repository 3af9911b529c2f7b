"""Travel-time model, reachability fields, k-minute boundaries, underserved cells.

Travel uses straight-line haversine distance scaled by a detour factor at a
constant speed; no road network is consulted. Reachability is evaluated at
cell centers, matching the grid resolution of every other view.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    GeoPoint,
    GridSpec,
    SpatioTemporalTensor,
    Station,
    cell_center_arrays,
    haversine_km,
    haversine_km_vec,
    unproject_km,
)


@dataclass(frozen=True)
class TravelParams:
    speed_kmh: float = 40.0
    detour_factor: float = 1.4

    def __post_init__(self):
        if not (math.isfinite(self.speed_kmh) and self.speed_kmh > 0):
            raise ValueError(f"speed_kmh must be positive: {self.speed_kmh!r}")
        if not (math.isfinite(self.detour_factor) and self.detour_factor >= 1.0):
            raise ValueError(f"detour_factor must be >= 1: {self.detour_factor!r}")


def travel_distance_km(a: GeoPoint, b: GeoPoint, p: TravelParams) -> float:
    """Detoured road distance surrogate: haversine times the detour factor."""
    return haversine_km(a, b) * p.detour_factor


def travel_time(a: GeoPoint, b: GeoPoint, p: TravelParams) -> float:
    """Minutes to drive between two points under the straight-line model."""
    return travel_distance_km(a, b, p) / p.speed_kmh * 60.0


def travel_time_to_cells(origin: GeoPoint, grid: GridSpec, p: TravelParams) -> np.ndarray:
    """(rows, cols) array of minutes from origin to every cell center."""
    lat, lng = cell_center_arrays(grid)
    km = haversine_km_vec(origin.lat, origin.lng, lat, lng)
    return km * p.detour_factor / p.speed_kmh * 60.0


@dataclass(frozen=True, eq=False)
class ReachabilityField:
    """Per-cell minimum travel time (minutes) from any station."""

    grid: GridSpec
    min_time_min: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.min_time_min, dtype=np.float64)
        if arr.shape != (self.grid.rows, self.grid.cols):
            raise ValueError(
                f"field shape {arr.shape} does not match grid {self.grid.rows}x{self.grid.cols}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "min_time_min", arr)

    def reachable_mask(self, k: float) -> np.ndarray:
        return self.min_time_min <= k


def reachability_field(
    stations: list[Station], grid: GridSpec, p: TravelParams
) -> ReachabilityField:
    """Elementwise minimum of the per-station travel-time fields."""
    if not stations:
        raise ValueError("reachability needs at least one station")
    best = np.full((grid.rows, grid.cols), np.inf)
    for s in stations:
        np.minimum(best, travel_time_to_cells(s.location, grid, p), out=best)
    return ReachabilityField(grid=grid, min_time_min=best)


def field_to_tensor(field: ReachabilityField, month: str = "1970-01") -> SpatioTemporalTensor:
    """Wrap the field in a single-channel tensor for the ingest serialization."""
    return SpatioTemporalTensor(
        grid=field.grid,
        timestamps=(month,),
        channels=("min_time_min",),
        values=field.min_time_min[np.newaxis, np.newaxis],
    )


# --------------------------------------------------------------------------
# Marching-squares boundaries of the k-minute reachable region.
#
# Nodes are cell centers carrying the binary indicator min_time <= k; the mask
# is padded with an unreachable ring so every contour closes. Vertices live on
# edge midpoints between adjacent nodes; they are tracked in doubled integer
# coordinates so chaining and nesting tests are exact.
# --------------------------------------------------------------------------

# Segments per 2x2 block case. Corner bits: 8=NW(r,c) 4=NE(r,c+1) 2=SE(r+1,c+1)
# 1=SW(r+1,c). Midpoint labels: T=(r,c+.5) R=(r+.5,c+1) B=(r+1,c+.5) L=(r+.5,c).
_T, _R, _B, _L = 0, 1, 2, 3
_CASES: dict[int, tuple[tuple[int, int], ...]] = {
    0: (),
    15: (),
    8: ((_T, _L),),
    4: ((_T, _R),),
    2: ((_R, _B),),
    1: ((_B, _L),),
    12: ((_L, _R),),
    6: ((_T, _B),),
    3: ((_L, _R),),
    9: ((_T, _B),),
    14: ((_B, _L),),
    13: ((_R, _B),),
    11: ((_T, _R),),
    7: ((_T, _L),),
    # Saddles: keep the two diagonal inside corners disconnected.
    10: ((_T, _L), (_R, _B)),
    5: ((_T, _R), (_B, _L)),
}


@dataclass(frozen=True)
class BoundarySet:
    """Closed contour loops of a reachable region, outermost to innermost.

    geo_loops holds closed rings of GeoPoints (first vertex repeated last).
    node_loops holds the same rings in doubled node coordinates (row, col)
    relative to the unpadded grid, used for exact containment arithmetic.
    """

    grid: GridSpec
    geo_loops: tuple[tuple[GeoPoint, ...], ...]
    node_loops: tuple[tuple[tuple[int, int], ...], ...]

    def __len__(self) -> int:
        return len(self.geo_loops)

    def to_geojson(self) -> dict:
        """GeoJSON MultiPolygon with holes assigned by nesting depth."""
        n = len(self.node_loops)
        contained_in = [
            [q for q in range(n) if q != i and _loop_contains(self.node_loops[q], self.node_loops[i][0])]
            for i in range(n)
        ]
        depth = [len(c) for c in contained_in]
        polygons: dict[int, list[list[list[float]]]] = {}
        for i in range(n):
            if depth[i] % 2 == 0:
                polygons[i] = [_ring_coords(self.geo_loops[i], self.node_loops[i], ccw=True)]
        for i in range(n):
            if depth[i] % 2 == 1:
                parent = max(contained_in[i], key=lambda q: depth[q])
                polygons[parent].append(_ring_coords(self.geo_loops[i], self.node_loops[i], ccw=False))
        return {"type": "MultiPolygon", "coordinates": [polygons[i] for i in sorted(polygons)]}


def _ring_coords(geo_loop, node_loop, ccw: bool) -> list[list[float]]:
    coords = [[p.lng, p.lat] for p in geo_loop]
    if (_signed_area2(node_loop) > 0) != ccw:
        coords.reverse()
    return coords


def _signed_area2(node_loop) -> int:
    # Shoelace in doubled integer coordinates with x=col, y=row; exact.
    area2 = 0
    for (r1, c1), (r2, c2) in zip(node_loop, node_loop[1:]):
        area2 += c1 * r2 - c2 * r1
    return area2


def _loop_contains(node_loop, point: tuple[int, int]) -> bool:
    """Even-odd ray cast in doubled integer coordinates.

    The ray runs toward +col at the point's row. Vertices of other loops never
    coincide with the query point (distinct parity of coordinates), so the
    standard strict/non-strict straddle rule counts each crossing once.
    """
    pr, pc = point
    inside = False
    for (r1, c1), (r2, c2) in zip(node_loop, node_loop[1:]):
        if (r1 > pr) != (r2 > pr):
            # Intersection col at row pr; exact rational comparison.
            # c = c1 + (pr - r1) * (c2 - c1) / (r2 - r1)
            num = c1 * (r2 - r1) + (pr - r1) * (c2 - c1)
            den = r2 - r1
            if den < 0:
                num, den = -num, -den
            if num > pc * den:
                inside = not inside
    return inside


def boundary(field: ReachabilityField, k: float) -> BoundarySet:
    """Marching-squares contours of the binary field min_time <= k.

    A field with every cell reachable draws nothing: the reachable region has
    no boundary inside the observed extent. Otherwise contours are closed
    loops whose even-odd containment matches the mask cell by cell.
    """
    if k <= 0:
        raise ValueError(f"k must be positive: {k!r}")
    grid = field.grid
    mask = field.reachable_mask(k)
    if mask.all() or not mask.any():
        return BoundarySet(grid=grid, geo_loops=(), node_loops=())

    padded = np.zeros((grid.rows + 2, grid.cols + 2), dtype=bool)
    padded[1:-1, 1:-1] = mask

    # Doubled coordinates of the four edge midpoints of block (r, c), in the
    # padded frame: T=(2r, 2c+1) R=(2r+1, 2c+2) B=(2r+2, 2c+1) L=(2r+1, 2c).
    segments: list[tuple[tuple[int, int], tuple[int, int]]] = []
    rows_p, cols_p = padded.shape
    for r in range(rows_p - 1):
        for c in range(cols_p - 1):
            case = (
                8 * padded[r, c]
                + 4 * padded[r, c + 1]
                + 2 * padded[r + 1, c + 1]
                + 1 * padded[r + 1, c]
            )
            if case in (0, 15):
                continue
            mids = (
                (2 * r, 2 * c + 1),
                (2 * r + 1, 2 * c + 2),
                (2 * r + 2, 2 * c + 1),
                (2 * r + 1, 2 * c),
            )
            for a, b in _CASES[case]:
                segments.append((mids[a], mids[b]))

    loops = _chain_loops(segments)
    node_loops = []
    geo_loops = []
    for loop in loops:
        # Shift from padded doubled coords to unpadded doubled coords.
        shifted = tuple((r - 2, c - 2) for r, c in loop)
        node_loops.append(shifted)
        geo_loops.append(tuple(_node_to_geo(r, c, grid) for r, c in shifted))
    return BoundarySet(grid=grid, geo_loops=tuple(geo_loops), node_loops=tuple(node_loops))


def _node_to_geo(r2: int, c2: int, grid: GridSpec) -> GeoPoint:
    # Doubled node coords -> km offsets: node (i, j) sits at ((j+.5)s, (i+.5)s).
    east = (c2 / 2.0 + 0.5) * grid.cell_size_km
    north = (r2 / 2.0 + 0.5) * grid.cell_size_km
    return unproject_km(east, north, grid)


def _chain_loops(segments) -> list[tuple[tuple[int, int], ...]]:
    """Stitch undirected segments (every vertex has degree 2) into closed loops."""
    adjacency: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    for vertex, neighbors in adjacency.items():
        if len(neighbors) != 2:
            raise AssertionError(f"contour vertex {vertex} has degree {len(neighbors)}")

    loops = []
    visited: set[tuple[int, int]] = set()
    for start in sorted(adjacency):
        if start in visited:
            continue
        loop = [start]
        visited.add(start)
        prev, current = None, start
        while True:
            a, b = adjacency[current]
            nxt = b if a == prev else a
            if nxt == start:
                loop.append(start)
                break
            loop.append(nxt)
            visited.add(nxt)
            prev, current = current, nxt
        loops.append(tuple(loop))
    return loops


def cell_parity(boundaries: BoundarySet, i: int, j: int) -> bool:
    """True when cell center (i, j) lies inside an odd number of loops."""
    point = (2 * i, 2 * j)
    return sum(_loop_contains(loop, point) for loop in boundaries.node_loops) % 2 == 1


# --------------------------------------------------------------------------
# Underserved-area scoring
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class UnderservedCell:
    cell: tuple[int, int]
    fire_count: float
    avg_response_min: float
    score: float


@dataclass(frozen=True)
class UnderservedReport:
    k: float
    cells: tuple[UnderservedCell, ...]


def _minmax_norm(values: np.ndarray) -> np.ndarray:
    # A degenerate range marks every candidate as maximally underserved.
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.ones_like(values)
    return (values - lo) / (hi - lo)


def underserved(
    field: ReachabilityField,
    fire_counts: np.ndarray,
    avg_response_min: np.ndarray,
    k: float,
) -> UnderservedReport:
    """Rank cells beyond the k-minute horizon by demand/supply imbalance.

    score = 0.5 * minmax(fire_count) + 0.5 * minmax(avg_response), normalized
    over the candidate set only. Ordering is deterministic: score descending,
    then cell index ascending.
    """
    fire_counts = np.asarray(fire_counts, dtype=float)
    avg_response_min = np.asarray(avg_response_min, dtype=float)
    shape = (field.grid.rows, field.grid.cols)
    if fire_counts.shape != shape or avg_response_min.shape != shape:
        raise ValueError("fire_counts and avg_response_min must match the field grid")

    candidates = np.argwhere(field.min_time_min > k)
    if candidates.size == 0:
        return UnderservedReport(k=k, cells=())
    counts = fire_counts[candidates[:, 0], candidates[:, 1]]
    responses = avg_response_min[candidates[:, 0], candidates[:, 1]]
    scores = 0.5 * _minmax_norm(counts) + 0.5 * _minmax_norm(responses)

    order = sorted(
        range(len(candidates)),
        key=lambda n: (-scores[n], int(candidates[n, 0]), int(candidates[n, 1])),
    )
    cells = tuple(
        UnderservedCell(
            cell=(int(candidates[n, 0]), int(candidates[n, 1])),
            fire_count=float(counts[n]),
            avg_response_min=float(responses[n]),
            score=float(scores[n]),
        )
        for n in order
    )
    return UnderservedReport(k=k, cells=cells)
