"""Shared data model: grid geometry, incident and station records, tensors.

All values here are immutable after construction and safe to share across
concurrent readers. Grid arithmetic uses a local equirectangular projection
anchored at the grid origin, which keeps cell math exact at city scale.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum

import numpy as np

KM_PER_DEG_LAT = 111.32
EARTH_RADIUS_KM = 6371.0088

FIRE_COUNT = "fire_count"

# Default feature channels carried alongside the fire counts.
DEFAULT_FEATURE_CHANNELS = (
    "avg_temperature",
    "precipitation_days",
    "avg_enterprise_density",
    "avg_enterprise_size",
    "avg_population_density",
)

_MONTH_RE = re.compile(r"^(\d{4})-(\d{2})$")


@dataclass(frozen=True)
class GeoPoint:
    """WGS84 coordinate, decimal degrees."""

    lat: float
    lng: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and -90.0 <= self.lat <= 90.0):
            raise ValueError(f"latitude out of range: {self.lat!r}")
        if not (math.isfinite(self.lng) and -180.0 <= self.lng <= 180.0):
            raise ValueError(f"longitude out of range: {self.lng!r}")


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid anchored at its southwest corner.

    Row 0 is the southernmost row; column 0 the westernmost column. Cell
    membership uses half-open intervals [west, east) x [south, north) so a
    boundary point belongs to exactly one cell.
    """

    origin: GeoPoint
    cell_size_km: float
    rows: int
    cols: int

    def __post_init__(self):
        if not (math.isfinite(self.cell_size_km) and self.cell_size_km > 0):
            raise ValueError(f"cell_size_km must be positive: {self.cell_size_km!r}")
        if self.rows < 1 or self.cols < 1:
            raise ValueError(f"grid must have at least one cell: {self.rows}x{self.cols}")

    @property
    def km_per_deg_lng(self) -> float:
        return KM_PER_DEG_LAT * math.cos(math.radians(self.origin.lat))

    @property
    def n_cells(self) -> int:
        return self.rows * self.cols

    def extent(self) -> tuple[float, float, float, float]:
        """(lat_min, lat_max, lng_min, lng_max) of the grid rectangle."""
        lat_max = self.origin.lat + self.rows * self.cell_size_km / KM_PER_DEG_LAT
        lng_max = self.origin.lng + self.cols * self.cell_size_km / self.km_per_deg_lng
        return (self.origin.lat, lat_max, self.origin.lng, lng_max)


class Role(str, Enum):
    PRIMARY = "primary"
    BACKUP = "backup"


@dataclass(frozen=True)
class FireRecord:
    """One responded fire incident row: (fire, responding station, role)."""

    id: str
    location: GeoPoint
    alarm_time: datetime
    response_time_min: float
    responding_station_id: str
    role: Role

    def __post_init__(self):
        if not (math.isfinite(self.response_time_min) and self.response_time_min >= 0):
            raise ValueError(f"response_time_min must be >= 0: {self.response_time_min!r}")


@dataclass(frozen=True)
class Station:
    id: str
    location: GeoPoint
    commissioned: date
    staffing: int | None = None

    def __post_init__(self):
        if self.staffing is not None and self.staffing < 0:
            raise ValueError(f"staffing must be >= 0: {self.staffing!r}")


# --------------------------------------------------------------------------
# Month arithmetic. Timestamps are "YYYY-MM" strings with a monthly cadence.
# --------------------------------------------------------------------------


def parse_month(s: str) -> tuple[int, int]:
    m = _MONTH_RE.match(s)
    if not m:
        raise ValueError(f"not a YYYY-MM month: {s!r}")
    year, month = int(m.group(1)), int(m.group(2))
    if not 1 <= month <= 12:
        raise ValueError(f"month out of range: {s!r}")
    return year, month


def month_index(s: str) -> int:
    """Months since 0000-01, for ordering and interval arithmetic."""
    year, month = parse_month(s)
    return year * 12 + (month - 1)


def month_key(t: datetime | date) -> str:
    return f"{t.year:04d}-{t.month:02d}"


def month_range(start: str, end: str) -> list[str]:
    """Inclusive list of consecutive months from start to end."""
    lo, hi = month_index(start), month_index(end)
    if hi < lo:
        raise ValueError(f"empty month window: {start} .. {end}")
    return [f"{i // 12:04d}-{i % 12 + 1:02d}" for i in range(lo, hi + 1)]


# --------------------------------------------------------------------------
# Projection and grid arithmetic
# --------------------------------------------------------------------------


def project_km(p: GeoPoint, g: GridSpec) -> tuple[float, float]:
    """Local equirectangular projection: (east_km, north_km) from g.origin."""
    east = (p.lng - g.origin.lng) * g.km_per_deg_lng
    north = (p.lat - g.origin.lat) * KM_PER_DEG_LAT
    return east, north


def unproject_km(east_km: float, north_km: float, g: GridSpec) -> GeoPoint:
    lat = g.origin.lat + north_km / KM_PER_DEG_LAT
    lng = g.origin.lng + east_km / g.km_per_deg_lng
    return GeoPoint(lat=lat, lng=lng)


def cell_of(p: GeoPoint, g: GridSpec) -> tuple[int, int] | None:
    """Cell index (row, col) containing p, or None outside the grid extent."""
    east, north = project_km(p, g)
    i = math.floor(north / g.cell_size_km)
    j = math.floor(east / g.cell_size_km)
    if 0 <= i < g.rows and 0 <= j < g.cols:
        return i, j
    return None


def cell_center(i: int, j: int, g: GridSpec) -> GeoPoint:
    """Geographic midpoint of cell (i, j)."""
    if not (0 <= i < g.rows and 0 <= j < g.cols):
        raise IndexError(f"cell ({i}, {j}) outside {g.rows}x{g.cols} grid")
    return unproject_km((j + 0.5) * g.cell_size_km, (i + 0.5) * g.cell_size_km, g)


def cell_center_arrays(g: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """(lat, lng) arrays of shape (rows, cols) for every cell center."""
    i = np.arange(g.rows, dtype=float)
    j = np.arange(g.cols, dtype=float)
    lat = g.origin.lat + (i + 0.5) * g.cell_size_km / KM_PER_DEG_LAT
    lng = g.origin.lng + (j + 0.5) * g.cell_size_km / g.km_per_deg_lng
    lat_grid, lng_grid = np.meshgrid(lat, lng, indexing="ij")
    return lat_grid, lng_grid


def haversine_km(a: GeoPoint, b: GeoPoint) -> float:
    """Great-circle distance in kilometers."""
    lat1, lat2 = math.radians(a.lat), math.radians(b.lat)
    dlat = lat2 - lat1
    dlng = math.radians(b.lng - a.lng)
    h = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlng / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def haversine_km_vec(lat1, lng1, lat2, lng2) -> np.ndarray:
    """Vectorized haversine over numpy arrays of degrees."""
    lat1, lng1 = np.radians(lat1), np.radians(lng1)
    lat2, lng2 = np.radians(lat2), np.radians(lng2)
    h = (
        np.sin((lat2 - lat1) / 2.0) ** 2
        + np.cos(lat1) * np.cos(lat2) * np.sin((lng2 - lng1) / 2.0) ** 2
    )
    return 2.0 * EARTH_RADIUS_KM * np.arcsin(np.minimum(1.0, np.sqrt(h)))


# --------------------------------------------------------------------------
# Spatiotemporal tensor
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SpatioTemporalTensor:
    """Per-month feature/count raster of shape (T, C, rows, cols).

    The fire_count channel, when present, holds non-negative integer counts;
    the remaining channels are real-valued features. The values array is made
    read-only so tensors can be shared freely.
    """

    grid: GridSpec
    timestamps: tuple[str, ...]
    channels: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "timestamps", tuple(self.timestamps))
        object.__setattr__(self, "channels", tuple(self.channels))
        values = np.ascontiguousarray(np.asarray(self.values, dtype=np.float64))
        expected = (len(self.timestamps), len(self.channels), self.grid.rows, self.grid.cols)
        if values.shape != expected:
            raise ValueError(f"tensor shape {values.shape} does not match {expected}")
        if len(set(self.channels)) != len(self.channels):
            raise ValueError("duplicate channel names")
        if not self.timestamps:
            raise ValueError("tensor must cover at least one month")
        indices = [month_index(t) for t in self.timestamps]
        if any(b - a != 1 for a, b in zip(indices, indices[1:])):
            raise ValueError("timestamps must be strictly increasing consecutive months")
        if FIRE_COUNT in self.channels:
            counts = values[:, self.channels.index(FIRE_COUNT)]
            if np.any(counts < 0) or np.any(counts != np.round(counts)):
                raise ValueError("fire_count channel must hold non-negative integers")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def channel_index(self, name: str) -> int:
        try:
            return self.channels.index(name)
        except ValueError:
            raise KeyError(f"no channel named {name!r}") from None

    @property
    def fire_counts(self) -> np.ndarray:
        """(T, rows, cols) view of the fire_count channel."""
        return self.values[:, self.channel_index(FIRE_COUNT)]

    @property
    def feature_channels(self) -> tuple[str, ...]:
        return tuple(c for c in self.channels if c != FIRE_COUNT)

    def month_position(self, month: str) -> int:
        try:
            return self.timestamps.index(month)
        except ValueError:
            raise KeyError(f"month {month!r} not covered by tensor") from None

    def tail(self, n: int) -> "SpatioTemporalTensor":
        """Tensor restricted to the last n months."""
        if not 1 <= n <= len(self.timestamps):
            raise ValueError(f"cannot take {n} months from {len(self.timestamps)}")
        return SpatioTemporalTensor(
            grid=self.grid,
            timestamps=self.timestamps[-n:],
            channels=self.channels,
            values=self.values[-n:],
        )
