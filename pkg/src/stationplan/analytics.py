"""Read-only aggregations behind the statistics, supply/demand, and map views."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import (
    KM_PER_DEG_LAT,
    FireRecord,
    GeoPoint,
    Role,
    SpatioTemporalTensor,
    Station,
)
from .forecast import AttributionFrame

N_DIRECTION_SECTORS = 6


def yearly_counts(fires: Iterable[FireRecord]) -> dict[int, int]:
    """Fire tally by alarm year."""
    counts: dict[int, int] = {}
    for rec in fires:
        counts[rec.alarm_time.year] = counts.get(rec.alarm_time.year, 0) + 1
    return dict(sorted(counts.items()))


@dataclass(frozen=True)
class YearResponseStats:
    year: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    count: int


def response_distribution(fires: Iterable[FireRecord]) -> list[YearResponseStats]:
    """Five-number summary of response times per year.

    Quartiles use inclusive linear interpolation between closest ranks, the
    numpy default, pinned here so results reproduce across implementations.
    """
    by_year: dict[int, list[float]] = {}
    for rec in fires:
        by_year.setdefault(rec.alarm_time.year, []).append(rec.response_time_min)
    out = []
    for year in sorted(by_year):
        values = np.asarray(by_year[year])
        q1, median, q3 = np.percentile(values, [25, 50, 75])
        out.append(
            YearResponseStats(
                year=year,
                min=float(values.min()),
                q1=float(q1),
                median=float(median),
                q3=float(q3),
                max=float(values.max()),
                count=int(values.size),
            )
        )
    return out


def bearing_deg(origin: GeoPoint, target: GeoPoint) -> float:
    """Compass bearing from origin to target in [0, 360); 0 = north, 90 = east.

    Uses the same local equirectangular flattening as the grid math, with the
    longitude scale taken at the origin latitude.
    """
    east = (target.lng - origin.lng) * KM_PER_DEG_LAT * math.cos(math.radians(origin.lat))
    north = (target.lat - origin.lat) * KM_PER_DEG_LAT
    return math.degrees(math.atan2(east, north)) % 360.0


def direction_sector(bearing: float) -> int:
    """Six 60-degree sectors centered on 0, 60, ..., 300 degrees.

    Sector 0 covers [-30, 30); boundaries belong to the clockwise-next sector.
    """
    return int(math.floor(((bearing + 30.0) % 360.0) / 60.0)) % N_DIRECTION_SECTORS


@dataclass(frozen=True)
class TimeSector:
    start_hour: int
    end_hour: int
    below_k: int
    at_or_above_k: int


@dataclass(frozen=True)
class StationProfile:
    station_id: str
    k: float
    total_actions: int
    role_counts: dict[str, int]
    direction_counts: tuple[int, ...]  # six sectors, north first, clockwise
    time_sectors: tuple[TimeSector, ...]


def station_profile(
    fires: Iterable[FireRecord],
    station: Station,
    k: float = 9.0,
    sector_hours: int = 4,
) -> StationProfile:
    """Action profile of one station: roles, compass sectors, time-of-day split.

    Time-of-day buckets count a record under its alarm hour and split it at
    the threshold k: responses taking no less than k minutes land in the
    at_or_above_k share.
    """
    if 24 % sector_hours != 0:
        raise ValueError(f"sector_hours must divide 24: {sector_hours}")
    n_buckets = 24 // sector_hours
    directions = [0] * N_DIRECTION_SECTORS
    roles = {Role.PRIMARY.value: 0, Role.BACKUP.value: 0}
    slow = [0] * n_buckets
    fast = [0] * n_buckets
    total = 0
    for rec in fires:
        if rec.responding_station_id != station.id:
            continue
        total += 1
        roles[rec.role.value] += 1
        directions[direction_sector(bearing_deg(station.location, rec.location))] += 1
        bucket = rec.alarm_time.hour // sector_hours
        if rec.response_time_min >= k:
            slow[bucket] += 1
        else:
            fast[bucket] += 1
    sectors = tuple(
        TimeSector(
            start_hour=b * sector_hours,
            end_hour=(b + 1) * sector_hours,
            below_k=fast[b],
            at_or_above_k=slow[b],
        )
        for b in range(n_buckets)
    )
    return StationProfile(
        station_id=station.id,
        k=k,
        total_actions=total,
        role_counts=roles,
        direction_counts=tuple(directions),
        time_sectors=sectors,
    )


def sd_series(
    frame: AttributionFrame, tensor: SpatioTemporalTensor
) -> list[dict]:
    """City-wide supply/demand series: per month actual and predicted counts
    plus signed per-feature attribution totals.

    Signs are preserved so the client can stack negative contributions above
    the prediction line and positive ones below it.
    """
    if frame.timestamps != tensor.timestamps[1:]:
        raise ValueError("attribution frame months do not align with the tensor")
    actual = tensor.fire_counts[1:].sum(axis=(1, 2))
    predicted = frame.city_predicted()
    phi = frame.city_phi()
    return [
        {
            "month": month,
            "actual": float(actual[t]),
            "predicted": float(predicted[t]),
            "phi": {name: float(phi[t, c]) for c, name in enumerate(frame.features)},
        }
        for t, month in enumerate(frame.timestamps)
    ]
