"""What-if replay of recorded fires against a layout extended with new stations.

A fire transfers to a simulated new station when that station's modeled travel
time beats the recorded response time; everything else stays with the station
that actually responded. Only primary-role records transfer by default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from typing import Iterable, Sequence

import numpy as np

from .core import FireRecord, GeoPoint, Role, Station
from .mobility import TravelParams, travel_time

BUCKETINGS = ("month", "quarter", "year")
UNKNOWN_STATION = "unknown"


def bucket_of(t: datetime, bucketing: str) -> str:
    if bucketing == "month":
        return f"{t.year:04d}-{t.month:02d}"
    if bucketing == "quarter":
        return f"{t.year:04d}-Q{(t.month - 1) // 3 + 1}"
    if bucketing == "year":
        return f"{t.year:04d}"
    raise ValueError(f"unknown bucketing {bucketing!r}; expected one of {BUCKETINGS}")


@dataclass
class StationFlow:
    before: int = 0
    after: int = 0


@dataclass
class TransferPeriod:
    period: str
    assigned: dict[str, int] = field(default_factory=dict)      # new station -> count
    existing: dict[str, StationFlow] = field(default_factory=dict)
    edges: dict[tuple[str, str], int] = field(default_factory=dict)  # (existing, new) -> n
    total_transferred: int = 0


@dataclass
class TransferSimReport:
    bucketing: str
    new_station_ids: tuple[str, ...]
    new_station_points: tuple[GeoPoint, ...]
    periods: list[TransferPeriod]
    flags: list[str]

    def totals(self) -> dict[str, int]:
        return {p.period: p.total_transferred for p in self.periods}

    def to_json(self, existing: Sequence[Station] | None = None) -> dict:
        geo = {s.id: s.location for s in existing or []}
        periods = []
        for p in self.periods:
            nodes = []
            for sid, flow in sorted(p.existing.items()):
                node = {
                    "id": sid,
                    "kind": "existing",
                    "before": flow.before,
                    "after": flow.after,
                }
                if sid in geo:
                    node["geo"] = {"lat": geo[sid].lat, "lng": geo[sid].lng}
                nodes.append(node)
            for sid, point in zip(self.new_station_ids, self.new_station_points):
                nodes.append(
                    {
                        "id": sid,
                        "kind": "new",
                        "assigned": p.assigned.get(sid, 0),
                        "geo": {"lat": point.lat, "lng": point.lng},
                    }
                )
            periods.append(
                {
                    "period": p.period,
                    "total_transferred": p.total_transferred,
                    "nodes": nodes,
                    "edges": [
                        {"from": src, "to": dst, "weight": w}
                        for (src, dst), w in sorted(p.edges.items())
                    ],
                }
            )
        return {
            "bucketing": self.bucketing,
            "new_stations": [
                {"id": sid, "lat": pt.lat, "lng": pt.lng}
                for sid, pt in zip(self.new_station_ids, self.new_station_points)
            ],
            "periods": periods,
            "flags": list(self.flags),
        }


def simulate_transfers(
    fires: Iterable[FireRecord],
    existing: Sequence[Station],
    solution: Sequence[GeoPoint] | np.ndarray,
    params: TravelParams,
    bucketing: str = "quarter",
    include_backup: bool = False,
) -> TransferSimReport:
    """Replay fires against the layout extended with the solution's stations.

    A record transfers when min over new stations of the modeled travel time
    is strictly below its recorded response time; ties between new stations go
    to the lowest index. Records naming a station that is not in the existing
    set are tallied under a synthetic "unknown" row and flagged.
    """
    points = [
        p if isinstance(p, GeoPoint) else GeoPoint(lat=float(p[0]), lng=float(p[1]))
        for p in solution
    ]
    if not points:
        raise ValueError("solution must contain at least one new station")
    new_ids = tuple(f"new-{n + 1}" for n in range(len(points)))
    if bucketing not in BUCKETINGS:
        raise ValueError(f"unknown bucketing {bucketing!r}; expected one of {BUCKETINGS}")

    known = {s.id for s in existing}
    periods: dict[str, TransferPeriod] = {}
    unknown_seen: set[str] = set()

    for rec in fires:
        if rec.role is Role.BACKUP and not include_backup:
            continue
        key = bucket_of(rec.alarm_time, bucketing)
        period = periods.get(key)
        if period is None:
            period = TransferPeriod(period=key)
            periods[key] = period

        source = rec.responding_station_id
        if source not in known:
            unknown_seen.add(source)
            source = UNKNOWN_STATION
        flow = period.existing.setdefault(source, StationFlow())
        flow.before += 1
        flow.after += 1

        times = [travel_time(p, rec.location, params) for p in points]
        best = int(np.argmin(times))
        if times[best] < rec.response_time_min:
            target = new_ids[best]
            flow.after -= 1
            period.assigned[target] = period.assigned.get(target, 0) + 1
            period.edges[(source, target)] = period.edges.get((source, target), 0) + 1
            period.total_transferred += 1

    ordered = [periods[key] for key in sorted(periods)]
    for period in ordered:
        for station in existing:
            period.existing.setdefault(station.id, StationFlow())
    flags = [
        f"records reference unknown station {sid!r}; tallied under "
        f"{UNKNOWN_STATION!r}"
        for sid in sorted(unknown_seen)
    ]
    return TransferSimReport(
        bucketing=bucketing,
        new_station_ids=new_ids,
        new_station_points=tuple(points),
        periods=ordered,
        flags=flags,
    )


@dataclass(frozen=True)
class ComparisonSeries:
    """Per-period and cumulative transfer totals aligned across solutions."""

    bucketing: str
    periods: tuple[str, ...]
    totals: dict[str, list[int]]      # solution id -> per-period totals
    cumulative: dict[str, list[int]]  # solution id -> prefix sums

    def to_json(self) -> dict:
        return {
            "bucketing": self.bucketing,
            "periods": list(self.periods),
            "totals": {sid: list(v) for sid, v in self.totals.items()},
            "cumulative": {sid: list(v) for sid, v in self.cumulative.items()},
        }


def compare(reports: dict[str, TransferSimReport]) -> ComparisonSeries:
    """Align per-solution reports over a shared period axis.

    All reports must share the same bucketing; periods missing from a report
    contribute zero. Solutions are ordered by id for determinism.
    """
    if not reports:
        raise ValueError("nothing to compare")
    bucketings = {r.bucketing for r in reports.values()}
    if len(bucketings) != 1:
        raise ValueError(f"mismatched bucketing across reports: {sorted(bucketings)}")
    period_axis = sorted({p.period for r in reports.values() for p in r.periods})

    totals: dict[str, list[int]] = {}
    cumulative: dict[str, list[int]] = {}
    for sid in sorted(reports):
        by_period = reports[sid].totals()
        series = [by_period.get(p, 0) for p in period_axis]
        totals[sid] = series
        cumulative[sid] = [int(v) for v in np.cumsum(series)] if series else []
    return ComparisonSeries(
        bucketing=bucketings.pop(),
        periods=tuple(period_axis),
        totals=totals,
        cumulative=cumulative,
    )
