"""Parsing of fire, station, and feature CSVs, and tensor rasterization.

Malformed fire/station rows are quarantined into a rejects report instead of
aborting the whole file; structural problems (missing columns, duplicate
station ids, inconsistent feature tables) are fatal.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum
from pathlib import Path
from typing import Iterable, TextIO

import numpy as np

from .core import (
    FIRE_COUNT,
    FireRecord,
    GeoPoint,
    GridSpec,
    Role,
    SpatioTemporalTensor,
    Station,
    cell_of,
    month_index,
    month_key,
    month_range,
    parse_month,
)

FIRE_COLUMNS = ("id", "lat", "lng", "alarm_time", "response_time_min", "station_id", "role")
STATION_COLUMNS = ("id", "lat", "lng", "commissioned")
FEATURE_COLUMNS = ("feature", "granularity", "cell_i", "cell_j", "month", "value")

TENSOR_FORMAT = "stationplan-tensor"
TENSOR_VERSION = 1


class IngestError(ValueError):
    """Fatal ingestion problem: bad header, duplicate ids, broken feature table."""


@dataclass(frozen=True)
class Reject:
    row: int  # physical line number in the source file
    reason: str


class Granularity(str, Enum):
    PER_CELL_PER_MONTH = "per_cell_per_month"
    PER_MONTH_GLOBAL = "per_month_global"
    PER_CELL_STATIC = "per_cell_static"


@dataclass(frozen=True)
class FeatureTable:
    """One supplementary feature at one of the three supported granularities.

    Keys are (cell_i, cell_j, month), month, or (cell_i, cell_j) depending on
    granularity. Missing keys broadcast to 0 during rasterization.
    """

    feature: str
    granularity: Granularity
    rows: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RasterizeResult:
    tensor: SpatioTemporalTensor
    skipped_out_of_extent: int
    skipped_out_of_window: int


def _open_text(source: str | Path | TextIO | Iterable[str]):
    if isinstance(source, (str, Path)):
        return open(source, "r", newline="", encoding="utf-8")
    return source


def _check_header(reader: csv.DictReader, required: tuple[str, ...], what: str) -> None:
    fieldnames = reader.fieldnames or []
    missing = [c for c in required if c not in fieldnames]
    if missing:
        raise IngestError(f"{what} CSV missing required columns: {', '.join(missing)}")


def _parse_point(row: dict) -> GeoPoint:
    try:
        lat = float(row["lat"])
        lng = float(row["lng"])
    except (TypeError, ValueError):
        raise ValueError("invalid coordinates") from None
    return GeoPoint(lat=lat, lng=lng)


def parse_fire_records(
    source: str | Path | TextIO,
) -> tuple[list[FireRecord], list[Reject]]:
    """Parse the fire CSV into records plus a rejects report.

    Each invalid row is recorded with its physical line number and a reason;
    parsing continues. A missing required column is fatal.
    """
    records: list[FireRecord] = []
    rejects: list[Reject] = []
    f = _open_text(source)
    try:
        reader = csv.DictReader(f)
        _check_header(reader, FIRE_COLUMNS, "fire")
        for row in reader:
            try:
                records.append(_fire_record_from_row(row))
            except ValueError as exc:
                rejects.append(Reject(row=reader.line_num, reason=str(exc)))
    finally:
        if f is not source:
            f.close()
    return records, rejects


def _fire_record_from_row(row: dict) -> FireRecord:
    rid = (row.get("id") or "").strip()
    if not rid:
        raise ValueError("missing id")
    location = _parse_point(row)
    raw_alarm = (row.get("alarm_time") or "").strip()
    try:
        alarm = datetime.fromisoformat(raw_alarm.replace("Z", "+00:00"))
    except ValueError:
        raise ValueError(f"invalid alarm_time: {raw_alarm!r}") from None
    try:
        response = float(row["response_time_min"])
    except (TypeError, ValueError):
        raise ValueError("invalid response_time_min") from None
    if not math.isfinite(response):
        raise ValueError("invalid response_time_min")
    if response < 0:
        raise ValueError("negative response time")
    station_id = (row.get("station_id") or "").strip()
    if not station_id:
        raise ValueError("missing station_id")
    raw_role = (row.get("role") or "").strip().lower()
    if raw_role not in (Role.PRIMARY.value, Role.BACKUP.value):
        raise ValueError(f"unknown role: {raw_role!r}")
    return FireRecord(
        id=rid,
        location=location,
        alarm_time=alarm,
        response_time_min=response,
        responding_station_id=station_id,
        role=Role(raw_role),
    )


def parse_stations(source: str | Path | TextIO) -> tuple[list[Station], list[Reject]]:
    """Parse the station CSV. Duplicate station ids are fatal."""
    stations: list[Station] = []
    rejects: list[Reject] = []
    seen: set[str] = set()
    f = _open_text(source)
    try:
        reader = csv.DictReader(f)
        _check_header(reader, STATION_COLUMNS, "station")
        for row in reader:
            sid = (row.get("id") or "").strip()
            if sid and sid in seen:
                raise IngestError(f"duplicate station id: {sid}")
            try:
                stations.append(_station_from_row(row, sid))
                seen.add(sid)
            except IngestError:
                raise
            except ValueError as exc:
                rejects.append(Reject(row=reader.line_num, reason=str(exc)))
    finally:
        if f is not source:
            f.close()
    return stations, rejects


def _station_from_row(row: dict, sid: str) -> Station:
    if not sid:
        raise ValueError("missing id")
    location = _parse_point(row)
    raw_date = (row.get("commissioned") or "").strip()
    try:
        commissioned = date.fromisoformat(raw_date)
    except ValueError:
        raise ValueError(f"invalid commissioned date: {raw_date!r}") from None
    staffing = None
    raw_staffing = (row.get("staffing") or "").strip()
    if raw_staffing:
        try:
            staffing = int(raw_staffing)
        except ValueError:
            raise ValueError("invalid staffing") from None
        if staffing < 0:
            raise ValueError("negative staffing")
    return Station(id=sid, location=location, commissioned=commissioned, staffing=staffing)


def parse_features(source: str | Path | TextIO) -> list[FeatureTable]:
    """Parse the feature CSV into one table per feature name.

    Feature tables are curated inputs, so any malformed row is fatal rather
    than quarantined.
    """
    tables: dict[str, FeatureTable] = {}
    f = _open_text(source)
    try:
        reader = csv.DictReader(f)
        _check_header(reader, FEATURE_COLUMNS, "feature")
        for row in reader:
            _add_feature_row(tables, row, reader.line_num)
    finally:
        if f is not source:
            f.close()
    return list(tables.values())


def _add_feature_row(tables: dict[str, FeatureTable], row: dict, line: int) -> None:
    name = (row.get("feature") or "").strip()
    if not name:
        raise IngestError(f"feature CSV line {line}: missing feature name")
    raw_gran = (row.get("granularity") or "").strip().lower()
    try:
        gran = Granularity(raw_gran)
    except ValueError:
        raise IngestError(f"feature CSV line {line}: unknown granularity {raw_gran!r}") from None
    try:
        value = float(row["value"])
    except (TypeError, ValueError):
        raise IngestError(f"feature CSV line {line}: invalid value") from None
    if not math.isfinite(value):
        raise IngestError(f"feature CSV line {line}: value must be finite")

    if name in tables:
        table = tables[name]
        if table.granularity is not gran:
            raise IngestError(f"feature {name!r} mixes granularities")
    else:
        table = FeatureTable(feature=name, granularity=gran)
        tables[name] = table

    key = _feature_key(row, gran, line)
    if key in table.rows:
        raise IngestError(f"feature CSV line {line}: duplicate key {key!r} for {name!r}")
    table.rows[key] = value


def _feature_key(row: dict, gran: Granularity, line: int):
    def cell() -> tuple[int, int]:
        try:
            return int(row["cell_i"]), int(row["cell_j"])
        except (TypeError, ValueError):
            raise IngestError(f"feature CSV line {line}: invalid cell index") from None

    def month() -> str:
        raw = (row.get("month") or "").strip()
        try:
            parse_month(raw)
        except ValueError:
            raise IngestError(f"feature CSV line {line}: invalid month {raw!r}") from None
        return raw

    if gran is Granularity.PER_CELL_PER_MONTH:
        i, j = cell()
        return (i, j, month())
    if gran is Granularity.PER_MONTH_GLOBAL:
        return month()
    return cell()


def rasterize(
    records: Iterable[FireRecord],
    features: Iterable[FeatureTable],
    grid: GridSpec,
    window: tuple[str, str],
) -> RasterizeResult:
    """Aggregate records and features onto the grid over an inclusive window.

    fire_count[t][i][j] counts records whose alarm month is timestamp t and
    whose location falls in cell (i, j). A record belongs to the month of its
    alarm time. Records outside the window or grid extent are tallied as
    skipped, not errors. Feature channels are filled per their granularity,
    with globals broadcast over cells and statics broadcast over months.
    """
    timestamps = month_range(window[0], window[1])
    t_of = {m: t for t, m in enumerate(timestamps)}
    features = list(features)
    channels = [FIRE_COUNT] + [ft.feature for ft in features]
    if len(set(channels)) != len(channels):
        raise IngestError("feature names must be unique and distinct from fire_count")

    values = np.zeros((len(timestamps), len(channels), grid.rows, grid.cols))
    skipped_window = 0
    skipped_extent = 0
    for rec in records:
        t = t_of.get(month_key(rec.alarm_time))
        if t is None:
            skipped_window += 1
            continue
        cell = cell_of(rec.location, grid)
        if cell is None:
            skipped_extent += 1
            continue
        values[t, 0, cell[0], cell[1]] += 1

    for c, table in enumerate(features, start=1):
        _fill_feature(values[:, c], table, grid, t_of)

    tensor = SpatioTemporalTensor(
        grid=grid, timestamps=tuple(timestamps), channels=tuple(channels), values=values
    )
    return RasterizeResult(
        tensor=tensor,
        skipped_out_of_extent=skipped_extent,
        skipped_out_of_window=skipped_window,
    )


def _fill_feature(target: np.ndarray, table: FeatureTable, grid: GridSpec, t_of: dict) -> None:
    def check_cell(i: int, j: int) -> None:
        if not (0 <= i < grid.rows and 0 <= j < grid.cols):
            raise IngestError(
                f"feature {table.feature!r} references unknown cell ({i}, {j})"
            )

    if table.granularity is Granularity.PER_CELL_PER_MONTH:
        for (i, j, month), value in table.rows.items():
            check_cell(i, j)
            t = t_of.get(month)
            if t is not None:
                target[t, i, j] = value
    elif table.granularity is Granularity.PER_MONTH_GLOBAL:
        for month, value in table.rows.items():
            t = t_of.get(month)
            if t is not None:
                target[t, :, :] = value
    else:
        for (i, j), value in table.rows.items():
            check_cell(i, j)
            target[:, i, j] = value


def validate_dataset(records: Iterable[FireRecord], stations: Iterable[Station]) -> list[str]:
    """Cross-dataset consistency report: unknown station references and
    stations commissioned after the latest alarm. Issues are advisory."""
    stations = list(stations)
    known = {s.id for s in stations}
    issues: list[str] = []
    unknown: dict[str, int] = {}
    latest: datetime | None = None
    for rec in records:
        if rec.responding_station_id not in known:
            unknown[rec.responding_station_id] = unknown.get(rec.responding_station_id, 0) + 1
        if latest is None or rec.alarm_time > latest:
            latest = rec.alarm_time
    for sid, n in sorted(unknown.items()):
        issues.append(f"{n} record(s) reference unknown station {sid!r}")
    if latest is not None:
        for s in stations:
            if s.commissioned > latest.date():
                issues.append(
                    f"station {s.id!r} commissioned {s.commissioned} after latest alarm"
                )
    return issues


# --------------------------------------------------------------------------
# Tensor serialization: one JSON header line, then raw little-endian float64
# values in C order with index [t][c][i][j]. See docs/formats.md.
# --------------------------------------------------------------------------


def tensor_header(tensor: SpatioTemporalTensor) -> dict:
    return {
        "format": TENSOR_FORMAT,
        "version": TENSOR_VERSION,
        "grid": {
            "origin_lat": tensor.grid.origin.lat,
            "origin_lng": tensor.grid.origin.lng,
            "cell_size_km": tensor.grid.cell_size_km,
            "rows": tensor.grid.rows,
            "cols": tensor.grid.cols,
        },
        "channels": list(tensor.channels),
        "timestamps": list(tensor.timestamps),
        "dtype": "<f8",
        "order": "C",
        "shape": list(tensor.values.shape),
    }


def write_tensor(tensor: SpatioTemporalTensor, path: str | Path) -> None:
    header = json.dumps(tensor_header(tensor), sort_keys=True).encode("utf-8")
    payload = np.ascontiguousarray(tensor.values, dtype="<f8").tobytes(order="C")
    with open(path, "wb") as f:
        f.write(header + b"\n")
        f.write(payload)


def read_tensor(path: str | Path) -> SpatioTemporalTensor:
    with open(path, "rb") as f:
        header_line = f.readline()
        payload = f.read()
    try:
        header = json.loads(header_line.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise IngestError(f"bad tensor header: {exc}") from None
    if header.get("format") != TENSOR_FORMAT:
        raise IngestError(f"not a {TENSOR_FORMAT} file: {path}")
    g = header["grid"]
    grid = GridSpec(
        origin=GeoPoint(lat=g["origin_lat"], lng=g["origin_lng"]),
        cell_size_km=g["cell_size_km"],
        rows=g["rows"],
        cols=g["cols"],
    )
    shape = tuple(header["shape"])
    values = np.frombuffer(payload, dtype="<f8")
    if values.size != int(np.prod(shape)):
        raise IngestError(f"tensor payload size {values.size} does not match shape {shape}")
    return SpatioTemporalTensor(
        grid=grid,
        timestamps=tuple(header["timestamps"]),
        channels=tuple(header["channels"]),
        values=values.reshape(shape),
    )
