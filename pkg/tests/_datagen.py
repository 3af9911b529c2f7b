"""Synthetic dataset builder shared by service, CLI, and acceptance tests."""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from stationplan.core import GeoPoint, GridSpec, unproject_km
from stationplan.mobility import TravelParams, travel_time

GRID = GridSpec(origin=GeoPoint(lat=30.0, lng=120.0), cell_size_km=3.0, rows=4, cols=5)


def point_at_km(east: float, north: float, grid: GridSpec = GRID) -> GeoPoint:
    return unproject_km(east, north, grid)


def make_fires_csv(path: Path, rng: np.random.Generator, n_months: int = 18) -> int:
    """Seasonal fires over the grid with response times tied to station distance."""
    stations = station_points()
    params = TravelParams()
    lines = ["id,lat,lng,alarm_time,response_time_min,station_id,role"]
    fire_id = 0
    lat_min, lat_max, lng_min, lng_max = GRID.extent()
    for m in range(n_months):
        year, month = 2014 + m // 12, m % 12 + 1
        base = 14 + 6 * math.sin(2 * math.pi * m / 12.0)
        for _ in range(int(rng.poisson(base))):
            fire_id += 1
            p = GeoPoint(
                lat=float(rng.uniform(lat_min, lat_max)),
                lng=float(rng.uniform(lng_min, lng_max)),
            )
            times = {sid: travel_time(loc, p, params) for sid, loc in stations.items()}
            ordered = sorted(times.items(), key=lambda kv: kv[1])
            sid, t = ordered[0]
            response = t * float(rng.uniform(0.9, 1.6)) + float(rng.uniform(0.5, 3.0))
            day = int(rng.integers(1, 28))
            hour = int(rng.integers(0, 24))
            lines.append(
                f"F{fire_id:05d},{p.lat:.6f},{p.lng:.6f},"
                f"{year:04d}-{month:02d}-{day:02d}T{hour:02d}:{int(rng.integers(0, 60)):02d},"
                f"{response:.2f},{sid},primary"
            )
            if rng.random() < 0.15:
                bid, bt = ordered[1]
                b_response = bt * float(rng.uniform(1.0, 1.8)) + 2.0
                lines.append(
                    f"F{fire_id:05d},{p.lat:.6f},{p.lng:.6f},"
                    f"{year:04d}-{month:02d}-{day:02d}T{hour:02d}:{int(rng.integers(0, 60)):02d},"
                    f"{b_response:.2f},{bid},backup"
                )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return fire_id


def station_points() -> dict[str, GeoPoint]:
    return {
        "S-A": point_at_km(4.5, 4.5),
        "S-B": point_at_km(10.5, 7.5),
        "S-C": point_at_km(13.5, 1.5),
    }


def make_stations_csv(path: Path) -> None:
    rows = ["id,lat,lng,commissioned,staffing"]
    commissioned = {"S-A": "2009-06-01", "S-B": "2012-03-15", "S-C": "2013-11-20"}
    staffing = {"S-A": "32", "S-B": "", "S-C": "18"}
    for sid, loc in station_points().items():
        rows.append(f"{sid},{loc.lat:.6f},{loc.lng:.6f},{commissioned[sid]},{staffing[sid]}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def make_features_csv(path: Path, rng: np.random.Generator, n_months: int = 18) -> None:
    rows = ["feature,granularity,cell_i,cell_j,month,value"]
    for m in range(n_months):
        month = f"{2014 + m // 12:04d}-{m % 12 + 1:02d}"
        temp = 16 + 10 * math.sin(2 * math.pi * (m - 6) / 12.0)
        rain = 8 + 5 * math.cos(2 * math.pi * m / 12.0)
        rows.append(f"avg_temperature,per_month_global,,,{month},{temp:.3f}")
        rows.append(f"precipitation_days,per_month_global,,,{month},{rain:.3f}")
    for i in range(GRID.rows):
        for j in range(GRID.cols):
            rows.append(
                f"avg_enterprise_density,per_cell_static,{i},{j},,{rng.uniform(5, 80):.3f}"
            )
            rows.append(
                f"avg_enterprise_size,per_cell_static,{i},{j},,{rng.uniform(3, 40):.3f}"
            )
            rows.append(
                f"avg_population_density,per_cell_static,{i},{j},,{rng.uniform(200, 9000):.1f}"
            )
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")


def write_dataset(root: Path, seed: int = 7, n_months: int = 18) -> Path:
    """Write fires/stations/features CSVs plus a config; returns the config path."""
    root.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    make_fires_csv(root / "fires.csv", rng, n_months)
    make_stations_csv(root / "stations.csv")
    make_features_csv(root / "features.csv", rng, n_months)
    window_end = f"{2014 + (n_months - 1) // 12:04d}-{(n_months - 1) % 12 + 1:02d}"
    config = {
        "fires_csv": "fires.csv",
        "stations_csv": "stations.csv",
        "features_csv": "features.csv",
        "grid": {
            "origin_lat": GRID.origin.lat,
            "origin_lng": GRID.origin.lng,
            "cell_size_km": GRID.cell_size_km,
            "rows": GRID.rows,
            "cols": GRID.cols,
        },
        "window": ["2014-01", window_end],
        "travel": {"speed_kmh": 40.0, "detour_factor": 1.4},
        "k_minutes": 9.0,
        "forecast": {"history_window": 4, "horizon": 2, "ridge_lambda": 0.01},
        "job_workers": 2,
    }
    config_path = root / "config.json"
    config_path.write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")
    area = {
        "polygon": [
            [GRID.origin.lat + 0.002, GRID.origin.lng + 0.002],
            [GRID.origin.lat + 0.002, GRID.origin.lng + 0.09],
            [GRID.origin.lat + 0.08, GRID.origin.lng + 0.09],
            [GRID.origin.lat + 0.08, GRID.origin.lng + 0.002],
        ]
    }
    (root / "area.json").write_text(json.dumps(area, indent=2) + "\n", encoding="utf-8")
    return config_path
