#!/usr/bin/env python3
"""Generate a synthetic demo city: fires, stations, features, config, area.

Usage: python3 scripts/generate_demo_data.py [outdir]

The data is seeded and deterministic. Fires cluster around a few hotspots with
a seasonal monthly rate; response times follow distance to the responding
station plus turnout noise, so the layout genuinely has underserved pockets.
"""

import json
import math
import sys
from pathlib import Path

import numpy as np

from stationplan.core import GeoPoint, GridSpec, unproject_km
from stationplan.mobility import TravelParams, travel_time

GRID = GridSpec(origin=GeoPoint(lat=30.0, lng=120.0), cell_size_km=3.0, rows=10, cols=10)
N_MONTHS = 48
SEED = 20140101

STATIONS = {
    "HZ-01": (6.0, 6.0),
    "HZ-02": (13.0, 9.0),
    "HZ-03": (21.0, 5.0),
    "HZ-04": (9.5, 16.0),
    "HZ-05": (18.0, 20.0),
    "HZ-06": (25.0, 14.0),
}
COMMISSIONED = {
    "HZ-01": "2006-04-01",
    "HZ-02": "2008-09-15",
    "HZ-03": "2010-01-20",
    "HZ-04": "2012-06-30",
    "HZ-05": "2014-03-11",
    "HZ-06": "2015-10-05",
}

HOTSPOTS = [(7.0, 7.0, 5.0), (14.0, 10.0, 4.0), (24.0, 24.0, 3.5), (27.0, 3.0, 3.0)]


def month_str(m: int) -> str:
    return f"{2014 + m // 12:04d}-{m % 12 + 1:02d}"


def sample_location(rng) -> GeoPoint:
    # Mixture of hotspots and uniform background, clipped to the grid.
    side = GRID.cell_size_km
    if rng.random() < 0.75:
        cx, cy, spread = HOTSPOTS[int(rng.integers(len(HOTSPOTS)))]
        east = float(np.clip(rng.normal(cx, spread), 0.01, GRID.cols * side - 0.01))
        north = float(np.clip(rng.normal(cy, spread), 0.01, GRID.rows * side - 0.01))
    else:
        east = float(rng.uniform(0.01, GRID.cols * side - 0.01))
        north = float(rng.uniform(0.01, GRID.rows * side - 0.01))
    return unproject_km(east, north, GRID)


def main() -> int:
    outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo")
    outdir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(SEED)
    params = TravelParams()
    stations = {sid: unproject_km(e, n, GRID) for sid, (e, n) in STATIONS.items()}

    fire_rows = ["id,lat,lng,alarm_time,response_time_min,station_id,role"]
    fire_id = 0
    for m in range(N_MONTHS):
        rate = 55 + 25 * math.sin(2 * math.pi * (m - 6) / 12.0)
        for _ in range(int(rng.poisson(rate))):
            fire_id += 1
            p = sample_location(rng)
            times = sorted(
                ((travel_time(loc, p, params), sid) for sid, loc in stations.items())
            )
            t_first, sid = times[0]
            response = t_first * float(rng.uniform(0.9, 1.5)) + float(rng.uniform(0.5, 4.0))
            stamp = (
                f"{month_str(m)}-{int(rng.integers(1, 28)):02d}"
                f"T{int(rng.integers(0, 24)):02d}:{int(rng.integers(0, 60)):02d}"
            )
            fire_rows.append(
                f"F{fire_id:06d},{p.lat:.6f},{p.lng:.6f},{stamp},{response:.2f},{sid},primary"
            )
            if rng.random() < 0.12:
                t_second, sid2 = times[1]
                fire_rows.append(
                    f"F{fire_id:06d},{p.lat:.6f},{p.lng:.6f},{stamp},"
                    f"{t_second * 1.3 + 3.0:.2f},{sid2},backup"
                )
    (outdir / "fires.csv").write_text("\n".join(fire_rows) + "\n", encoding="utf-8")

    station_rows = ["id,lat,lng,commissioned,staffing"]
    for sid, loc in stations.items():
        staffing = int(rng.integers(12, 45))
        station_rows.append(
            f"{sid},{loc.lat:.6f},{loc.lng:.6f},{COMMISSIONED[sid]},{staffing}"
        )
    (outdir / "stations.csv").write_text("\n".join(station_rows) + "\n", encoding="utf-8")

    feature_rows = ["feature,granularity,cell_i,cell_j,month,value"]
    for m in range(N_MONTHS):
        month = month_str(m)
        temp = 17 + 11 * math.sin(2 * math.pi * (m - 6) / 12.0) + float(rng.normal(0, 0.8))
        rain = max(0.0, 9 + 6 * math.cos(2 * math.pi * m / 12.0) + float(rng.normal(0, 1.0)))
        feature_rows.append(f"avg_temperature,per_month_global,,,{month},{temp:.3f}")
        feature_rows.append(f"precipitation_days,per_month_global,,,{month},{rain:.3f}")
    density_bias = rng.uniform(0.4, 1.0, size=(GRID.rows, GRID.cols))
    for i in range(GRID.rows):
        for j in range(GRID.cols):
            near_hot = min(
                math.hypot((j + 0.5) * 3 - cx, (i + 0.5) * 3 - cy) for cx, cy, _ in HOTSPOTS
            )
            boost = max(0.2, 2.0 - near_hot / 8.0)
            feature_rows.append(
                f"avg_enterprise_density,per_cell_static,{i},{j},,{30 * boost * density_bias[i, j]:.2f}"
            )
            feature_rows.append(
                f"avg_enterprise_size,per_cell_static,{i},{j},,{rng.uniform(4, 35):.2f}"
            )
            feature_rows.append(
                f"avg_population_density,per_cell_static,{i},{j},,{4000 * boost * density_bias[i, j]:.1f}"
            )
    (outdir / "features.csv").write_text("\n".join(feature_rows) + "\n", encoding="utf-8")

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
        "window": [month_str(0), month_str(N_MONTHS - 1)],
        "travel": {"speed_kmh": 40.0, "detour_factor": 1.4},
        "k_minutes": 9.0,
        "forecast": {"history_window": 6, "horizon": 3, "ridge_lambda": 0.001},
        "job_workers": 2,
    }
    (outdir / "config.json").write_text(json.dumps(config, indent=2) + "\n", encoding="utf-8")

    # A target area in the underserved northeast corner.
    sw = unproject_km(19.0, 19.0, GRID)
    ne = unproject_km(29.5, 29.5, GRID)
    area = {
        "polygon": [
            [sw.lat, sw.lng],
            [sw.lat, ne.lng],
            [ne.lat, ne.lng],
            [ne.lat, sw.lng],
        ]
    }
    (outdir / "area.json").write_text(json.dumps(area, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {fire_id} fires, {len(stations)} stations to {outdir}/")
    return 0


if __name__ == "__main__":
    sys.exit(main())
