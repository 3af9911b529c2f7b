"""Batch CLI mirroring the HTTP API: headless runs writing JSON/GeoJSON artifacts.

Every artifact is serialized with sorted keys so identical (inputs, seed)
produce byte-identical files. Failures print a machine-readable JSON error to
stderr and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import AppConfig, load_config
from .core import GeoPoint, month_key
from .criteria import Criterion, TargetArea
from .forecast import attribute, fit
from .ingest import (
    parse_features,
    parse_fire_records,
    parse_stations,
    rasterize,
    validate_dataset,
    write_tensor,
)
from .mobility import boundary, field_to_tensor, reachability_field, underserved
from .optimizer import GAConfig, OptimizationProblem
from .optimizer import run as run_nsga2
from .simulate import compare, simulate_transfers


def _dump(payload: dict, path: str | Path) -> None:
    Path(path).write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def _load_inputs(config: AppConfig):
    records, fire_rejects = parse_fire_records(config.fires_csv)
    stations, station_rejects = parse_stations(config.stations_csv)
    features = parse_features(config.features_csv) if config.features_csv else []
    if not records:
        raise ValueError("no valid fire records; check the fires CSV")
    if not stations:
        raise ValueError("no valid stations; check the stations CSV")
    window = config.window
    if window is None:
        months = sorted(month_key(r.alarm_time) for r in records)
        window = (months[0], months[-1])
    return records, fire_rejects, stations, station_rejects, features, window


def _load_area(path: str, config: AppConfig) -> TargetArea:
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    if "polygon" in raw:
        return TargetArea.from_polygon([GeoPoint(lat=a, lng=b) for a, b in raw["polygon"]])
    if "cells" in raw:
        return TargetArea.from_cells([(int(i), int(j)) for i, j in raw["cells"]], config.grid)
    raise ValueError("area file must contain 'polygon' or 'cells'")


def cmd_ingest(args) -> int:
    config = load_config(args.config)
    records, fire_rejects, stations, station_rejects, features, window = _load_inputs(config)
    result = rasterize(records, features, config.grid, window)
    write_tensor(result.tensor, args.out)
    if args.rejects:
        _dump(
            {
                "fire_rejects": [{"row": r.row, "reason": r.reason} for r in fire_rejects],
                "station_rejects": [
                    {"row": r.row, "reason": r.reason} for r in station_rejects
                ],
                "issues": validate_dataset(records, stations),
            },
            args.rejects,
        )
    print(
        json.dumps(
            {
                "records": len(records),
                "rejected": len(fire_rejects),
                "stations": len(stations),
                "window": list(window),
                "skipped_out_of_extent": result.skipped_out_of_extent,
                "skipped_out_of_window": result.skipped_out_of_window,
                "tensor": str(args.out),
            },
            sort_keys=True,
        )
    )
    return 0


def cmd_forecast(args) -> int:
    config = load_config(args.config)
    records, _, stations, _, features, window = _load_inputs(config)
    tensor = rasterize(records, features, config.grid, window).tensor
    model = fit(tensor, config.forecast)
    frame = attribute(model, tensor)
    _dump(frame.to_json(tensor), args.out)
    print(json.dumps({"months": len(frame.timestamps), "out": str(args.out)}, sort_keys=True))
    return 0


def cmd_reach(args) -> int:
    config = load_config(args.config)
    _, _, stations, _, _, _ = _load_inputs(config)
    field = reachability_field(stations, config.grid, config.travel)
    bounds = boundary(field, args.k)
    _dump(
        {
            "type": "Feature",
            "properties": {"k": args.k, "loops": len(bounds)},
            "geometry": bounds.to_geojson(),
        },
        args.out,
    )
    if args.field:
        write_tensor(field_to_tensor(field), args.field)
    print(json.dumps({"loops": len(bounds), "out": str(args.out)}, sort_keys=True))
    return 0


def cmd_underserved(args) -> int:
    config = load_config(args.config)
    records, _, stations, _, features, window = _load_inputs(config)
    tensor = rasterize(records, features, config.grid, window).tensor
    field = reachability_field(stations, config.grid, config.travel)

    from .core import cell_of
    import numpy as np

    total = np.zeros((config.grid.rows, config.grid.cols))
    count = np.zeros((config.grid.rows, config.grid.cols))
    for rec in records:
        cell = cell_of(rec.location, config.grid)
        if cell is not None:
            total[cell] += rec.response_time_min
            count[cell] += 1
    avg = np.where(count > 0, total / np.maximum(count, 1), 0.0)
    report = underserved(field, tensor.fire_counts.sum(axis=0), avg, args.k)
    _dump(
        {
            "k": args.k,
            "cells": [
                {
                    "i": c.cell[0],
                    "j": c.cell[1],
                    "fire_count": c.fire_count,
                    "avg_response_min": c.avg_response_min,
                    "score": c.score,
                }
                for c in report.cells
            ],
        },
        args.out,
    )
    print(json.dumps({"candidates": len(report.cells), "out": str(args.out)}, sort_keys=True))
    return 0


def cmd_optimize(args) -> int:
    config = load_config(args.config)
    records, _, stations, _, _, _ = _load_inputs(config)
    area = _load_area(args.area, config)
    criteria = [Criterion(name.strip()) for name in args.criteria.split(",") if name.strip()]
    ga = GAConfig(
        population=args.population,
        generations=args.generations,
        seed=args.seed,
    )
    problem = OptimizationProblem(
        fires=records,
        stations=stations,
        area=area,
        criteria=criteria,
        k_new=args.k_new,
        grid=config.grid,
        travel=config.travel,
        k_minutes=config.k_minutes,
        new_stations_only=args.new_stations_only,
    )
    result = run_nsga2(problem, ga)
    _dump(result.to_json(), args.out)
    print(json.dumps({"solutions": len(result.solutions), "out": str(args.out)}, sort_keys=True))
    return 0


def cmd_simulate(args) -> int:
    config = load_config(args.config)
    records, _, stations, _, _, _ = _load_inputs(config)
    raw = json.loads(Path(args.solution).read_text(encoding="utf-8"))
    if isinstance(raw.get("solutions"), dict):
        solutions = {
            str(sid): [GeoPoint(lat=a, lng=b) for a, b in genome]
            for sid, genome in raw["solutions"].items()
        }
    elif isinstance(raw.get("solutions"), list):
        # A pareto artifact from `optimize` works directly.
        solutions = {
            f"sol-{n + 1}": [GeoPoint(lat=a, lng=b) for a, b in sol["genome"]]
            for n, sol in enumerate(raw["solutions"])
        }
    elif "genome" in raw:
        solutions = {"sol-1": [GeoPoint(lat=a, lng=b) for a, b in raw["genome"]]}
    else:
        raise ValueError("solution file must contain 'solutions' or 'genome'")
    reports = {
        sid: simulate_transfers(
            records,
            stations,
            genome,
            config.travel,
            bucketing=args.bucketing,
            include_backup=args.include_backup,
        )
        for sid, genome in sorted(solutions.items())
    }
    payload = {
        "reports": {sid: r.to_json(stations) for sid, r in reports.items()},
        "comparison": compare(reports).to_json(),
    }
    _dump(payload, args.out)
    print(json.dumps({"solutions": len(reports), "out": str(args.out)}, sort_keys=True))
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import AppState, create_app

    config = load_config(args.config)
    app = create_app(AppState(config))
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stationplan",
        description="Evaluate a fire-station layout and plan additional stations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse datasets and write the tensor")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True, help="tensor output path")
    p.add_argument("--rejects", help="optional rejects report path")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("forecast", help="fit the forecaster and write the S&D series")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_forecast)

    p = sub.add_parser("reach", help="write k-minute reachability boundaries as GeoJSON")
    p.add_argument("--config", required=True)
    p.add_argument("--k", type=float, default=9.0)
    p.add_argument("--out", required=True)
    p.add_argument("--field", help="optional per-cell minute field output")
    p.set_defaults(func=cmd_reach)

    p = sub.add_parser("underserved", help="rank cells beyond the k-minute horizon")
    p.add_argument("--config", required=True)
    p.add_argument("--k", type=float, default=9.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_underserved)

    p = sub.add_parser("optimize", help="run NSGA-II over a target area")
    p.add_argument("--config", required=True)
    p.add_argument("--area", required=True, help="JSON file with polygon or cells")
    p.add_argument("--criteria", default="ART,MRT,ATD,MTD,SO")
    p.add_argument("--k-new", type=int, default=1, dest="k_new")
    p.add_argument("--population", type=int, default=100)
    p.add_argument("--generations", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--new-stations-only", action="store_true", dest="new_stations_only")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("simulate", help="replay fires against a solution")
    p.add_argument("--config", required=True)
    p.add_argument("--solution", required=True, help="JSON file with solutions or genome")
    p.add_argument("--bucketing", default="quarter", choices=("month", "quarter", "year"))
    p.add_argument("--include-backup", action="store_true", dest="include_backup")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", required=True)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True),
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
