"""HTTP service exposing the full pipeline to the UI.

All read endpoints serve precomputed, immutable state. Optimization and
simulation run as asynchronous jobs on a bounded worker pool with polling;
at most one optimize job runs per target area at a time, extra requests queue
on that area. Results are deterministic for identical (inputs, seed).
"""

from __future__ import annotations

import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, field_validator, model_validator

from . import analytics
from .config import AppConfig
from .core import GeoPoint, cell_center, month_key
from .criteria import Criterion, EvaluationContext, TargetArea
from .forecast import attribute, fit
from .ingest import parse_features, parse_fire_records, parse_stations, rasterize, validate_dataset
from .mobility import boundary, reachability_field, underserved
from .optimizer import GAConfig, OptimizationProblem
from .optimizer import run as run_nsga2
from .simulate import BUCKETINGS, compare, simulate_transfers


class JobState(str, Enum):
    QUEUED = "queued"
    RUNNING = "running"
    DONE = "done"
    FAILED = "failed"


class Job:
    def __init__(self, job_id: str, kind: str, area_key: str | None = None):
        self.id = job_id
        self.kind = kind
        self.area_key = area_key
        self.state = JobState.QUEUED
        self.progress = 0.0
        self.error: str | None = None
        self.result: dict | None = None
        self._lock = threading.Lock()

    def set_running(self):
        with self._lock:
            self.state = JobState.RUNNING

    def set_progress(self, done: int, total: int):
        with self._lock:
            self.progress = max(self.progress, min(1.0, done / total))

    def set_done(self, result: dict):
        with self._lock:
            self.result = result
            self.progress = 1.0
            self.state = JobState.DONE

    def set_failed(self, error: str):
        with self._lock:
            self.error = error
            self.state = JobState.FAILED

    def snapshot(self) -> dict:
        with self._lock:
            payload = {
                "id": self.id,
                "kind": self.kind,
                "state": self.state.value,
                "progress": round(self.progress, 4),
                "error": self.error,
            }
            if self.state is JobState.DONE:
                if self.kind == "optimize":
                    payload["result"] = {"pareto_url": f"/api/solutions/{self.id}/pareto"}
                else:
                    payload["result"] = self.result
        return payload


class JobManager:
    """Bounded worker pool with per-area serialization of optimize jobs."""

    def __init__(self, workers: int = 2):
        self._executor = ThreadPoolExecutor(max_workers=max(1, workers))
        self._jobs: dict[str, Job] = {}
        self._area_locks: dict[str, threading.Lock] = {}
        self._mutex = threading.Lock()

    def submit(self, kind: str, fn, area_key: str | None = None) -> Job:
        job = Job(uuid.uuid4().hex[:12], kind, area_key)
        with self._mutex:
            self._jobs[job.id] = job
            area_lock = self._area_locks.setdefault(area_key, threading.Lock()) if area_key else None

        def runner():
            if area_lock is not None:
                area_lock.acquire()
            try:
                job.set_running()
                job.set_done(fn(job.set_progress))
            except Exception as exc:  # surfaced through the job, not the worker
                job.set_failed(f"{type(exc).__name__}: {exc}")
            finally:
                if area_lock is not None:
                    area_lock.release()

        self._executor.submit(runner)
        return job

    def get(self, job_id: str) -> Job | None:
        with self._mutex:
            return self._jobs.get(job_id)


@dataclass
class AppState:
    """Immutable dataset snapshot plus the job manager."""

    config: AppConfig

    def __post_init__(self):
        cfg = self.config
        self.records, self.fire_rejects = parse_fire_records(cfg.fires_csv)
        self.stations, self.station_rejects = parse_stations(cfg.stations_csv)
        self.station_by_id = {s.id: s for s in self.stations}
        self.features = parse_features(cfg.features_csv) if cfg.features_csv else []
        self.issues = validate_dataset(self.records, self.stations)
        if not self.records:
            raise ValueError("no valid fire records; check the fires CSV")
        if not self.stations:
            raise ValueError("no valid stations; check the stations CSV")

        window = cfg.window
        if window is None:
            months = sorted(month_key(r.alarm_time) for r in self.records)
            window = (months[0], months[-1])
        self.window = window
        raster = rasterize(self.records, self.features, cfg.grid, window)
        self.tensor = raster.tensor
        self.raster_skips = {
            "out_of_extent": raster.skipped_out_of_extent,
            "out_of_window": raster.skipped_out_of_window,
        }
        self.forecaster = fit(self.tensor, cfg.forecast)
        self.frame = attribute(self.forecaster, self.tensor)
        self.sd = analytics.sd_series(self.frame, self.tensor)
        self.yearly = analytics.yearly_counts(self.records)
        self.distribution = analytics.response_distribution(self.records)
        self._per_cell_response()
        self.jobs = JobManager(cfg.job_workers)
        self._field_cache: dict[float, object] = {}
        self._field_lock = threading.Lock()

    def _per_cell_response(self):
        from .core import cell_of

        grid = self.config.grid
        total = np.zeros((grid.rows, grid.cols))
        count = np.zeros((grid.rows, grid.cols))
        for rec in self.records:
            cell = cell_of(rec.location, grid)
            if cell is None:
                continue
            total[cell] += rec.response_time_min
            count[cell] += 1
        with np.errstate(invalid="ignore"):
            avg = np.where(count > 0, total / np.maximum(count, 1), 0.0)
        self.cell_response_avg = avg
        self.cell_fire_counts = self.tensor.fire_counts.sum(axis=0)

    def field(self, k: float):
        # k does not change the field itself, but callers pass it around; the
        # field only depends on stations/travel so one entry suffices.
        with self._field_lock:
            if "field" not in self._field_cache:
                self._field_cache["field"] = reachability_field(
                    self.stations, self.config.grid, self.config.travel
                )
            return self._field_cache["field"]


# --------------------------------------------------------------------------
# Request schemas
# --------------------------------------------------------------------------


class AreaPayload(BaseModel):
    polygon: Optional[list[tuple[float, float]]] = None
    cells: Optional[list[tuple[int, int]]] = None

    @model_validator(mode="after")
    def _one_of(self):
        if (self.polygon is None) == (self.cells is None):
            raise ValueError("area requires exactly one of polygon or cells")
        if self.polygon is not None and len(self.polygon) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        return self

    def to_area(self, grid) -> TargetArea:
        if self.polygon is not None:
            return TargetArea.from_polygon([GeoPoint(lat=a, lng=b) for a, b in self.polygon])
        return TargetArea.from_cells(self.cells, grid)

    def key(self) -> str:
        if self.polygon is not None:
            return "polygon:" + ";".join(f"{a:.6f},{b:.6f}" for a, b in self.polygon)
        return "cells:" + ";".join(f"{i},{j}" for i, j in sorted(self.cells))


class GAPayload(BaseModel):
    population: int = 100
    generations: int = 200
    crossover_prob: float = 0.9
    mutation_prob: Optional[float] = None
    eta_crossover: float = 15.0
    eta_mutation: float = 20.0

    @model_validator(mode="after")
    def _invariants(self):
        GAConfig(
            population=self.population,
            generations=self.generations,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            eta_crossover=self.eta_crossover,
            eta_mutation=self.eta_mutation,
        )
        return self

    def to_config(self, seed: int) -> GAConfig:
        return GAConfig(
            population=self.population,
            generations=self.generations,
            crossover_prob=self.crossover_prob,
            mutation_prob=self.mutation_prob,
            eta_crossover=self.eta_crossover,
            eta_mutation=self.eta_mutation,
            seed=seed,
        )


class OptimizeRequest(BaseModel):
    area: AreaPayload
    criteria: list[str] = Field(min_length=1)
    k_new: int = 1
    ga: GAPayload = GAPayload()
    seed: int = 0
    new_stations_only: bool = False

    @field_validator("criteria")
    @classmethod
    def _known_criteria(cls, v):
        names = [c.value for c in Criterion]
        for name in v:
            if name not in names:
                raise ValueError(f"unknown criterion {name!r}; expected subset of {names}")
        if len(set(v)) != len(v):
            raise ValueError("criteria must be unique")
        return v

    @field_validator("k_new")
    @classmethod
    def _k_new(cls, v):
        if v < 1:
            raise ValueError("k_new must be >= 1")
        return v


class SimulateRequest(BaseModel):
    solutions: dict[str, list[tuple[float, float]]]
    bucketing: str = "quarter"
    include_backup: bool = False

    @field_validator("solutions")
    @classmethod
    def _non_empty(cls, v):
        if not v:
            raise ValueError("provide at least one solution")
        for sid, genome in v.items():
            if not genome:
                raise ValueError(f"solution {sid!r} has no stations")
        return v

    @field_validator("bucketing")
    @classmethod
    def _bucketing(cls, v):
        if v not in BUCKETINGS:
            raise ValueError(f"bucketing must be one of {BUCKETINGS}")
        return v


class EvaluateRequest(BaseModel):
    genome: list[tuple[float, float]] = Field(min_length=1)
    criteria: list[str] = Field(min_length=1)
    area: Optional[AreaPayload] = None
    k: Optional[float] = None
    new_stations_only: bool = False


# --------------------------------------------------------------------------
# App factory
# --------------------------------------------------------------------------


def create_app(state: AppState) -> FastAPI:
    app = FastAPI(title="stationplan", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    grid = state.config.grid

    @app.get("/api/health")
    def health():
        return {
            "status": "ok",
            "records": len(state.records),
            "stations": len(state.stations),
            "window": list(state.window),
            "issues": state.issues,
        }

    @app.get("/api/stats/yearly")
    def stats_yearly():
        return {str(year): n for year, n in state.yearly.items()}

    @app.get("/api/stats/stations")
    def stats_stations():
        rows = []
        for s in state.stations:
            profile = analytics.station_profile(state.records, s, state.config.k_minutes)
            rows.append(
                {
                    "id": s.id,
                    "lat": s.location.lat,
                    "lng": s.location.lng,
                    "commissioned": s.commissioned.isoformat(),
                    "staffing": s.staffing,
                    "actions": {
                        "total": profile.total_actions,
                        "primary": profile.role_counts["primary"],
                        "backup": profile.role_counts["backup"],
                    },
                }
            )
        return {"stations": rows}

    @app.get("/api/sd-series")
    def sd_series_endpoint():
        return {
            "features": list(state.frame.features),
            "series": state.sd,
            "response_distribution": [
                {
                    "year": d.year,
                    "min": d.min,
                    "q1": d.q1,
                    "median": d.median,
                    "q3": d.q3,
                    "max": d.max,
                    "count": d.count,
                }
                for d in state.distribution
            ],
            "station_commissioned": [
                {"id": s.id, "date": s.commissioned.isoformat()} for s in state.stations
            ],
        }

    @app.get("/api/grid")
    def grid_month(month: str):
        tensor = state.tensor
        try:
            t = tensor.month_position(month)
        except KeyError:
            raise HTTPException(status_code=404, detail=f"month {month!r} not in window")
        frame_t = t - 1  # attribution explains months from index 1 onward
        abs_phi = state.frame.abs_phi_sum()[frame_t] if frame_t >= 0 else None
        cells = []
        for i in range(grid.rows):
            for j in range(grid.cols):
                center = cell_center(i, j, grid)
                entry = {
                    "i": i,
                    "j": j,
                    "lat": center.lat,
                    "lng": center.lng,
                    "fire_count": float(tensor.fire_counts[t, i, j]),
                    "avg_response_min": float(state.cell_response_avg[i, j]),
                    "features": {
                        name: float(tensor.values[t, tensor.channel_index(name), i, j])
                        for name in tensor.feature_channels
                    },
                }
                if frame_t >= 0:
                    entry["phi"] = {
                        name: float(state.frame.phi[frame_t, c, i, j])
                        for c, name in enumerate(state.frame.features)
                    }
                    entry["abs_phi_sum"] = float(abs_phi[i, j])
                cells.append(entry)
        fires = [
            {
                "id": r.id,
                "lat": r.location.lat,
                "lng": r.location.lng,
                "response_time_min": r.response_time_min,
                "station_id": r.responding_station_id,
                "role": r.role.value,
            }
            for r in state.records
            if month_key(r.alarm_time) == month
        ]
        return {
            "month": month,
            "grid": {
                "origin_lat": grid.origin.lat,
                "origin_lng": grid.origin.lng,
                "cell_size_km": grid.cell_size_km,
                "rows": grid.rows,
                "cols": grid.cols,
            },
            "cells": cells,
            "fires": fires,
        }

    @app.get("/api/reachability")
    def reachability(k: Optional[float] = None):
        k = state.config.k_minutes if k is None else k
        if k <= 0:
            raise HTTPException(status_code=422, detail="k must be positive")
        field = state.field(k)
        bounds = boundary(field, k)
        return {
            "k": k,
            "boundaries": bounds.to_geojson(),
            "reachable_cells": int(field.reachable_mask(k).sum()),
            "total_cells": grid.n_cells,
        }

    @app.get("/api/underserved")
    def underserved_endpoint(k: Optional[float] = None):
        k = state.config.k_minutes if k is None else k
        if k <= 0:
            raise HTTPException(status_code=422, detail="k must be positive")
        field = state.field(k)
        report = underserved(field, state.cell_fire_counts, state.cell_response_avg, k)
        return {
            "k": k,
            "cells": [
                {
                    "i": c.cell[0],
                    "j": c.cell[1],
                    "lat": cell_center(c.cell[0], c.cell[1], grid).lat,
                    "lng": cell_center(c.cell[0], c.cell[1], grid).lng,
                    "fire_count": c.fire_count,
                    "avg_response_min": c.avg_response_min,
                    "score": c.score,
                }
                for c in report.cells
            ],
        }

    @app.get("/api/station/{station_id}/profile")
    def station_profile_endpoint(station_id: str, k: Optional[float] = None):
        station = state.station_by_id.get(station_id)
        if station is None:
            raise HTTPException(status_code=404, detail=f"unknown station {station_id!r}")
        k = state.config.k_minutes if k is None else k
        profile = analytics.station_profile(state.records, station, k)
        return {
            "station_id": profile.station_id,
            "k": profile.k,
            "total_actions": profile.total_actions,
            "roles": profile.role_counts,
            "directions": list(profile.direction_counts),
            "time_sectors": [
                {
                    "start_hour": s.start_hour,
                    "end_hour": s.end_hour,
                    "below_k": s.below_k,
                    "at_or_above_k": s.at_or_above_k,
                }
                for s in profile.time_sectors
            ],
        }

    @app.post("/api/optimize")
    def optimize(req: OptimizeRequest):
        try:
            area = req.area.to_area(grid)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        criteria = [Criterion(c) for c in req.criteria]
        problem = OptimizationProblem(
            fires=state.records,
            stations=state.stations,
            area=area,
            criteria=criteria,
            k_new=req.k_new,
            grid=grid,
            travel=state.config.travel,
            k_minutes=state.config.k_minutes,
            new_stations_only=req.new_stations_only,
        )
        ga = req.ga.to_config(req.seed)

        def work(progress):
            result = run_nsga2(problem, ga, on_generation=progress)
            return {"pareto": result.to_json()}

        job = state.jobs.submit("optimize", work, area_key=req.area.key())
        return job.snapshot()

    @app.post("/api/simulate")
    def simulate(req: SimulateRequest):
        def work(progress):
            reports = {}
            for n, (sid, genome) in enumerate(sorted(req.solutions.items())):
                reports[sid] = simulate_transfers(
                    state.records,
                    state.stations,
                    [GeoPoint(lat=a, lng=b) for a, b in genome],
                    state.config.travel,
                    bucketing=req.bucketing,
                    include_backup=req.include_backup,
                )
                progress(n + 1, len(req.solutions) + 1)
            comparison = compare(reports)
            return {
                "reports": {sid: r.to_json(state.stations) for sid, r in reports.items()},
                "comparison": comparison.to_json(),
            }

        job = state.jobs.submit("simulate", work)
        return job.snapshot()

    @app.post("/api/evaluate")
    def evaluate_endpoint(req: EvaluateRequest):
        try:
            for name in req.criteria:
                Criterion(name)
        except ValueError:
            raise HTTPException(status_code=422, detail=f"unknown criterion in {req.criteria}")
        area = None
        if req.area is not None:
            try:
                area = req.area.to_area(grid)
            except ValueError as exc:
                raise HTTPException(status_code=422, detail=str(exc))
        try:
            ctx = EvaluationContext(
                fires=state.records,
                existing=state.stations,
                criteria=[Criterion(c) for c in req.criteria],
                grid=grid,
                params=state.config.travel,
                k=req.k if req.k is not None else state.config.k_minutes,
                area=area,
                new_stations_only=req.new_stations_only,
            )
            values = ctx.evaluate_points(np.array(req.genome, dtype=float))
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "objectives": {c.value: float(v) for c, v in zip(ctx.criteria, values)}
        }

    @app.get("/api/jobs/{job_id}")
    def job_status(job_id: str):
        job = state.jobs.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id!r}")
        return job.snapshot()

    @app.get("/api/solutions/{job_id}/pareto")
    def pareto(job_id: str):
        job = state.jobs.get(job_id)
        if job is None or job.kind != "optimize":
            raise HTTPException(status_code=404, detail=f"unknown optimize job {job_id!r}")
        if job.state is JobState.FAILED:
            raise HTTPException(status_code=409, detail=f"job failed: {job.error}")
        if job.state is not JobState.DONE:
            raise HTTPException(status_code=409, detail="job not finished; poll /api/jobs")
        return job.result["pareto"]

    if state.config.ui_dir is not None and state.config.ui_dir.is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=state.config.ui_dir, html=True), name="ui")

    return app
