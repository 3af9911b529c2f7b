"""JSON configuration shared by the CLI and the HTTP service."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .core import GeoPoint, GridSpec
from .forecast import ForecastConfig
from .mobility import TravelParams


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class AppConfig:
    fires_csv: Path
    stations_csv: Path
    features_csv: Path | None
    grid: GridSpec
    window: tuple[str, str] | None
    travel: TravelParams
    k_minutes: float
    forecast: ForecastConfig
    job_workers: int = 2
    ui_dir: Path | None = None


def load_config(path: str | Path) -> AppConfig:
    """Load and validate a config file; dataset paths resolve relative to it."""
    path = Path(path)
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from None
    base = path.parent

    def resolve(key: str, required: bool = True) -> Path | None:
        value = raw.get(key)
        if value is None:
            if required:
                raise ConfigError(f"config missing {key!r}")
            return None
        p = (base / value).resolve()
        if not p.exists():
            raise ConfigError(f"{key} does not exist: {p}")
        return p

    try:
        g = raw["grid"]
        grid = GridSpec(
            origin=GeoPoint(lat=float(g["origin_lat"]), lng=float(g["origin_lng"])),
            cell_size_km=float(g.get("cell_size_km", 3.0)),
            rows=int(g["rows"]),
            cols=int(g["cols"]),
        )
    except KeyError as exc:
        raise ConfigError(f"config grid missing {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid: {exc}") from None

    window = raw.get("window")
    if window is not None:
        if not (isinstance(window, list) and len(window) == 2):
            raise ConfigError("window must be [start, end] months or null")
        window = (str(window[0]), str(window[1]))

    t = raw.get("travel", {})
    travel = TravelParams(
        speed_kmh=float(t.get("speed_kmh", 40.0)),
        detour_factor=float(t.get("detour_factor", 1.4)),
    )
    f = raw.get("forecast", {})
    fc = ForecastConfig(
        history_window=int(f.get("history_window", 6)),
        horizon=int(f.get("horizon", 3)),
        ridge_lambda=float(f.get("ridge_lambda", 1e-3)),
    )
    ui_dir = raw.get("ui_dir")
    return AppConfig(
        fires_csv=resolve("fires_csv"),
        stations_csv=resolve("stations_csv"),
        features_csv=resolve("features_csv", required=False),
        grid=grid,
        window=window,
        travel=travel,
        k_minutes=float(raw.get("k_minutes", 9.0)),
        forecast=fc,
        job_workers=int(raw.get("job_workers", 2)),
        ui_dir=(base / ui_dir).resolve() if ui_dir else None,
    )
