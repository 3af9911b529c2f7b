"""Per-cell forecasting of monthly fire counts with exact Shapley attribution.

The default model is a per-cell ridge regression of next month's count on the
current feature values and the last T counts. It is deliberately simple: every
attribution below is exact and testable, and the model slot is pluggable for
anything that exposes the same per-cell predictor surface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Protocol, runtime_checkable

import numpy as np

from .core import GridSpec, SpatioTemporalTensor

SHAPLEY_ENUMERATION_CAP = 20


class InsufficientHistoryError(ValueError):
    """Tensor too short for the configured history window and horizon."""


class ModelKind(str, Enum):
    LINEAR_RIDGE = "linear_ridge"
    PLUGIN = "plugin"


@dataclass(frozen=True)
class ForecastConfig:
    history_window: int = 6
    horizon: int = 3
    ridge_lambda: float = 1e-3
    model_kind: ModelKind = ModelKind.LINEAR_RIDGE
    plugin_factory: Callable[..., "CellPredictor"] | None = None

    def __post_init__(self):
        if self.history_window < 1 or self.horizon < 1:
            raise ValueError("history_window and horizon must be >= 1")
        if not (math.isfinite(self.ridge_lambda) and self.ridge_lambda >= 0):
            raise ValueError(f"ridge_lambda must be >= 0: {self.ridge_lambda!r}")


@runtime_checkable
class CellPredictor(Protocol):
    """Minimum surface a pluggable forecaster must expose for attribution."""

    grid: GridSpec
    feature_channels: tuple[str, ...]
    history_window: int
    regressor_means: np.ndarray  # (rows, cols, n_features + history_window)

    def predict_cell(self, i: int, j: int, x: np.ndarray) -> float: ...


@dataclass(frozen=True, eq=False)
class FittedForecaster:
    """Per-cell linear model: count(t+1) ~ features(t) + counts(t-T+1..t).

    weights[i, j] has length n_features + T with the feature weights first and
    the lag weights last, oldest lag first. regressor_means holds the training
    means of the same vector and doubles as the attribution baseline.
    """

    grid: GridSpec
    channels: tuple[str, ...]
    feature_channels: tuple[str, ...]
    history_window: int
    horizon: int
    weights: np.ndarray          # (rows, cols, n_features + T)
    intercepts: np.ndarray       # (rows, cols)
    regressor_means: np.ndarray  # (rows, cols, n_features + T)

    def __post_init__(self):
        for name in ("weights", "intercepts", "regressor_means"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        depth = len(self.feature_channels) + self.history_window
        if self.weights.shape != (self.grid.rows, self.grid.cols, depth):
            raise ValueError(f"weights shape {self.weights.shape} does not match grid/depth")

    def predict_cell(self, i: int, j: int, x: np.ndarray) -> float:
        """Raw linear response for one cell; no clamping (attribution surface)."""
        return float(self.weights[i, j] @ np.asarray(x, dtype=float) + self.intercepts[i, j])


def fit(tensor: SpatioTemporalTensor, cfg: ForecastConfig) -> FittedForecaster:
    """Fit the per-cell model over the tensor history.

    Deterministic given inputs. The ridge penalty is not applied to the
    intercept: regressors and targets are centered, the penalized system is
    solved on the centered data, and the intercept absorbs the means. A cell
    whose target is identically zero gets the documented degenerate fit of
    zero weights and zero intercept.
    """
    if cfg.model_kind is ModelKind.PLUGIN:
        if cfg.plugin_factory is None:
            raise ValueError("model_kind=plugin requires a plugin_factory")
        return cfg.plugin_factory(tensor, cfg)

    T = cfg.history_window
    n_months = len(tensor.timestamps)
    if n_months <= T + cfg.horizon:
        raise InsufficientHistoryError(
            f"insufficient history: need more than {T + cfg.horizon} months, got {n_months}"
        )
    counts = tensor.fire_counts
    feature_names = tensor.feature_channels
    feature_vals = np.stack(
        [tensor.values[:, tensor.channel_index(name)] for name in feature_names], axis=1
    ) if feature_names else np.zeros((n_months, 0, tensor.grid.rows, tensor.grid.cols))

    n_features = len(feature_names)
    depth = n_features + T
    n_samples = n_months - T
    rows, cols = tensor.grid.rows, tensor.grid.cols

    weights = np.zeros((rows, cols, depth))
    intercepts = np.zeros((rows, cols))
    means = np.zeros((rows, cols, depth))

    # Design rows for sample s (s = 0..n_samples-1, base month t = T-1+s):
    # [features at t, counts at t-T+1 .. t], target counts at t+1.
    sample_t = np.arange(T - 1, n_months - 1)
    for i in range(rows):
        for j in range(cols):
            X = np.empty((n_samples, depth))
            X[:, :n_features] = feature_vals[sample_t, :, i, j]
            for lag in range(T):
                X[:, n_features + lag] = counts[sample_t - T + 1 + lag, i, j]
            y = counts[sample_t + 1, i, j]
            mu = X.mean(axis=0)
            means[i, j] = mu
            if not y.any():
                continue
            Xc = X - mu
            yc = y - y.mean()
            if cfg.ridge_lambda > 0:
                gram = Xc.T @ Xc + cfg.ridge_lambda * np.eye(depth)
                w = np.linalg.solve(gram, Xc.T @ yc)
            else:
                w, *_ = np.linalg.lstsq(Xc, yc, rcond=None)
            weights[i, j] = w
            intercepts[i, j] = y.mean() - w @ mu

    return FittedForecaster(
        grid=tensor.grid,
        channels=tensor.channels,
        feature_channels=feature_names,
        history_window=T,
        horizon=cfg.horizon,
        weights=weights,
        intercepts=intercepts,
        regressor_means=means,
    )


def predict(model: FittedForecaster, history: SpatioTemporalTensor) -> np.ndarray:
    """Recursive one-step rollout for the model horizon.

    history must cover exactly the model's T months with the training
    channels. Exogenous features persist at their last observed values while
    predicted counts feed the lag window. Predictions are clamped at zero,
    both in the output and in the fed-back lags.

    Returns an array of shape (horizon, rows, cols).
    """
    T = model.history_window
    if len(history.timestamps) != T:
        raise ValueError(f"history must cover exactly {T} months, got {len(history.timestamps)}")
    if history.channels != model.channels:
        raise ValueError("history channels do not match the fitted model")
    if (history.grid.rows, history.grid.cols) != (model.grid.rows, model.grid.cols):
        raise ValueError("history grid does not match the fitted model")

    n_features = len(model.feature_channels)
    feats_last = np.stack(
        [history.values[-1, history.channel_index(name)] for name in model.feature_channels]
    ) if n_features else np.zeros((0, model.grid.rows, model.grid.cols))
    lags = [history.fire_counts[t] for t in range(T)]  # oldest first

    w_feat = model.weights[:, :, :n_features]
    w_lag = model.weights[:, :, n_features:]
    out = np.empty((model.horizon, model.grid.rows, model.grid.cols))
    for step in range(model.horizon):
        pred = model.intercepts.copy()
        if n_features:
            pred += np.einsum("ijf,fij->ij", w_feat, feats_last)
        for lag in range(T):
            pred += w_lag[:, :, lag] * lags[lag]
        np.maximum(pred, 0.0, out=pred)
        out[step] = pred
        lags = lags[1:] + [pred]
    return out


def shapley_exact(
    f: Callable[[np.ndarray], float],
    x: np.ndarray,
    baseline: np.ndarray,
    max_features: int = SHAPLEY_ENUMERATION_CAP,
) -> np.ndarray:
    """Exact Shapley values of f at x against a baseline reference point.

    Enumerates all 2^n coalitions; features absent from a coalition take their
    baseline value. Satisfies efficiency: phi.sum() == f(x) - f(baseline) up
    to float summation error. f must be deterministic.
    """
    x = np.asarray(x, dtype=float)
    baseline = np.asarray(baseline, dtype=float)
    if x.shape != baseline.shape or x.ndim != 1:
        raise ValueError("x and baseline must be 1-d vectors of equal length")
    n = x.size
    if n > max_features:
        raise ValueError(f"{n} features exceed the enumeration cap of {max_features}")

    values = np.empty(2**n)
    members = np.zeros(n, dtype=bool)
    for mask in range(2**n):
        for bit in range(n):
            members[bit] = mask >> bit & 1
        values[mask] = f(np.where(members, x, baseline))

    fact = [math.factorial(s) for s in range(n + 1)]
    weight = [fact[s] * fact[n - s - 1] / fact[n] for s in range(n)]
    phi = np.zeros(n)
    for mask in range(2**n):
        size = mask.bit_count()
        for bit in range(n):
            if not mask >> bit & 1:
                phi[bit] += weight[size] * (values[mask | 1 << bit] - values[mask])
    return phi


@dataclass(frozen=True, eq=False)
class AttributionFrame:
    """Signed Shapley values per (month, feature, cell), plus predictions.

    Each entry explains the one-step-ahead prediction targeted at its month,
    computed from the previous month's feature values. Lagged counts are
    pinned at their training means on both sides of the comparison, so their
    contribution is folded into the per-cell baseline and local accuracy holds
    per month: phi.sum(features) == predicted - baseline.
    """

    grid: GridSpec
    timestamps: tuple[str, ...]
    features: tuple[str, ...]
    phi: np.ndarray        # (n_months, n_features, rows, cols)
    predicted: np.ndarray  # (n_months, rows, cols)
    baseline: np.ndarray   # (rows, cols)

    def __post_init__(self):
        for name in ("phi", "predicted", "baseline"):
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def city_phi(self) -> np.ndarray:
        """(n_months, n_features) signed city-wide totals for the S&D view."""
        return self.phi.sum(axis=(2, 3))

    def city_predicted(self) -> np.ndarray:
        return self.predicted.sum(axis=(1, 2))

    def abs_phi_sum(self) -> np.ndarray:
        """(n_months, rows, cols) sum of |phi| over features, for sector sizing."""
        return np.abs(self.phi).sum(axis=1)

    def to_json(self, tensor: SpatioTemporalTensor) -> dict:
        """Full export: city-wide per-month series plus per-cell aggregates.

        tensor supplies the actual counts for the same window the frame was
        computed from.
        """
        if self.timestamps != tensor.timestamps[1:]:
            raise ValueError("attribution frame months do not align with the tensor")
        actual = tensor.fire_counts[1:].sum(axis=(1, 2))
        predicted = self.city_predicted()
        city = self.city_phi()
        abs_phi = self.abs_phi_sum()
        per_cell = [
            {
                "i": i,
                "j": j,
                "baseline": float(self.baseline[i, j]),
                "abs_phi_sum": [float(v) for v in abs_phi[:, i, j]],
            }
            for i in range(self.grid.rows)
            for j in range(self.grid.cols)
        ]
        return {
            "timestamps": list(self.timestamps),
            "features": list(self.features),
            "per_t": [
                {
                    "month": month,
                    "predicted": float(predicted[t]),
                    "actual": float(actual[t]),
                    "phi_by_feature": {
                        name: float(city[t, c]) for c, name in enumerate(self.features)
                    },
                }
                for t, month in enumerate(self.timestamps)
            ],
            "per_cell": per_cell,
        }


def attribute(model, tensor: SpatioTemporalTensor) -> AttributionFrame:
    """Shapley attribution of every month's one-step prediction, per cell.

    For the linear model the closed form w_c * (x_c - mu_c) is used; any other
    CellPredictor goes through coalition enumeration. Both agree for linear
    predictors, which is the equivalence the tests pin down.
    """
    if (tensor.grid.rows, tensor.grid.cols) != (model.grid.rows, model.grid.cols):
        raise ValueError("tensor grid does not match the fitted model")
    feature_names = model.feature_channels
    if any(name not in tensor.channels for name in feature_names):
        raise ValueError("tensor is missing feature channels used by the model")

    n_features = len(feature_names)
    rows, cols = tensor.grid.rows, tensor.grid.cols
    if n_features:
        feature_vals = np.stack(
            [tensor.values[:, tensor.channel_index(name)] for name in feature_names], axis=1
        )
    else:
        feature_vals = np.zeros((len(tensor.timestamps), 0, rows, cols))
    months = tensor.timestamps[1:]
    x_feat = feature_vals[:-1]  # (n_months, F, rows, cols), month m explained by m-1
    mu_feat = model.regressor_means[:, :, :n_features]
    mu_lag = model.regressor_means[:, :, n_features:]

    if isinstance(model, FittedForecaster):
        w_feat = model.weights[:, :, :n_features]
        w_lag = model.weights[:, :, n_features:]
        phi = np.einsum("ijf,tfij->tfij", w_feat, x_feat - np.moveaxis(mu_feat, 2, 0))
        lag_part = np.einsum("ijl,ijl->ij", w_lag, mu_lag)
        predicted = (
            np.einsum("ijf,tfij->tij", w_feat, x_feat) + model.intercepts + lag_part
        )
        base = (
            np.einsum("ijf,ijf->ij", w_feat, mu_feat) + model.intercepts + lag_part
        )
    else:
        phi = np.zeros((len(months), n_features, rows, cols))
        predicted = np.zeros((len(months), rows, cols))
        base = np.zeros((rows, cols))
        for i in range(rows):
            for j in range(cols):
                lag_ref = mu_lag[i, j]

                def f(feats: np.ndarray, i=i, j=j, lag_ref=lag_ref) -> float:
                    return model.predict_cell(i, j, np.concatenate([feats, lag_ref]))

                base[i, j] = f(mu_feat[i, j])
                for t in range(len(months)):
                    phi[t, :, i, j] = shapley_exact(f, x_feat[t, :, i, j], mu_feat[i, j])
                    predicted[t, i, j] = f(x_feat[t, :, i, j])

    return AttributionFrame(
        grid=tensor.grid,
        timestamps=tuple(months),
        features=feature_names,
        phi=phi,
        predicted=predicted,
        baseline=base,
    )
