"""NSGA-II over candidate station placements inside a target area.

Genomes are continuous (lat, lng) pairs, varied by simulated binary crossover
and polynomial mutation, repaired into the area by rejection sampling with a
bisection fallback. Runs are fully deterministic under a fixed seed. The
returned set is the final non-dominated front plus the pairwise Pearson
correlations between objectives across that front.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import FireRecord, GeoPoint, GridSpec, Station
from .criteria import Criterion, EvaluationContext, TargetArea
from .mobility import TravelParams

GENOME_DEDUP_TOL = 1e-9


@dataclass(frozen=True)
class GAConfig:
    population: int = 100
    generations: int = 200
    crossover_prob: float = 0.9
    mutation_prob: float | None = None  # default 1 / (2 * k_new), set per problem
    eta_crossover: float = 15.0
    eta_mutation: float = 20.0
    seed: int = 0

    def __post_init__(self):
        if self.population < 4 or self.population % 2 != 0:
            raise ValueError(f"population must be even and >= 4: {self.population}")
        if self.generations < 1:
            raise ValueError(f"generations must be >= 1: {self.generations}")
        for name in ("crossover_prob", "mutation_prob"):
            value = getattr(self, name)
            if value is not None and not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]: {value}")
        if self.eta_crossover <= 0 or self.eta_mutation <= 0:
            raise ValueError("distribution indices must be positive")


@dataclass
class CandidateSolution:
    genome: np.ndarray          # (k_new, 2) of (lat, lng)
    objectives: np.ndarray      # (m,) in the problem's criteria order
    rank: int = 0
    crowding: float = 0.0
    normalized: np.ndarray | None = None  # 1 = best per objective, set on results


@dataclass(frozen=True)
class OptimizationProblem:
    fires: Sequence[FireRecord]
    stations: Sequence[Station]
    area: TargetArea
    criteria: Sequence[Criterion]
    k_new: int
    grid: GridSpec
    travel: TravelParams
    k_minutes: float = 9.0
    new_stations_only: bool = False

    def __post_init__(self):
        if self.k_new < 1:
            raise ValueError(f"k_new must be >= 1: {self.k_new}")


@dataclass(frozen=True, eq=False)
class ParetoResult:
    criteria: tuple[Criterion, ...]
    solutions: tuple[CandidateSolution, ...]
    correlation: np.ndarray | None
    zero_variance: tuple[int, ...]
    config: GAConfig
    initial_objectives: np.ndarray  # audit trail: objectives of generation 0

    def to_json(self) -> dict:
        def finite_or_none(c: float) -> float | None:
            return None if math.isinf(c) else c

        return {
            "criteria": [c.value for c in self.criteria],
            "seed": self.config.seed,
            "config": {
                "population": self.config.population,
                "generations": self.config.generations,
                "crossover_prob": self.config.crossover_prob,
                "mutation_prob": self.config.mutation_prob,
                "eta_crossover": self.config.eta_crossover,
                "eta_mutation": self.config.eta_mutation,
            },
            "solutions": [
                {
                    "genome": [[float(lat), float(lng)] for lat, lng in sol.genome],
                    "objectives": {
                        c.value: float(v) for c, v in zip(self.criteria, sol.objectives)
                    },
                    "normalized_objectives": {
                        c.value: float(v) for c, v in zip(self.criteria, sol.normalized)
                    },
                    "rank": sol.rank,
                    "crowding": finite_or_none(sol.crowding),
                }
                for sol in self.solutions
            ],
            "correlation": None
            if self.correlation is None
            else [[float(v) for v in row] for row in self.correlation],
            "zero_variance_criteria": [self.criteria[i].value for i in self.zero_variance],
        }


# --------------------------------------------------------------------------
# Core NSGA-II operators
# --------------------------------------------------------------------------


def non_dominated_sort(objectives: Sequence[Sequence[float]]) -> list[list[int]]:
    """Fast non-dominated sort (minimization) into fronts of indices.

    a dominates b when a <= b in every objective and a < b in at least one.
    Front r holds exactly the points that are non-dominated once fronts
    0..r-1 are removed.
    """
    objs = np.asarray(objectives, dtype=float)
    if objs.size == 0:
        return []
    n = objs.shape[0]
    le = (objs[:, None, :] <= objs[None, :, :]).all(axis=2)
    lt = (objs[:, None, :] < objs[None, :, :]).any(axis=2)
    dominates = le & lt

    dominated_by = dominates.sum(axis=0)  # how many points dominate column j
    fronts: list[list[int]] = []
    remaining = dominated_by.copy()
    assigned = np.zeros(n, dtype=bool)
    while not assigned.all():
        current = np.where(~assigned & (remaining == 0))[0]
        fronts.append([int(i) for i in current])
        assigned[current] = True
        remaining = remaining - dominates[current].sum(axis=0)
    return fronts


def crowding_distance(objectives: Sequence[Sequence[float]]) -> np.ndarray:
    """Crowding distance within one front.

    Boundary solutions of each objective get +inf; interior ones accumulate
    the normalized gap between their neighbors. An objective with zero range
    contributes nothing. Fronts of size <= 2 are all-boundary, hence all inf.
    """
    objs = np.asarray(objectives, dtype=float)
    n = objs.shape[0]
    if n == 0:
        return np.empty(0)
    if n <= 2:
        return np.full(n, np.inf)
    distance = np.zeros(n)
    for m in range(objs.shape[1]):
        order = np.argsort(objs[:, m], kind="stable")
        lo, hi = objs[order[0], m], objs[order[-1], m]
        distance[order[0]] = distance[order[-1]] = np.inf
        span = hi - lo
        if span <= 0:
            continue
        gaps = (objs[order[2:], m] - objs[order[:-2], m]) / span
        distance[order[1:-1]] += gaps
    return distance


def tournament_select(population: Sequence[CandidateSolution], rng: np.random.Generator) -> CandidateSolution:
    """Binary tournament on (rank, crowding); full ties keep the first draw."""
    if len(population) < 2:
        raise ValueError("tournament needs a population of at least 2")
    a = population[int(rng.integers(len(population)))]
    b = population[int(rng.integers(len(population)))]
    if b.rank < a.rank:
        return b
    if b.rank == a.rank and b.crowding > a.crowding:
        return b
    return a


def _sbx_pair(y1: float, y2: float, eta: float, u: float) -> tuple[float, float]:
    if abs(y1 - y2) < 1e-14:
        return y1, y2
    if u <= 0.5:
        beta = (2.0 * u) ** (1.0 / (eta + 1.0))
    else:
        beta = (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1.0))
    c1 = 0.5 * ((1.0 + beta) * y1 + (1.0 - beta) * y2)
    c2 = 0.5 * ((1.0 - beta) * y1 + (1.0 + beta) * y2)
    return c1, c2


def _polynomial_mutation(y: float, lo: float, hi: float, eta: float, u: float) -> float:
    span = hi - lo
    if span <= 0:
        return y
    delta1 = (y - lo) / span
    delta2 = (hi - y) / span
    if u < 0.5:
        delta_q = (2.0 * u + (1.0 - 2.0 * u) * (1.0 - delta1) ** (eta + 1.0)) ** (
            1.0 / (eta + 1.0)
        ) - 1.0
    else:
        delta_q = 1.0 - (
            2.0 * (1.0 - u) + (2.0 * u - 1.0) * (1.0 - delta2) ** (eta + 1.0)
        ) ** (1.0 / (eta + 1.0))
    return y + delta_q * span


def _repair_into_area(
    lat: float, lng: float, area: TargetArea, bounds: tuple[float, float, float, float], rng
) -> tuple[float, float]:
    lat_min, lat_max, lng_min, lng_max = bounds
    lat = min(max(lat, lat_min), lat_max)
    lng = min(max(lng, lng_min), lng_max)
    if area.contains(GeoPoint(lat=lat, lng=lng)):
        return lat, lng
    for _ in range(100):
        cand_lat = rng.uniform(lat_min, lat_max)
        cand_lng = rng.uniform(lng_min, lng_max)
        if area.contains(GeoPoint(lat=cand_lat, lng=cand_lng)):
            return cand_lat, cand_lng
    # Bisect from the interior anchor toward the stray point.
    anchor = area.interior_point()
    lo, hi = 0.0, 1.0
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        p_lat = anchor.lat + mid * (lat - anchor.lat)
        p_lng = anchor.lng + mid * (lng - anchor.lng)
        if area.contains(GeoPoint(lat=p_lat, lng=p_lng)):
            lo = mid
        else:
            hi = mid
    return anchor.lat + lo * (lat - anchor.lat), anchor.lng + lo * (lng - anchor.lng)


def crossover_mutate(
    a: np.ndarray,
    b: np.ndarray,
    cfg: GAConfig,
    area: TargetArea,
    rng: np.random.Generator,
    mutation_prob: float | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """SBX plus polynomial mutation per coordinate, repaired into the area."""
    p_m = mutation_prob if mutation_prob is not None else cfg.mutation_prob
    if p_m is None:
        p_m = 1.0 / a.size
    bounds = area.bbox()
    lat_min, lat_max, lng_min, lng_max = bounds

    flat_a = np.asarray(a, dtype=float).reshape(-1).copy()
    flat_b = np.asarray(b, dtype=float).reshape(-1).copy()
    for idx in range(flat_a.size):
        if rng.random() < cfg.crossover_prob:
            flat_a[idx], flat_b[idx] = _sbx_pair(
                flat_a[idx], flat_b[idx], cfg.eta_crossover, rng.random()
            )
    for child in (flat_a, flat_b):
        for idx in range(child.size):
            if rng.random() < p_m:
                lo, hi = (lat_min, lat_max) if idx % 2 == 0 else (lng_min, lng_max)
                child[idx] = _polynomial_mutation(
                    child[idx], lo, hi, cfg.eta_mutation, rng.random()
                )

    out = []
    for child in (flat_a, flat_b):
        genome = child.reshape(-1, 2)
        for g in range(genome.shape[0]):
            genome[g] = _repair_into_area(genome[g, 0], genome[g, 1], area, bounds, rng)
        out.append(genome)
    return out[0], out[1]


def objective_correlations(objectives: Sequence[Sequence[float]]) -> tuple[np.ndarray, list[int]]:
    """Pearson correlation matrix over Pareto objective values.

    Objectives with zero variance get r = 0 off-diagonal and are reported in
    the second return value so callers can flag them.
    """
    objs = np.asarray(objectives, dtype=float)
    if objs.ndim != 2 or objs.shape[0] < 2:
        raise ValueError("need at least 2 solutions; skip the correlation matrix")
    m = objs.shape[1]
    centered = objs - objs.mean(axis=0)
    norms = np.sqrt((centered**2).sum(axis=0))
    zero = [i for i in range(m) if norms[i] == 0.0]
    corr = np.eye(m)
    for i in range(m):
        for j in range(i + 1, m):
            if norms[i] == 0.0 or norms[j] == 0.0:
                r = 0.0
            else:
                r = float(centered[:, i] @ centered[:, j] / (norms[i] * norms[j]))
                r = min(1.0, max(-1.0, r))
            corr[i, j] = corr[j, i] = r
    return corr, zero


# --------------------------------------------------------------------------
# The generational loop
# --------------------------------------------------------------------------


def _assign_ranks(population: list[CandidateSolution]) -> list[list[int]]:
    fronts = non_dominated_sort([sol.objectives for sol in population])
    for rank, front in enumerate(fronts):
        distances = crowding_distance([population[i].objectives for i in front])
        for i, d in zip(front, distances):
            population[i].rank = rank
            population[i].crowding = float(d)
    return fronts


def _environmental_selection(
    merged: list[CandidateSolution], size: int
) -> list[CandidateSolution]:
    fronts = _assign_ranks(merged)
    survivors: list[CandidateSolution] = []
    for front in fronts:
        if len(survivors) + len(front) <= size:
            survivors.extend(merged[i] for i in front)
        else:
            need = size - len(survivors)
            by_crowding = sorted(front, key=lambda i: (-merged[i].crowding, i))
            survivors.extend(merged[i] for i in by_crowding[:need])
            break
    return survivors


def _dedupe_front(solutions: list[CandidateSolution]) -> list[CandidateSolution]:
    kept: list[CandidateSolution] = []
    for sol in solutions:
        if not any(
            np.all(np.abs(sol.genome - other.genome) <= GENOME_DEDUP_TOL) for other in kept
        ):
            kept.append(sol)
    return kept


def run(
    problem: OptimizationProblem,
    cfg: GAConfig,
    on_generation: Callable[[int, int], None] | None = None,
) -> ParetoResult:
    """Run NSGA-II and return the deduplicated final front with correlations."""
    rng = np.random.default_rng(cfg.seed)
    ctx = EvaluationContext(
        fires=problem.fires,
        existing=problem.stations,
        criteria=problem.criteria,
        grid=problem.grid,
        params=problem.travel,
        k=problem.k_minutes,
        area=problem.area,
        new_stations_only=problem.new_stations_only,
    )
    p_m = cfg.mutation_prob if cfg.mutation_prob is not None else 1.0 / (2 * problem.k_new)

    def spawn() -> np.ndarray:
        points = [problem.area.sample_point(rng) for _ in range(problem.k_new)]
        return np.array([[p.lat, p.lng] for p in points])

    population = [
        CandidateSolution(genome=g, objectives=ctx.evaluate_points(g))
        for g in (spawn() for _ in range(cfg.population))
    ]
    initial_objectives = np.array([sol.objectives for sol in population])

    for gen in range(cfg.generations):
        _assign_ranks(population)
        offspring: list[CandidateSolution] = []
        while len(offspring) < cfg.population:
            pa = tournament_select(population, rng)
            pb = tournament_select(population, rng)
            g1, g2 = crossover_mutate(pa.genome, pb.genome, cfg, problem.area, rng, p_m)
            offspring.append(CandidateSolution(genome=g1, objectives=ctx.evaluate_points(g1)))
            if len(offspring) < cfg.population:
                offspring.append(
                    CandidateSolution(genome=g2, objectives=ctx.evaluate_points(g2))
                )
        population = _environmental_selection(population + offspring, cfg.population)
        if on_generation is not None:
            on_generation(gen + 1, cfg.generations)

    fronts = _assign_ranks(population)
    front0 = _dedupe_front([population[i] for i in fronts[0]])
    final_objs = np.array([sol.objectives for sol in front0])
    for sol, norm in zip(front0, _normalize_objectives(final_objs)):
        sol.normalized = norm
    distances = crowding_distance(final_objs)
    for sol, d in zip(front0, distances):
        sol.rank, sol.crowding = 0, float(d)

    if len(front0) >= 2:
        correlation, zero = objective_correlations(final_objs)
    else:
        correlation, zero = None, []
    return ParetoResult(
        criteria=ctx.criteria,
        solutions=tuple(front0),
        correlation=correlation,
        zero_variance=tuple(zero),
        config=cfg,
        initial_objectives=initial_objectives,
    )


def _normalize_objectives(objs: np.ndarray) -> np.ndarray:
    """Min-max per objective, inverted so 1 is best (all-equal maps to 1)."""
    norm = np.ones_like(objs)
    for m in range(objs.shape[1]):
        lo, hi = objs[:, m].min(), objs[:, m].max()
        if hi > lo:
            norm[:, m] = (hi - objs[:, m]) / (hi - lo)
    return norm
