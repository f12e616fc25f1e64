"""Random-model generator and policy-iteration benchmark harness.

Each trial samples a model whose row polytopes are convex hulls of pmfs
drawn uniformly from the probability simplex (normalized i.i.d. unit-rate
exponentials), with the last state as the singleton target, and records
how many iterations the lower-bound policy iteration needs.  Sub-seeds
are derived from (master seed, size, trial, regeneration), so results are
reproducible regardless of scheduling.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ImcError
from .model import Model, RowPolytopeV, StateSpace, TargetSet
from .reachability import check_reachability
from .solvers import solve_policy

log = logging.getLogger(__name__)

# flat-Dirichlet rows make unreachable targets a measure-zero event, so a
# handful of regenerations is already absurdly unlikely
_MAX_REGENERATIONS = 100

CSV_COLUMNS = ("size", "trial", "iterations", "residual", "wall_time_s",
               "regenerations", "seed_used")


@dataclass(frozen=True)
class BenchConfig:
    sizes: tuple[int, ...]
    vertices_per_row: int = 50
    trials: int = 50
    seed: int = 0
    tol: float = 1e-9
    init: str = "greedy"

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes or min(self.sizes) < 2:
            raise ValueError("sizes must be integers >= 2")
        if self.vertices_per_row < 1:
            raise ValueError("vertices_per_row must be positive")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")


@dataclass(frozen=True)
class TrialRecord:
    size: int
    trial_index: int
    iterations: int
    wall_time: float
    residual: float
    seed_used: int
    regenerations: int


def random_model(size: int, vertices_per_row: int, seed: int) -> Model:
    """Model with uniformly sampled row vertices and the last state as target."""
    if size < 2 or vertices_per_row < 1:
        raise ValueError("need size >= 2 and vertices_per_row >= 1")
    rng = np.random.default_rng(int(seed))
    draws = rng.exponential(1.0, size=(size * vertices_per_row, size))
    draws /= draws.sum(axis=1, keepdims=True)
    rows = tuple(
        RowPolytopeV(draws[x * vertices_per_row:(x + 1) * vertices_per_row])
        for x in range(size))
    states = StateSpace(tuple(f"s{i}" for i in range(size)))
    return Model(states, TargetSet({size - 1}), rows)


def _trial_seed(master: int, size: int, trial: int, regeneration: int) -> int:
    sequence = np.random.SeedSequence([int(master), int(size), int(trial),
                                       int(regeneration)])
    return int(sequence.generate_state(1, np.uint64)[0])


def _run_trial(config: BenchConfig, size: int, trial: int) -> TrialRecord:
    regenerations = 0
    while True:
        seed_used = _trial_seed(config.seed, size, trial, regenerations)
        model = random_model(size, config.vertices_per_row, seed_used)
        if check_reachability(model).holds:
            break
        regenerations += 1
        if regenerations > _MAX_REGENERATIONS:
            raise ImcError(
                f"size {size}, trial {trial}: no reachable model found")
    report = solve_policy(model, "lower", init=config.init, tol=config.tol)
    return TrialRecord(size=size, trial_index=trial,
                       iterations=report.iterations,
                       wall_time=report.wall_time, residual=report.residual,
                       seed_used=seed_used, regenerations=regenerations)


def run_experiment(config: BenchConfig, jobs: int = 1) -> list[TrialRecord]:
    """Run all trials; failed trials are logged and skipped, the rest kept.

    Records come back ordered by (size, trial), independent of ``jobs``.
    """
    tasks = [(size, trial)
             for size in config.sizes for trial in range(config.trials)]

    def run(task):
        size, trial = task
        try:
            return _run_trial(config, size, trial)
        except ImcError as exc:
            log.warning("size %d trial %d failed: %s", size, trial, exc)
            return None

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(run, tasks))
    else:
        outcomes = [run(task) for task in tasks]
    return [record for record in outcomes if record is not None]


def write_csv(records: list[TrialRecord], path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([r.size, r.trial_index, r.iterations,
                             format(r.residual, ".17g"),
                             format(r.wall_time, ".17g"),
                             r.regenerations, r.seed_used])


def iteration_histogram(records: list[TrialRecord]) -> dict[int, dict[int, int]]:
    """Iteration-count frequencies per model size, for plotting."""
    histogram: dict[int, dict[int, int]] = {}
    for r in records:
        by_iterations = histogram.setdefault(r.size, {})
        by_iterations[r.iterations] = by_iterations.get(r.iterations, 0) + 1
    return {size: dict(sorted(histogram[size].items()))
            for size in sorted(histogram)}
