"""Model builders shared across the test modules."""

from __future__ import annotations

import numpy as np

from imchit import (Constraint, Model, RowPolytopeH, RowPolytopeV, StateSpace,
                    TargetSet, check_reachability)


def point_mass(n: int, i: int) -> np.ndarray:
    v = np.zeros(n)
    v[i] = 1.0
    return v


def precise_model(matrix: np.ndarray, target: set[int]) -> Model:
    """Wrap a row-stochastic matrix as a one-vertex-per-row model."""
    matrix = np.asarray(matrix, dtype=float)
    n = matrix.shape[0]
    rows = tuple(RowPolytopeV(matrix[x][None, :]) for x in range(n))
    return Model(StateSpace(tuple(f"s{i}" for i in range(n))),
                 TargetSet(target), rows)


def gambler_model(n: int) -> Model:
    """Symmetric walk on 0..n with absorbing ends, target {0, n}."""
    size = n + 1
    matrix = np.zeros((size, size))
    matrix[0, 0] = matrix[n, n] = 1.0
    for x in range(1, n):
        matrix[x, x - 1] = matrix[x, x + 1] = 0.5
    return precise_model(matrix, {0, n})


def line_model() -> Model:
    """Deterministic chain 0 -> 1 -> 2 -> 3 with 3 the absorbing target."""
    rows = tuple(RowPolytopeV(point_mass(4, min(x + 1, 3))[None, :])
                 for x in range(4))
    return Model(StateSpace(("0", "1", "2", "3")), TargetSet({3}), rows)


def isolated_cycle_model() -> Model:
    """States c, d cycle between themselves and never reach the target e."""
    rows = (RowPolytopeV(point_mass(5, 1)[None, :]),
            RowPolytopeV(point_mass(5, 4)[None, :]),
            RowPolytopeV(point_mass(5, 3)[None, :]),
            RowPolytopeV(point_mass(5, 2)[None, :]),
            RowPolytopeV(point_mass(5, 4)[None, :]))
    return Model(StateSpace(("a", "b", "c", "d", "e")), TargetSet({4}), rows)


def two_choice_model() -> Model:
    """Two states; row 0 picks between hitting rates 0.5 and 0.2.

    Hand oracle: h(0) = 1 / p(0 -> 1), so the candidate hitting times are
    2.0 and 5.0.
    """
    rows = (RowPolytopeV(np.array([[0.5, 0.5], [0.8, 0.2]])),
            RowPolytopeV(np.array([[0.0, 1.0]])))
    return Model(StateSpace(("a", "b")), TargetSet({1}), rows)


def box_row(n: int, lower: np.ndarray, upper: np.ndarray) -> RowPolytopeH:
    """Interval constraints lower <= p <= upper on top of the simplex."""
    cons = []
    for y in range(n):
        e = point_mass(n, y)
        if lower[y] > 0.0:
            cons.append(Constraint(e, ">=", float(lower[y])))
        if upper[y] < 1.0:
            cons.append(Constraint(e, "<=", float(upper[y])))
    return RowPolytopeH(n, tuple(cons))


def random_vrep_model(rng: np.random.Generator, size_choices=(3, 4, 5),
                      max_vertices: int = 3) -> Model:
    """Random vertex-specified model with a random non-trivial target.

    Resamples until the reachability check passes (flat-Dirichlet rows
    make failures vanishingly rare).
    """
    while True:
        n = int(rng.choice(size_choices))
        rows = tuple(
            RowPolytopeV(rng.dirichlet(np.ones(n),
                                       size=int(rng.integers(1, max_vertices + 1))))
            for _ in range(n))
        target = set(map(int, rng.choice(n, size=int(rng.integers(1, n)),
                                         replace=False)))
        model = Model(StateSpace(tuple(f"s{i}" for i in range(n))),
                      TargetSet(target), rows)
        if check_reachability(model).holds:
            return model


def random_mixed_model(rng: np.random.Generator, size_choices=(2, 3, 4, 5)) -> Model:
    """Random model mixing vertex rows and feasible constraint rows."""
    n = int(rng.choice(size_choices))
    rows = []
    for _ in range(n):
        if rng.random() < 0.5:
            rows.append(RowPolytopeV(
                rng.dirichlet(np.ones(n), size=int(rng.integers(1, 5)))))
        else:
            center = rng.dirichlet(np.ones(n))
            spread = rng.uniform(0.05, 0.6)
            lower = np.maximum(center - spread, 0.0)
            upper = np.minimum(center + spread, 1.0)
            rows.append(box_row(n, lower, upper))
    target = set(map(int, rng.choice(n, size=int(rng.integers(1, n)),
                                     replace=False)))
    return Model(StateSpace(tuple(f"s{i}" for i in range(n))),
                 TargetSet(target), tuple(rows))
