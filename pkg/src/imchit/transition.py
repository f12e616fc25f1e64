"""Row-wise evaluation of the lower and upper transition operators.

Applying the lower operator to a function ``f`` minimizes ``p . f`` over
each state's row polytope independently; the upper operator maximizes.
Besides the value vector, each application returns the policy of extreme
points attaining it row by row, which is what the policy-iteration solver
consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lp
from .model import Model, Policy, RowPolytopeV


@dataclass
class OperatorResult:
    """Operator value plus one attaining extreme point per row."""

    value: np.ndarray
    policy: Policy


def _vertex_cache(model: Model):
    """Stacked vertex matrix over all V-rep rows, built once per model."""
    if model._vcache is None:
        blocks = []
        slices: list[tuple[int, int] | None] = []
        start = 0
        for row in model.rows:
            if isinstance(row, RowPolytopeV):
                blocks.append(row.vertices)
                slices.append((start, start + row.num_vertices))
                start += row.num_vertices
            else:
                slices.append(None)
        stacked = np.concatenate(blocks, axis=0) if blocks else None
        model._vcache = (stacked, slices)
    return model._vcache


def _apply(model: Model, f: np.ndarray, sign: float) -> OperatorResult:
    """Shared body: sign=+1 minimizes per row, sign=-1 maximizes."""
    f = np.asarray(f, dtype=float)
    if f.shape != (model.size,):
        raise ValueError(f"function must have shape ({model.size},)")
    stacked, slices = _vertex_cache(model)
    dots = stacked @ (sign * f) if stacked is not None else None
    value = np.empty(model.size)
    selectors: list = []
    for x, row in enumerate(model.rows):
        if slices[x] is not None:
            lo, hi = slices[x]
            seg = dots[lo:hi]
            k = int(np.argmin(seg))
            value[x] = sign * seg[k]
            selectors.append(k)
        else:
            sol = lp.minimize_row(row, sign * f)
            value[x] = float(f @ sol.vertex)
            selectors.append(sol.basis)
    return OperatorResult(value, Policy(tuple(selectors)))


def lower_apply(model: Model, f: np.ndarray) -> OperatorResult:
    """Lower transition operator: row-wise minimum of ``p . f``."""
    return _apply(model, f, 1.0)


def upper_apply(model: Model, f: np.ndarray) -> OperatorResult:
    """Upper transition operator: row-wise maximum of ``p . f``."""
    return _apply(model, f, -1.0)


def lower_apply_n(model: Model, f: np.ndarray, n: int) -> np.ndarray:
    """Value of the n-fold composition of the lower operator."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    value = np.asarray(f, dtype=float)
    for _ in range(n):
        value = lower_apply(model, value).value
    return value


def upper_apply_n(model: Model, f: np.ndarray, n: int) -> np.ndarray:
    """Value of the n-fold composition of the upper operator."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    value = np.asarray(f, dtype=float)
    for _ in range(n):
        value = upper_apply(model, value).value
    return value
