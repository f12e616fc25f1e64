"""Vertex-returning linear programming over a single row polytope.

Constraint-specified rows are minimized by a dense two-phase simplex
method with Bland's anti-cycling rule, so the optimum is always attained
at a basic feasible solution, i.e. an extreme point of the row polytope.
Vertex-specified rows are minimized by an exhaustive scan.  Both paths
are deterministic: identical inputs give identical optima, vertices and
basis identifiers.

Standard form used for a row over ``n`` states with constraints
``a_i . p (rel_i) b_i``:

* columns ``0..n-1`` are the probabilities ``p``,
* one slack (``<=``) or surplus (``>=``) column per inequality, in
  constraint order,
* equality rows carry no extra column,
* row ``0`` is the simplex constraint ``sum(p) == 1``.

A basis identifier is the sorted tuple of basic column indices of this
standard form; it pins down exactly one vertex.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import Infeasible, SelectorOutOfRange
from .model import FEAS_TOL, RowPolytopeH, RowPolytopeV

PIVOT_TOL = 1e-10      # entering/leaving significance threshold
RATIO_TOL = 1e-12      # ratio-test tie threshold
PHASE1_TOL = 1e-8      # residual infeasibility accepted as zero


@dataclass
class LpSolution:
    """Optimal value, the attaining vertex, and its basis identifier."""

    optimum: float
    vertex: np.ndarray
    basis: int | tuple[int, ...]


def standard_form(row: RowPolytopeH) -> tuple[np.ndarray, np.ndarray, int]:
    """Equality standard form ``A x = b, x >= 0`` of a constraint row.

    Returns ``(A, b, num_structural)``; cached on the row object.
    """
    if row._std is None:
        n = row.num_states
        slacks = [i for i, c in enumerate(row.constraints) if c.rel != "="]
        ncols = n + len(slacks)
        m = 1 + len(row.constraints)
        a = np.zeros((m, ncols))
        b = np.zeros(m)
        a[0, :n] = 1.0
        b[0] = 1.0
        slack_col = n
        for i, c in enumerate(row.constraints):
            a[1 + i, :n] = c.a
            b[1 + i] = c.b
            if c.rel == "<=":
                a[1 + i, slack_col] = 1.0
                slack_col += 1
            elif c.rel == ">=":
                a[1 + i, slack_col] = -1.0
                slack_col += 1
        row._std = (a, b, ncols)
    return row._std


def _pivot(tab: np.ndarray, basis: list[int], row: int, col: int) -> None:
    tab[row] /= tab[row, col]
    factors = tab[:, col].copy()
    factors[row] = 0.0
    tab -= np.outer(factors, tab[row])
    tab[:, col] = 0.0
    tab[row, col] = 1.0
    basis[row] = col


def _bland(tab: np.ndarray, basis: list[int], allowed: int) -> None:
    """Run Bland's-rule pivoting until no allowed column can improve.

    ``allowed`` restricts entering candidates to columns ``< allowed``.
    The objective row is the last tableau row, the rhs the last column.
    """
    m = tab.shape[0] - 1
    # Bland's rule terminates finitely; the guard only catches numerical
    # breakdown of the tolerance tests.
    for _ in range(1000 * tab.shape[1] + 1000):
        enter = -1
        for j in range(allowed):
            if tab[-1, j] < -PIVOT_TOL:
                enter = j
                break
        if enter < 0:
            return
        leave = -1
        best = np.inf
        for i in range(m):
            aij = tab[i, enter]
            if aij > PIVOT_TOL:
                ratio = tab[i, -1] / aij
                if ratio < best - RATIO_TOL or (
                        abs(ratio - best) <= RATIO_TOL
                        and leave >= 0 and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            raise Infeasible("simplex step found no leaving row")
        _pivot(tab, basis, leave, enter)
    raise Infeasible("simplex failed to terminate")


def _phase1(row: RowPolytopeH) -> tuple[np.ndarray, list[int], int, float]:
    """Find a basic feasible solution via artificial variables.

    Returns ``(tableau, basis, num_structural, residual_infeasibility)``
    with the phase-one objective still in the last tableau row.
    """
    a, b, ncols = standard_form(row)
    m = a.shape[0]
    tab = np.zeros((m + 1, ncols + m + 1))
    sign = np.where(b < 0.0, -1.0, 1.0)
    tab[:m, :ncols] = a * sign[:, None]
    tab[:m, -1] = b * sign
    tab[np.arange(m), ncols + np.arange(m)] = 1.0
    basis = list(range(ncols, ncols + m))
    # reduced costs of min(sum of artificials) under the artificial basis
    tab[-1] = -tab[:m].sum(axis=0)
    tab[-1, ncols:ncols + m] = 0.0
    _bland(tab, basis, ncols)
    infeas = -tab[-1, -1]
    # pivot lingering zero-valued artificials out where a structural
    # column is available; rows where none exists are redundant
    for i in range(m):
        if basis[i] >= ncols:
            for j in range(ncols):
                if abs(tab[i, j]) > PIVOT_TOL:
                    _pivot(tab, basis, i, j)
                    break
    return tab, basis, ncols, infeas


def row_feasible(row: RowPolytopeH) -> bool:
    """Phase-one check that the constraint row admits at least one pmf."""
    try:
        infeas = _phase1(row)[3]
    except Infeasible:
        return False
    return infeas <= PHASE1_TOL


def minimize_row(row: RowPolytopeH, objective: np.ndarray) -> LpSolution:
    """Minimize ``objective . p`` over a constraint row polytope.

    Returns a minimizing basic feasible solution, i.e. an extreme point
    of the row polytope, with its basis identifier.
    """
    objective = np.asarray(objective, dtype=float)
    tab, basis, ncols, infeas = _phase1(row)
    if infeas > PHASE1_TOL:
        raise Infeasible(f"row polytope is empty (phase-one residual {infeas:.3g})")
    n = row.num_states
    obj = np.zeros(tab.shape[1])
    obj[:n] = objective
    for i, bv in enumerate(basis):
        if obj[bv] != 0.0:
            obj -= obj[bv] * tab[i]
    tab[-1] = obj
    _bland(tab, basis, ncols)
    x = np.zeros(ncols)
    for i, bv in enumerate(basis):
        if bv < ncols:
            x[bv] = tab[i, -1]
    vertex = x[:n].copy()
    vertex[(vertex < 0.0) & (vertex > -FEAS_TOL)] = 0.0
    vertex.flags.writeable = False
    basis_id = tuple(sorted(bv for bv in basis if bv < ncols))
    return LpSolution(float(objective @ vertex), vertex, basis_id)


def minimize_row_vrep(row: RowPolytopeV, objective: np.ndarray) -> LpSolution:
    """Scan all vertices; ties broken towards the smallest vertex index."""
    dots = row.vertices @ np.asarray(objective, dtype=float)
    k = int(np.argmin(dots))
    return LpSolution(float(dots[k]), row.vertices[k], k)


def vertex_from_basis(row: RowPolytopeH, basis: tuple[int, ...],
                      state_label: str = "?") -> np.ndarray:
    """Reconstruct the vertex named by a basis identifier.

    Solves the standard-form system restricted to the basic columns and
    re-checks every constraint; raises ``SelectorOutOfRange`` when the
    identifier is not a feasible basis of this row.
    """
    a, b, ncols = standard_form(row)
    cols = list(basis)
    if len(set(cols)) != len(cols) or not all(
            isinstance(c, (int, np.integer)) and 0 <= c < ncols for c in cols):
        raise SelectorOutOfRange(state_label, f"basis {basis} has invalid columns")
    if len(cols) > a.shape[0]:
        raise SelectorOutOfRange(state_label, "basis has more columns than rows")
    sol, _, rank, _ = np.linalg.lstsq(a[:, cols], b, rcond=None)
    if rank < len(cols):
        raise SelectorOutOfRange(state_label, "basis columns are linearly dependent")
    x = np.zeros(ncols)
    x[cols] = sol
    if np.max(np.abs(a @ x - b)) > FEAS_TOL:
        raise SelectorOutOfRange(state_label, "basis does not solve the row system")
    if x.min() < -FEAS_TOL:
        raise SelectorOutOfRange(state_label, "basic solution is infeasible")
    vertex = x[:row.num_states].copy()
    vertex[(vertex < 0.0) & (vertex > -FEAS_TOL)] = 0.0
    return vertex
