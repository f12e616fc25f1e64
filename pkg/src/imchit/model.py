"""Domain types for imprecise Markov chain instances.

A model consists of a finite state space, a non-trivial target set of
states, and one credal row polytope per state.  A row polytope is the set
of admissible one-step transition distributions out of that state, given
either by its vertices (a list of probability mass functions) or by linear
constraints on top of the implicit simplex constraints ``p >= 0`` and
``sum(p) == 1``.  Any combination of admissible rows forms an admissible
transition matrix (rows are separately specified).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from .errors import SelectorOutOfRange

# Row vertices must be pmfs up to this tolerance; stricter than the
# geometric feasibility tolerance because vertices are literal input data.
PMF_TOL = 1e-12
# Feasibility slack for vertices reconstructed by the LP machinery.
FEAS_TOL = 1e-9

Relation = str  # one of "<=", ">=", "="
_RELATIONS = ("<=", ">=", "=")


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class StateSpace:
    """Ordered set of state labels; index order is the file order."""

    labels: tuple[str, ...]

    def __post_init__(self):
        if len(self.labels) < 2:
            raise ValueError("a state space needs at least two states")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("state labels must be unique")
        object.__setattr__(self, "_index", {s: i for i, s in enumerate(self.labels)})

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValueError(f"unknown state label {label!r}") from None


@dataclass(frozen=True)
class TargetSet:
    """Set of target state indices (the set whose hitting time is sought)."""

    members: frozenset[int]

    def __init__(self, members: Iterable[int]):
        object.__setattr__(self, "members", frozenset(int(i) for i in members))

    def __contains__(self, i: int) -> bool:
        return i in self.members


@dataclass(eq=False)
class RowPolytopeV:
    """Row credal set given by its vertices (one pmf per row of ``vertices``)."""

    vertices: np.ndarray  # shape (k, n)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] < 1:
            raise ValueError("vertices must be a non-empty 2-d array")
        self.vertices = _readonly(v)

    @property
    def num_states(self) -> int:
        return self.vertices.shape[1]

    @property
    def num_vertices(self) -> int:
        return self.vertices.shape[0]


@dataclass(frozen=True)
class Constraint:
    """One linear constraint ``a . p (rel) b`` on a transition row."""

    a: np.ndarray
    rel: Relation
    b: float

    def __post_init__(self):
        if self.rel not in _RELATIONS:
            raise ValueError(f"relation must be one of {_RELATIONS}, got {self.rel!r}")
        object.__setattr__(self, "a", _readonly(np.asarray(self.a, dtype=float)))
        object.__setattr__(self, "b", float(self.b))


@dataclass(eq=False)
class RowPolytopeH:
    """Row credal set cut out of the probability simplex by linear constraints.

    The simplex constraints are implicit and always enforced; ``constraints``
    only lists the additional ones.
    """

    num_states: int
    constraints: tuple[Constraint, ...]

    def __post_init__(self):
        self.constraints = tuple(self.constraints)
        for c in self.constraints:
            if c.a.shape != (self.num_states,):
                raise ValueError("constraint coefficient vector has wrong length")
        self._std = None  # standard-form cache filled in by the lp module


Row = Union[RowPolytopeV, RowPolytopeH]


@dataclass(eq=False)
class Model:
    """A validated-on-demand imprecise Markov chain instance."""

    states: StateSpace
    target: TargetSet
    rows: tuple[Row, ...]

    def __post_init__(self):
        n = self.states.size
        self.rows = tuple(self.rows)
        if len(self.rows) != n:
            raise ValueError("exactly one row polytope per state is required")
        for i, row in enumerate(self.rows):
            if row.num_states != n:
                raise ValueError(f"row {i} is over {row.num_states} states, expected {n}")
        for i in self.target.members:
            if not 0 <= i < n:
                raise ValueError(f"target index {i} out of range")
        self._vcache = None  # stacked-vertex cache used by the operator module

    @property
    def size(self) -> int:
        return self.states.size

    @property
    def target_indices(self) -> np.ndarray:
        return np.array(sorted(self.target.members), dtype=int)

    @property
    def nontarget_indices(self) -> np.ndarray:
        return np.array([i for i in range(self.size) if i not in self.target.members],
                        dtype=int)

    def target_mask(self) -> np.ndarray:
        m = np.zeros(self.size, dtype=bool)
        m[self.target_indices] = True
        return m


@dataclass(eq=False)
class TransitionMatrix:
    """One precise row-stochastic transition matrix."""

    entries: np.ndarray

    @classmethod
    def checked(cls, entries: np.ndarray) -> "TransitionMatrix":
        """Validate row-stochasticity; tiny negative round-off is zeroed."""
        m = np.array(entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("transition matrix must be square")
        if not np.isfinite(m).all():
            raise ValueError("transition matrix has non-finite entries")
        if m.min() < -PMF_TOL:
            raise ValueError("transition matrix has negative entries")
        np.clip(m, 0.0, None, out=m)
        sums = m.sum(axis=1)
        bad = np.abs(sums - 1.0) > PMF_TOL
        if bad.any():
            raise ValueError(f"rows {np.nonzero(bad)[0].tolist()} do not sum to 1")
        return cls(_readonly(m))


# A selector is a vertex index for V-rep rows and a sorted tuple of basic
# column indices of the row's standard-form LP for H-rep rows.
Selector = Union[int, tuple[int, ...]]


@dataclass(frozen=True)
class Policy:
    """One extreme-row choice per state; equality is selector-wise."""

    selectors: tuple[Selector, ...]

    def changed_states(self, other: "Policy") -> int:
        """Number of states whose selector differs from ``other``."""
        return sum(a != b for a, b in zip(self.selectors, other.selectors))


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    state: str | None
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[ValidationIssue, ...]


def validate(model: Model) -> ValidationReport:
    """Check all model invariants and report per-row diagnostics.

    The model is accepted iff the target is a non-empty strict subset of
    the state space, every V-rep vertex is a pmf within ``PMF_TOL``, and
    every H-rep row is feasible.
    """
    from . import lp  # deferred: lp only needs the row data structures

    issues: list[ValidationIssue] = []
    n = model.size
    if not model.target.members:
        issues.append(ValidationIssue("EmptyTarget", None, "target set is empty"))
    elif len(model.target.members) >= n:
        issues.append(ValidationIssue(
            "TargetIsWholeSpace", None, "no non-target states remain"))
    for x, row in enumerate(model.rows):
        label = model.states.labels[x]
        if isinstance(row, RowPolytopeV):
            sums = row.vertices.sum(axis=1)
            for k in range(row.num_vertices):
                v = row.vertices[k]
                if v.min() < -PMF_TOL or abs(sums[k] - 1.0) > PMF_TOL:
                    issues.append(ValidationIssue(
                        "NonStochasticVertex", label,
                        f"vertex {k} has min {v.min():.3g}, sum {sums[k]!r}"))
        else:
            if not lp.row_feasible(row):
                issues.append(ValidationIssue(
                    "InfeasibleRow", label, "constraints admit no pmf"))
    return ValidationReport(ok=not issues, issues=tuple(issues))


def policy_to_matrix(model: Model, policy: Policy) -> TransitionMatrix:
    """Assemble the precise transition matrix selected by ``policy``."""
    from . import lp

    n = model.size
    if len(policy.selectors) != n:
        raise ValueError("policy must have one selector per state")
    m = np.empty((n, n))
    for x, (row, sel) in enumerate(zip(model.rows, policy.selectors)):
        label = model.states.labels[x]
        if isinstance(row, RowPolytopeV):
            if not isinstance(sel, (int, np.integer)):
                raise SelectorOutOfRange(label, "expected a vertex index")
            if not 0 <= sel < row.num_vertices:
                raise SelectorOutOfRange(
                    label, f"vertex index {sel} not in [0, {row.num_vertices})")
            m[x] = row.vertices[sel]
        else:
            if not isinstance(sel, tuple):
                raise SelectorOutOfRange(label, "expected a basis tuple")
            m[x] = lp.vertex_from_basis(row, sel, state_label=label)
    return TransitionMatrix.checked(m)


# ---------------------------------------------------------------------------
# JSON serialization.  The schema is shared by the CLI and bench modules:
#
#   {"states": ["a", "b", ...],
#    "target": ["b", ...],
#    "rows": {"a": {"vertices": [[...], ...]},
#             "b": {"constraints": [{"a": {"a": 1.0}, "rel": "<=", "b": 0.3}]}}}
# ---------------------------------------------------------------------------

def model_to_dict(model: Model) -> dict:
    labels = model.states.labels
    rows: dict[str, dict] = {}
    for x, row in enumerate(model.rows):
        if isinstance(row, RowPolytopeV):
            rows[labels[x]] = {"vertices": [list(map(float, v)) for v in row.vertices]}
        else:
            cons = []
            for c in row.constraints:
                coef = {labels[y]: float(c.a[y]) for y in range(model.size) if c.a[y] != 0.0}
                cons.append({"a": coef, "rel": c.rel, "b": float(c.b)})
            rows[labels[x]] = {"constraints": cons}
    return {
        "states": list(labels),
        "target": [labels[i] for i in model.target_indices],
        "rows": rows,
    }


def model_from_dict(doc: dict) -> Model:
    if not isinstance(doc, dict):
        raise ValueError("model document must be a JSON object")
    for key in ("states", "target", "rows"):
        if key not in doc:
            raise ValueError(f"model document is missing {key!r}")
    states = StateSpace(tuple(str(s) for s in doc["states"]))
    n = states.size
    target = TargetSet(states.index(str(s)) for s in doc["target"])
    rows: list[Row] = []
    for label in states.labels:
        try:
            spec = doc["rows"][label]
        except KeyError:
            raise ValueError(f"no row polytope given for state {label!r}") from None
        if "vertices" in spec:
            rows.append(RowPolytopeV(np.asarray(spec["vertices"], dtype=float)))
        elif "constraints" in spec:
            cons = []
            for c in spec["constraints"]:
                a = np.zeros(n)
                for lab, coef in c["a"].items():
                    a[states.index(str(lab))] = float(coef)
                cons.append(Constraint(a, str(c["rel"]), float(c["b"])))
            rows.append(RowPolytopeH(n, tuple(cons)))
        else:
            raise ValueError(
                f"row for state {label!r} needs 'vertices' or 'constraints'")
    extra = set(doc["rows"]) - set(states.labels)
    if extra:
        raise ValueError(f"rows given for unknown states: {sorted(extra)}")
    return Model(states, target, tuple(rows))


def load_model(path) -> Model:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_dict(json.load(fh))


def save_model(model: Model, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_to_dict(model), fh, indent=2)
        fh.write("\n")
