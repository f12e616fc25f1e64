"""Exact expected hitting times for one precise transition matrix.

With ``T`` row-stochastic and ``A`` the target set, the hitting-time
vector ``h`` is zero on ``A`` and solves ``(I - T|) u = 1`` on the
complement, where ``T|`` is the submatrix of ``T`` on non-target
coordinates.  The system is uniquely solvable exactly when every state
reaches the target with positive probability under ``T``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SingularSystem
from .model import TargetSet, TransitionMatrix

# accepted relative residual of the defining fixed-point equation
RESID_RTOL = 1e-9


@dataclass(eq=False)
class HittingTimeVector:
    """Expected steps until the target, per start state; zero on the target."""

    values: np.ndarray

    @property
    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


def solve_precise(matrix: TransitionMatrix, target: TargetSet) -> HittingTimeVector:
    """Solve the restricted linear system by LU with partial pivoting.

    Raises ``SingularSystem`` when the solve fails, leaves a residual
    above ``RESID_RTOL * (1 + sup norm)``, or produces entries below 1 on
    non-target states; all three signal an unreachable target or severe
    ill-conditioning.
    """
    entries = matrix.entries
    n = entries.shape[0]
    nontarget = np.array([i for i in range(n) if i not in target.members], dtype=int)
    if nontarget.size == 0 or nontarget.size == n:
        raise ValueError("target must be a non-empty strict subset of the states")
    sub = entries[np.ix_(nontarget, nontarget)]
    try:
        u = np.linalg.solve(np.eye(nontarget.size) - sub, np.ones(nontarget.size))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from None
    if not np.isfinite(u).all() or u.min() < 1.0 - 1e-6:
        raise SingularSystem(
            "solution is not a hitting-time vector; target likely unreachable")
    h = np.zeros(n)
    h[nontarget] = u
    scale = 1.0 + float(np.max(h))
    residual = float(np.max(np.abs(u - 1.0 - sub @ u)))
    if residual > RESID_RTOL * scale:
        raise SingularSystem(
            f"residual {residual:.3g} exceeds {RESID_RTOL:.1g} * {scale:.3g}")
    h.flags.writeable = False
    return HittingTimeVector(h)
