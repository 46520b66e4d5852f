"""Dense two-phase simplex for ``min c.x  s.t.  A x = b, x >= 0``.

Dantzig pricing is used until ``R`` consecutive degenerate pivots are seen,
after which the phase finishes under Bland's rule, which cannot cycle. The
tableau is rebuilt from the basis matrix every ``REFACTOR_EVERY`` pivots to
keep round-off from accumulating.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exceptions import DimensionMismatch, PivotLimitExceeded, UnboundedProblem

logger = logging.getLogger(__name__)

FEAS_TOL = 1e-9
DUAL_TOL = 1e-8
PIVOT_TOL = 1e-9
OPT_TOL = 1e-10
REFACTOR_EVERY = 64


@dataclass(frozen=True)
class StandardLp:
    """Equality-form LP. Rows with a negative right-hand side are negated on construction."""

    a_mat: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = linalg.as_matrix(self.a_mat, "a_mat")
        b = np.array(self.b, dtype=float).ravel()
        c = np.array(self.c, dtype=float).ravel()
        if b.size != a.shape[0] or c.size != a.shape[1]:
            raise DimensionMismatch(
                f"A is {a.shape}, b has {b.size} entries, c has {c.size} entries")
        flip = b < 0
        a[flip] *= -1.0
        b[flip] *= -1.0
        for arr in (a, b, c):
            arr.setflags(write=False)
        object.__setattr__(self, "a_mat", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def rows(self) -> int:
        return self.a_mat.shape[0]

    @property
    def cols(self) -> int:
        return self.a_mat.shape[1]


class LpStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"


@dataclass
class LpOutcome:
    status: LpStatus
    x: np.ndarray | None = None
    objective: float | None = None
    y: np.ndarray | None = None
    basis: list[int] = field(default_factory=list)
    redundant_rows: list[int] = field(default_factory=list)
    pivots: int = 0
    phase1_objective: float = 0.0

    @property
    def optimal(self) -> bool:
        return self.status is LpStatus.OPTIMAL


class _Tableau:
    def __init__(self, lp: StandardLp, max_pivots: int):
        r, c = lp.a_mat.shape
        self.n_struct = c
        self.a_full = np.hstack([lp.a_mat, np.eye(r)])
        self.b = np.array(lp.b)
        self.rows = list(range(r))
        self.basis = list(range(c, c + r))
        self.t = self.a_full.copy()
        self.rhs = self.b.copy()
        self.pivots = 0
        self.max_pivots = max_pivots
        self._since_refactor = 0

    def refactor(self):
        cols = self.a_full[self.rows]
        factor = linalg.lu_factor(cols[:, self.basis])
        self.t = linalg.lu_solve(factor, cols)
        self.rhs = linalg.lu_solve(factor, self.b[self.rows])
        self._since_refactor = 0

    def pivot(self, r: int, j: int):
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise PivotLimitExceeded(f"more than {self.max_pivots} pivots")
        piv = self.t[r, j]
        self.t[r] /= piv
        self.rhs[r] /= piv
        col = self.t[:, j].copy()
        col[r] = 0.0
        self.t -= np.outer(col, self.t[r])
        self.rhs -= col * self.rhs[r]
        self.basis[r] = j
        self._since_refactor += 1
        if self._since_refactor >= REFACTOR_EVERY:
            self.refactor()

    def drop_row(self, r: int):
        del self.rows[r]
        del self.basis[r]
        self.t = np.delete(self.t, r, axis=0)
        self.rhs = np.delete(self.rhs, r)

    def run(self, cost: np.ndarray, allowed: np.ndarray) -> None:
        """Optimise ``cost`` over the current basis; only ``allowed`` columns may enter."""
        bland = False
        degenerate_run = 0
        while True:
            reduced = cost - cost[self.basis] @ self.t
            reduced[~allowed] = 0.0
            reduced[self.basis] = 0.0
            candidates = np.flatnonzero(reduced < -OPT_TOL)
            if candidates.size == 0:
                return
            if bland:
                j = int(candidates[0])
            else:
                j = int(candidates[np.argmin(reduced[candidates])])
            col = self.t[:, j]
            eligible = np.flatnonzero(col > PIVOT_TOL)
            if eligible.size == 0:
                raise UnboundedProblem(f"column {j} gives an unbounded ray")
            ratios = np.maximum(self.rhs[eligible], 0.0) / col[eligible]
            best = ratios.min()
            ties = eligible[ratios <= best + 1e-12 * (1.0 + best)]
            if bland:
                r = int(min(ties, key=lambda i: self.basis[i]))
            else:
                r = int(ties[np.argmax(col[ties])])
            if best <= 1e-12:
                degenerate_run += 1
                if not bland and degenerate_run >= len(self.rows):
                    logger.debug("switching to Bland's rule after %d degenerate pivots",
                                 degenerate_run)
                    bland = True
            else:
                degenerate_run = 0
            self.pivot(r, j)


def solve(lp: StandardLp, feas_tol: float = FEAS_TOL, dual_tol: float = DUAL_TOL,
          max_pivots: int | None = None) -> LpOutcome:
    """Solve ``lp`` with the two-phase method.

    Phase 1 minimises the sum of artificial variables; the LP is infeasible
    when that optimum exceeds ``feas_tol``. Artificials left in the basis at
    zero level are pivoted out, or their rows are dropped as redundant. The
    dual vector of an optimal outcome is ``B^-T c_B`` with zeros on dropped
    rows.
    """
    r, c = lp.rows, lp.cols
    if max_pivots is None:
        max_pivots = 50 * (r + c)
    tab = _Tableau(lp, max_pivots)

    phase1_cost = np.concatenate([np.zeros(c), np.ones(r)])
    allowed = np.zeros(c + r, dtype=bool)
    allowed[:c] = True
    tab.run(phase1_cost, allowed)
    tab.refactor()
    infeas = float(sum(tab.rhs[i] for i, j in enumerate(tab.basis) if j >= c))
    if infeas > feas_tol:
        return LpOutcome(LpStatus.INFEASIBLE, pivots=tab.pivots, phase1_objective=infeas)

    redundant = []
    i = 0
    while i < len(tab.basis):
        if tab.basis[i] < c:
            i += 1
            continue
        row = np.abs(tab.t[i, :c])
        row[[j for j in tab.basis if j < c]] = 0.0
        j = int(np.argmax(row))
        if row[j] > PIVOT_TOL:
            tab.pivot(i, j)
            i += 1
        else:
            redundant.append(tab.rows[i])
            tab.drop_row(i)

    tab.a_full = tab.a_full[:, :c]
    tab.t = tab.t[:, :c]
    cost = np.array(lp.c)
    if tab.rows:
        tab.refactor()
        tab.run(cost, np.ones(c, dtype=bool))
        tab.refactor()

    x = np.zeros(c)
    x[tab.basis] = tab.rhs
    if np.any(x < -feas_tol):
        logger.warning("basic solution has negative entry %.3e", x.min())
    x = np.where(x < 0, 0.0, x)

    y = np.zeros(r)
    if tab.rows:
        y[tab.rows] = extract_dual(lp, tab.basis, tab.rows)
    return LpOutcome(
        LpStatus.OPTIMAL,
        x=x,
        objective=float(lp.c @ x),
        y=y,
        basis=sorted(tab.basis),
        redundant_rows=sorted(redundant),
        pivots=tab.pivots,
        phase1_objective=infeas,
    )


def extract_dual(lp: StandardLp, basis, rows=None) -> np.ndarray:
    """Dual values ``y`` solving ``B^T y = c_B`` on the given rows."""
    rows = list(range(lp.rows)) if rows is None else list(rows)
    bmat = lp.a_mat[np.ix_(rows, list(basis))]
    return linalg.lu_solve_transposed(linalg.lu_factor(bmat), lp.c[list(basis)])


def check_complementary_slackness(x, y, lp: StandardLp, tol: float = 1e-8) -> bool:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != lp.cols or y.size != lp.rows:
        raise DimensionMismatch(f"x has {x.size} entries (need {lp.cols}), "
                                f"y has {y.size} (need {lp.rows})")
    row_terms = y * (lp.a_mat @ x - lp.b)
    col_terms = x * (lp.c - lp.a_mat.T @ y)
    return bool(np.all(np.abs(row_terms) <= tol) and np.all(np.abs(col_terms) <= tol))
