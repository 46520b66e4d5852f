"""Scalability as linear programming over ``{u >= 0 : F(Phi) u = 0, sum(u) = 1}``.

Every solver in the package searches this polytope. It is non-empty exactly
when the frame is scalable, and any point ``u`` in it gives the tight frame
``{sqrt(u_k) phi_k}``.
"""
from __future__ import annotations

import dataclasses
import enum
import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import simplex
from .exceptions import (DimensionMismatch, NotScalable, TooLarge, ValidationFailed,
                         ZeroFColumn)
from .fmap import FMatrix, f_of_frame
from .frame import (
    DEFAULT_ZERO_TOL,
    Frame,
    ScalingWeights,
    apply_scaling,
    condition_number,
    frame_operator,
    tightness_gap,
)

METHODS = ("lp", "maximin", "barrier", "auglag", "oracle")


class CoefficientRule(str, enum.Enum):
    ONES = "ones"
    INVERSE_FNORM = "inv-fnorm"

    def coefficients(self, fm: FMatrix) -> np.ndarray:
        if self is CoefficientRule.ONES:
            return np.ones(fm.m)
        norms = fm.column_norms()
        if np.any(norms == 0.0):
            bad = np.flatnonzero(norms == 0.0).tolist()
            raise ZeroFColumn(f"F(phi_k) = 0 for k in {bad}; 1/||F(phi_k)|| is undefined")
        return 1.0 / norms


@dataclass(frozen=True)
class Tolerances:
    feas: float = simplex.FEAS_TOL
    dual: float = simplex.DUAL_TOL
    zero: float = DEFAULT_ZERO_TOL  # relative to max(u)
    tight: float = 1e-6
    max_pivots: int | None = None


@dataclass
class ScalabilityReport:
    scalable: bool
    method: str
    weights: ScalingWeights | None = None
    primal_objective: float | None = None
    dual_objective: float | None = None
    residual: float | None = None
    cond_after: float | None = None
    status: str = ""
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.status:
            self.status = "scalable" if self.scalable else "not_scalable"

    @property
    def support_size(self) -> int | None:
        return None if self.weights is None else int(self.weights.support.size)

    def to_dict(self) -> dict:
        return {
            "scalable": self.scalable,
            "status": self.status,
            "method": self.method,
            "m": None if self.weights is None else self.weights.m,
            "u": None if self.weights is None else self.weights.u.tolist(),
            "support_size": self.support_size,
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "residual": self.residual,
            "cond_after": self.cond_after,
            "details": self.details,
        }

    def weights_document(self) -> dict:
        """Weights file payload: ``{"m", "u", "method", "residual"}``."""
        if self.weights is None:
            raise ValueError("report carries no weights")
        return {
            "m": self.weights.m,
            "u": self.weights.u.tolist(),
            "method": self.method,
            "residual": self.residual,
        }


def _l_and_b(fm: FMatrix) -> tuple[np.ndarray, np.ndarray]:
    a = np.vstack([fm.entries, np.ones((1, fm.m))])
    b = np.zeros(fm.d + 1)
    b[-1] = 1.0
    return a, b


def residual_of(fm: FMatrix, u) -> float:
    return float(np.max(np.abs(fm.entries @ np.asarray(u, dtype=float))))


def build_p1(fm: FMatrix, rule: CoefficientRule = CoefficientRule.ONES) -> simplex.StandardLp:
    """``min a.u  s.t.  F(Phi) u = 0, 1.u = 1, u >= 0``."""
    a_mat, b = _l_and_b(fm)
    return simplex.StandardLp(a_mat, b, rule.coefficients(fm))


def solve_p1(fm: FMatrix, rule: CoefficientRule = CoefficientRule.ONES,
             tols: Tolerances = Tolerances()) -> ScalabilityReport:
    lp = build_p1(fm, rule)
    out = simplex.solve(lp, tols.feas, tols.dual, tols.max_pivots)
    details = {"pivots": out.pivots, "coef": CoefficientRule(rule).value}
    if not out.optimal:
        details["phase1_objective"] = out.phase1_objective
        return ScalabilityReport(False, "lp", details=details)
    w = ScalingWeights.from_vector(out.x, tols.zero)
    details.update(basis=out.basis, redundant_rows=out.redundant_rows,
                   y=out.y.tolist())
    return ScalabilityReport(
        True, "lp", weights=w,
        primal_objective=out.objective,
        dual_objective=float(lp.b @ out.y),
        residual=residual_of(fm, w.u),
        details=details,
    )


def dual_start_p2(fm: FMatrix, rule: CoefficientRule = CoefficientRule.ONES
                  ) -> tuple[float, np.ndarray]:
    """The always-feasible dual point ``w = min(a), v = 0``."""
    return float(np.min(rule.coefficients(fm))), np.zeros(fm.d)


def verify_dual_feasible(fm: FMatrix, rule: CoefficientRule, w: float, v,
                         tol: float = simplex.DUAL_TOL) -> bool:
    """Check ``F(phi_i).v + w <= a_i`` for every column ``i``."""
    v = np.asarray(v, dtype=float).ravel()
    if v.size != fm.d:
        raise DimensionMismatch(f"v has {v.size} entries, expected {fm.d}")
    lhs = fm.entries.T @ v + w
    return bool(np.all(lhs <= rule.coefficients(fm) + tol))


def build_p4(fm: FMatrix) -> simplex.StandardLp:
    """Maximin as an LP over ``(u, t, s)``: ``max t  s.t.  u_i - t - s_i = 0`` plus P1's constraints."""
    m, d = fm.m, fm.d
    a_mat = np.zeros((d + 1 + m, 2 * m + 1))
    a_mat[:d, :m] = fm.entries
    a_mat[d, :m] = 1.0
    a_mat[d + 1:, :m] = np.eye(m)
    a_mat[d + 1:, m] = -1.0
    a_mat[d + 1:, m + 1:] = -np.eye(m)
    b = np.zeros(d + 1 + m)
    b[d] = 1.0
    c = np.zeros(2 * m + 1)
    c[m] = -1.0
    return simplex.StandardLp(a_mat, b, c)


def solve_p4_maximin(fm: FMatrix, tols: Tolerances = Tolerances()) -> ScalabilityReport:
    lp = build_p4(fm)
    out = simplex.solve(lp, tols.feas, tols.dual, tols.max_pivots)
    if not out.optimal:
        return ScalabilityReport(False, "maximin", details={"pivots": out.pivots})
    u = out.x[:fm.m]
    t_star = -out.objective
    w = ScalingWeights.from_vector(u, tols.zero)
    return ScalabilityReport(
        True, "maximin", weights=w,
        primal_objective=t_star,
        dual_objective=-float(lp.b @ out.y),
        residual=residual_of(fm, w.u),
        details={"t_star": t_star, "strictly_positive": bool(t_star > tols.feas),
                 "pivots": out.pivots},
    )


def _enumerate_vertices(a_mat: np.ndarray, b: np.ndarray, tol: float,
                        max_subsets: int) -> np.ndarray:
    """All basic feasible solutions of ``{a x = b, x >= 0}``, one per row.

    Picks a maximal independent row set of rank ``r`` and solves every
    ``r x r`` column subsystem; smaller-support vertices appear as degenerate
    solutions of some size-``r`` basis. Uses batched numpy solves so that this
    path shares no code with the simplex or the hand-written kernels.
    """
    rows: list[int] = []
    for i in range(a_mat.shape[0]):
        if np.linalg.matrix_rank(a_mat[rows + [i]]) > len(rows):
            rows.append(i)
    r = len(rows)
    cols = a_mat.shape[1]
    if r == 0:
        return np.zeros((0, cols))
    count = math.comb(cols, r)
    if count > max_subsets:
        raise TooLarge(f"{count} column subsets exceed the limit of {max_subsets}")
    ar, br = a_mat[rows], b[rows]
    found = []
    subsets = itertools.combinations(range(cols), r)
    while True:
        chunk = np.array(list(itertools.islice(subsets, 4096)), dtype=int)
        if chunk.size == 0:
            break
        mats = ar[:, chunk].transpose(1, 0, 2)
        sv = np.linalg.svd(mats, compute_uv=False)
        ok = sv[:, -1] > 1e-10 * np.maximum(sv[:, 0], 1e-300)
        if not np.any(ok):
            continue
        sol = np.linalg.solve(mats[ok], np.broadcast_to(br, (int(ok.sum()), r))[..., None])[..., 0]
        for idx, xs in zip(chunk[ok], sol):
            if np.min(xs) < -tol:
                continue
            x = np.zeros(cols)
            x[idx] = np.clip(xs, 0.0, None)
            if np.max(np.abs(a_mat @ x - b)) <= tol:
                found.append(x)
    if not found:
        return np.zeros((0, cols))
    return np.unique(np.round(np.array(found), 12), axis=0)


@dataclass
class OracleResult:
    scalable: bool
    witness: ScalingWeights | None
    optimal_maximin: float
    vertices: np.ndarray


def oracle_vertex_enumeration(fm: FMatrix, tol: float = 1e-9, maximin: bool = True,
                              max_subsets: int = 2_000_000) -> OracleResult:
    """Brute-force scalability verdict by listing every vertex of the feasible polytope.

    With ``maximin`` set, also lists the vertices of the lifted ``(u, t, s)``
    polytope of :func:`build_p4` and returns the largest ``t``; the maximin
    objective is not linear in ``u`` alone, so its optimum is generally not a
    vertex of the original polytope. ``optimal_maximin`` is NaN when the frame
    is not scalable or ``maximin`` is off.
    """
    if fm.m > 25 or fm.d + 1 > 25:
        raise TooLarge(f"oracle limited to M <= 25 and d+1 <= 25 (got M={fm.m}, d+1={fm.d + 1})")
    a_mat, b = _l_and_b(fm)
    verts = _enumerate_vertices(a_mat, b, tol, max_subsets)
    if verts.shape[0] == 0:
        return OracleResult(False, None, float("nan"), verts)
    best = float("nan")
    witness_u = verts[int(np.argmax(verts.min(axis=1)))]
    if maximin:
        lp4 = build_p4(fm)
        lifted = _enumerate_vertices(np.asarray(lp4.a_mat), np.asarray(lp4.b), tol, max_subsets)
        if lifted.shape[0]:
            k = int(np.argmax(lifted[:, fm.m]))
            best = float(lifted[k, fm.m])
            witness_u = lifted[k, :fm.m]
    return OracleResult(True, ScalingWeights.from_vector(witness_u), best, verts)


def _oracle_report(fm: FMatrix, tols: Tolerances) -> ScalabilityReport:
    res = oracle_vertex_enumeration(fm, maximin=False)
    if not res.scalable:
        return ScalabilityReport(False, "oracle", details={"vertices": 0})
    w = ScalingWeights.from_vector(res.witness.u, tols.zero)
    return ScalabilityReport(
        True, "oracle", weights=w, residual=residual_of(fm, w.u),
        details={"vertices": int(res.vertices.shape[0])},
    )


def validate_report(f: Frame, fm: FMatrix, report: ScalabilityReport,
                    tols: Tolerances) -> ScalabilityReport:
    """Re-check a positive verdict on the rescaled frame; raise ``ValidationFailed`` on mismatch."""
    w = report.weights
    if w is None:
        raise ValidationFailed(f"{report.method} reported scalable without weights")
    report.residual = residual_of(fm, w.u)
    if report.residual > tols.feas:
        raise ValidationFailed(
            f"{report.method}: ||F(Phi)u||_inf = {report.residual:.3e} exceeds {tols.feas:.1e}")
    scaled = apply_scaling(f, w)
    level = np.trace(frame_operator(scaled)) / f.n
    gap = tightness_gap(scaled)
    if gap > tols.tight * max(1.0, level):
        raise ValidationFailed(f"{report.method}: scaled frame off tight by {gap:.3e}")
    report.cond_after = condition_number(scaled)
    if report.cond_after > 1.0 + tols.tight:
        raise ValidationFailed(f"{report.method}: condition number {report.cond_after!r}")
    report.details["tightness_gap"] = gap
    return report


def is_scalable(f: Frame, method: str = "lp", rule: CoefficientRule = CoefficientRule.ONES,
                tols: Tolerances = Tolerances(), barrier_options=None,
                auglag_options=None) -> ScalabilityReport:
    """Decide scalability of ``f`` with the chosen solver and double-check any positive answer.

    ``barrier`` and ``auglag`` raise :class:`~framescale.exceptions.Inconclusive`
    when they stop without converging. An empty polytope found by the barrier's
    starting LP is reported as a negative verdict.
    """
    from .auglag import AugLagOptions, solve_auglag
    from .barrier import BarrierOptions, solve_p3_logbarrier

    f.validate()
    fm = f_of_frame(f)
    rule = CoefficientRule(rule)
    if method == "lp":
        report = solve_p1(fm, rule, tols)
    elif method == "maximin":
        report = solve_p4_maximin(fm, tols)
    elif method == "barrier":
        try:
            report = solve_p3_logbarrier(fm, barrier_options or BarrierOptions(), tols)
        except NotScalable as exc:
            # the barrier's phase-1 LP proved the polytope empty
            report = ScalabilityReport(False, "barrier", details={"reason": str(exc)})
    elif method == "auglag":
        opts = auglag_options or AugLagOptions()
        # a positive verdict must meet feas on ||F u||_inf, so stop no earlier than that
        opts = dataclasses.replace(opts, res_tol=min(opts.res_tol, tols.feas))
        report = solve_auglag(fm, opts, tols)
    elif method == "oracle":
        report = _oracle_report(fm, tols)
    else:
        raise ValueError(f"unknown method {method!r}; choose from {', '.join(METHODS)}")
    if report.scalable:
        validate_report(f, fm, report, tols)
    return report
