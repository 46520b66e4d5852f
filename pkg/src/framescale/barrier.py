"""Dense scalings from the log-barrier program ``max sum(log(u_i + eps))``.

The objective is maximised over the scalability polytope by conditional
gradient (Frank-Wolfe) steps. Each linear subproblem is another LP over the
same polytope, so every iterate stays an exact convex combination of feasible
points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import simplex
from .exceptions import Inconclusive, NegativeWeight, NotScalable
from .fmap import FMatrix
from .frame import ScalingWeights
from .programs import ScalabilityReport, Tolerances, _l_and_b, residual_of, solve_p1

# Stand-in for the infinite gradient of log(u_i) at u_i = 0 when eps = 0.
ZERO_GRADIENT_SENTINEL = 1e12
POSITIVITY_THRESHOLD = 1e-10
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class BarrierOptions:
    epsilon: float = 1e-8
    max_iters: int = 2000
    obj_tol: float = 1e-10
    gap_tol: float = 1e-9
    patience: int = 5
    step_rule: str = "exact"  # or "diminishing" for the 2/(k+2) schedule
    line_search_tol: float = 1e-12

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError("epsilon must lie in [0, 1)")
        if self.step_rule not in ("exact", "diminishing"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")


def p3_objective(u, epsilon: float) -> float:
    """``sum(log(u_i + eps))``, or ``-inf`` when ``eps == 0`` and some ``u_i == 0``."""
    u = np.asarray(u, dtype=float)
    if np.any(u < -1e-12):
        raise NegativeWeight(f"weight {u.min():.3e} is negative")
    shifted = np.clip(u, 0.0, None) + epsilon
    if np.any(shifted <= 0.0):
        return -math.inf
    return float(np.sum(np.log(shifted)))


def p3_gradient(u, epsilon: float) -> np.ndarray:
    shifted = np.clip(np.asarray(u, dtype=float), 0.0, None) + epsilon
    grad = np.full(shifted.shape, ZERO_GRADIENT_SENTINEL)
    pos = shifted > 0.0
    grad[pos] = np.minimum(1.0 / shifted[pos], ZERO_GRADIENT_SENTINEL)
    return grad


def _golden_max(phi, tol: float) -> float:
    """Maximiser of a concave function on [0, 1] by golden-section search."""
    lo, hi = 0.0, 1.0
    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = phi(x1), phi(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = phi(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = phi(x1)
    return 0.5 * (lo + hi)


def _lmo(lp_a: np.ndarray, lp_b: np.ndarray, grad: np.ndarray, tols: Tolerances) -> np.ndarray:
    # vertex maximising grad.s; the cost is rescaled so simplex tolerances stay meaningful
    cost = -grad / np.max(np.abs(grad))
    out = simplex.solve(simplex.StandardLp(lp_a, lp_b, cost), tols.feas, tols.dual,
                        tols.max_pivots)
    if not out.optimal:
        raise NotScalable("linear subproblem became infeasible")
    return out.x


def solve_p3_logbarrier(fm: FMatrix, opts: BarrierOptions = BarrierOptions(),
                        tols: Tolerances = Tolerances()) -> ScalabilityReport:
    """Maximise the log barrier over the scalability polytope.

    Starts from the LP vertex of :func:`~framescale.programs.solve_p1`. Stops
    when the Frank-Wolfe gap drops below ``gap_tol`` or the relative objective
    gain stays under ``obj_tol`` for ``patience`` iterations in a row. Raises
    ``NotScalable`` if the polytope is empty and ``Inconclusive`` at the
    iteration cap.
    """
    start = solve_p1(fm, tols=tols)
    if not start.scalable:
        raise NotScalable("scalability polytope is empty")
    eps = opts.epsilon
    lp_a, lp_b = _l_and_b(fm)
    u = start.weights.u.copy()
    f = p3_objective(u, eps)
    history = [f]
    gap = math.inf
    stall = 0
    converged = False
    for k in range(opts.max_iters):
        grad = p3_gradient(u, eps)
        s = _lmo(lp_a, lp_b, grad, tols)
        direction = s - u
        if np.max(np.abs(direction)) <= 1e-15:
            gap = 0.0
            converged = True
            break
        gap = float(grad @ direction)
        if math.isfinite(f) and gap <= opts.gap_tol:
            converged = True
            break
        if not math.isfinite(f) and not np.any(s[u <= 0.0] > 0.0):
            # no feasible point puts mass on the zero coordinates
            converged = True
            break

        def phi(g):
            return p3_objective(np.clip(u + g * direction, 0.0, None), eps)

        if opts.step_rule == "diminishing":
            gamma = 2.0 / (k + 2.0)
        elif not math.isfinite(phi(0.5)):
            gamma = 0.5
        else:
            gamma = _golden_max(phi, opts.line_search_tol)
            # guard the concave search against round-off at the ends
            gamma = max((0.0, gamma, 1.0), key=phi)
        u_new = np.clip(u + gamma * direction, 0.0, None)
        u_new /= u_new.sum()
        f_new = p3_objective(u_new, eps)
        if math.isfinite(f) and (f_new - f) <= opts.obj_tol * max(1.0, abs(f)):
            stall += 1
        else:
            stall = 0
        u, f = u_new, f_new
        history.append(f)
        if stall >= opts.patience:
            converged = True
            break

    weights = ScalingWeights.from_vector(u, tols.zero)
    min_weight = float(weights.u.min())
    details = {
        "epsilon": eps,
        "iterations": len(history) - 1,
        "fw_gap": gap,
        "converged": converged,
        "min_weight": min_weight,
        "positivity_threshold": POSITIVITY_THRESHOLD,
        "strictly_positive": bool(min_weight > POSITIVITY_THRESHOLD),
        "objective_trace": history,
    }
    report = ScalabilityReport(
        True, "barrier", weights=weights,
        primal_objective=p3_objective(weights.u, eps),
        residual=residual_of(fm, weights.u),
        details=details,
    )
    if not converged:
        report.status = "inconclusive"
        raise Inconclusive(f"log-barrier stopped after {opts.max_iters} iterations "
                           f"(gap {gap:.3e})", report)
    return report
