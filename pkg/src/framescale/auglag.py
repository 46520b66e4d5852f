"""Augmented-Lagrangian search for a minimum-norm point of the scalability polytope.

The problem is ``min u.u  s.t.  L u = b, u >= 0`` with ``L = [F(Phi); 1^T]``
and ``b = (0, ..., 0, 1)``. Each sweep solves the unconstrained minimiser of

    u.u + <mu, L u - b> + (lam / 2) ||L u - b||^2

in closed form, clips it to the nonnegative orthant, then updates the
multipliers. Two multiplier rules are available:

``classical``
    ``mu += lam * r`` and ``lam *= growth`` (capped), the usual method of
    multipliers. This is the default.
``paper-literal``
    ``mu -= eta * r`` and ``lam -= eta/2 * ||r||^2`` (floored at
    ``lambda_min``). These are descent steps on the dual variables; they tend
    to stall and are kept for side-by-side comparison only.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .exceptions import Inconclusive
from .fmap import FMatrix
from .frame import ScalingWeights
from .programs import ScalabilityReport, Tolerances, _l_and_b, residual_of

MODES = ("classical", "paper-literal")


@dataclass(frozen=True)
class AugLagOptions:
    eta: float = 0.5
    lambda0: float = 1.0
    mu0: tuple | None = None
    max_iters: int = 100_000
    res_tol: float = 1e-6
    update_mode: str = "classical"
    growth: float = 1.5
    lambda_max: float = 1e8
    lambda_min: float = 1e-8
    record_trace: bool = False
    check_primal: bool = False
    # give up once the best residual has not dropped by stall_rel in stall_window sweeps
    stall_window: int | None = 2000
    stall_rel: float = 1e-6

    def __post_init__(self):
        if self.eta <= 0 or self.lambda0 <= 0:
            raise ValueError("eta and lambda0 must be positive")
        if self.update_mode not in MODES:
            raise ValueError(f"update_mode must be one of {MODES}")


@dataclass
class AugLagState:
    u: np.ndarray
    mu: np.ndarray
    lam: float
    eta: float
    iter: int = 0
    residual: float = math.inf
    trace: list = field(default_factory=list)


def build_l_and_b(fm: FMatrix) -> tuple[np.ndarray, np.ndarray]:
    """``L = [F(Phi); 1^T]`` and ``b = (0, ..., 0, 1)``."""
    return _l_and_b(fm)


def _system(l_mat: np.ndarray, lam: float) -> np.ndarray:
    return (2.0 / lam) * np.eye(l_mat.shape[1]) + l_mat.T @ l_mat


def primal_update(l_mat, b, mu, lam: float) -> np.ndarray:
    """Solve ``(2/lam I + L^T L) u = L^T (b - mu/lam)``."""
    if lam <= 0:
        raise ValueError("lambda must be positive")
    l_mat = np.asarray(l_mat, dtype=float)
    rhs = l_mat.T @ (np.asarray(b, dtype=float) - np.asarray(mu, dtype=float) / lam)
    return linalg.solve_spd(_system(l_mat, lam), rhs)


def project_nonneg(v) -> np.ndarray:
    return np.maximum(np.asarray(v, dtype=float), 0.0)


def dual_update(state: AugLagState, l_mat, b, mode: str = "classical",
                growth: float = 1.5, lambda_max: float = 1e8,
                lambda_min: float = 1e-8) -> tuple[np.ndarray, float]:
    r = np.asarray(l_mat) @ state.u - np.asarray(b)
    if mode == "classical":
        mu = state.mu + state.lam * r
        lam = state.lam if not np.any(r) else min(growth * state.lam, lambda_max)
    elif mode == "paper-literal":
        mu = state.mu - state.eta * r
        lam = max(state.lam - 0.5 * state.eta * float(r @ r), lambda_min)
    else:
        raise ValueError(f"unknown update mode {mode!r}")
    return mu, lam


def lagrangian_value_and_grad(u, mu, lam: float, l_mat, b) -> tuple[float, np.ndarray]:
    u = np.asarray(u, dtype=float)
    mu = np.asarray(mu, dtype=float)
    l_mat = np.asarray(l_mat, dtype=float)
    b = np.asarray(b, dtype=float)
    r = l_mat @ u - b
    value = float(u @ u + mu @ r + 0.5 * lam * r @ r)
    grad = 2.0 * u + l_mat.T @ mu + lam * (l_mat.T @ (l_mat @ u)) - lam * (l_mat.T @ b)
    return value, grad


def solve_auglag(fm: FMatrix, opts: AugLagOptions = AugLagOptions(),
                 tols: Tolerances = Tolerances()) -> ScalabilityReport:
    """Run the augmented-Lagrangian sweeps until ``||L u - b||_2 <= res_tol``.

    On success ``u`` is rescaled to unit l1 norm. Hitting ``max_iters``, or
    ``stall_window`` sweeps without progress, raises ``Inconclusive``: a
    stalled run says nothing about scalability.
    """
    l_mat, b = build_l_and_b(fm)
    mu0 = np.zeros(l_mat.shape[0]) if opts.mu0 is None else np.array(opts.mu0, dtype=float)
    state = AugLagState(np.zeros(fm.m), mu0, opts.lambda0, opts.eta)
    gram = l_mat.T @ l_mat
    factor_lam, low = None, None
    best, best_iter = math.inf, 0
    while state.iter < opts.max_iters:
        if state.lam != factor_lam:
            low = linalg.cholesky((2.0 / state.lam) * np.eye(fm.m) + gram)
            factor_lam = state.lam
        rhs = l_mat.T @ (b - state.mu / state.lam)
        v = linalg.cholesky_solve(low, rhs)
        if opts.check_primal:
            sys_res = np.max(np.abs(_system(l_mat, state.lam) @ v - rhs))
            assert sys_res <= 1e-10 * (1.0 + np.max(np.abs(rhs))), sys_res
        state.u = project_nonneg(v)
        state.iter += 1
        state.residual = float(np.linalg.norm(l_mat @ state.u - b))
        if opts.record_trace:
            state.trace.append((state.iter, state.residual, state.lam, float(state.u @ state.u)))
        if state.residual <= opts.res_tol:
            break
        if state.residual < best * (1.0 - opts.stall_rel):
            best, best_iter = state.residual, state.iter
        elif opts.stall_window and state.iter - best_iter >= opts.stall_window:
            break
        state.mu, state.lam = dual_update(state, l_mat, b, opts.update_mode, opts.growth,
                                          opts.lambda_max, opts.lambda_min)
        if not (np.all(np.isfinite(state.mu)) and math.isfinite(state.lam)):
            break

    details = {
        "update_mode": opts.update_mode,
        "iterations": state.iter,
        "lagrangian_residual": state.residual,
        "lambda": state.lam,
        "stalled": state.iter < opts.max_iters and state.residual > opts.res_tol,
    }
    if opts.record_trace:
        details["trace"] = state.trace
    converged = state.residual <= opts.res_tol and state.u.sum() > 0
    if not converged:
        report = ScalabilityReport(False, "auglag", status="inconclusive", details=details)
        if state.u.sum() > 0:
            report.weights = ScalingWeights.from_vector(state.u, tols.zero)
            report.residual = residual_of(fm, report.weights.u)
        raise Inconclusive(
            f"augmented Lagrangian stopped at residual {state.residual:.3e} "
            f"after {state.iter} iterations", report)
    weights = ScalingWeights.from_vector(state.u, tols.zero)
    return ScalabilityReport(
        True, "auglag", weights=weights,
        primal_objective=float(weights.u @ weights.u),
        residual=residual_of(fm, weights.u),
        details=details,
    )


def write_trace_csv(trace, path) -> None:
    """Write ``(iter, residual, lambda, objective)`` rows for convergence plots."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["iter", "residual", "lambda", "objective"])
        for it, res, lam, obj in trace:
            writer.writerow([it, f"{res:.17g}", f"{lam:.17g}", f"{obj:.17g}"])
