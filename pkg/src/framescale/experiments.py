"""Seeded Monte Carlo studies on Gaussian frames.

Each trial draws its frame from ``trial_seed(seed, N, M, trial)``, so a table
cell is reproducible on its own and serial and parallel runs agree bit for
bit.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, Inconclusive, WrongDimension
from .fmap import f_dim
from .frame import Frame, ScalingWeights, gaussian_frame, normalize_columns
from .programs import CoefficientRule, Tolerances, is_scalable
from .seeding import trial_seed

MIN_SCALABLE = 10
SPARSITY_HEADER = ["N", "M", "trials_total", "trials_scalable", "avg_retained"]
PROPORTION_HEADER = ["N", "M", "m_scaled", "trials", "proportion"]


@dataclass
class SparsityCell:
    n: int
    m: int
    trials_total: int
    trials_scalable: int
    avg_retained: float | None
    retained: list[int] = field(default_factory=list)

    @property
    def d_plus_1(self) -> int:
        return self.n * (self.n + 1) // 2


@dataclass
class ProportionPoint:
    n: int
    m: int
    m_scaled: float
    proportion: float
    trials: int


def trial_frame(seed: int, n: int, m: int, trial: int, unit_norm: bool = True) -> Frame:
    return gaussian_frame(n, m, trial_seed(seed, n, m, trial), unit_norm=unit_norm)


def _run_trial(job) -> tuple[bool, int | None]:
    seed, n, m, trial, method, rule, tols, unit_norm = job
    f = trial_frame(seed, n, m, trial, unit_norm)
    try:
        report = is_scalable(f, method, rule, tols)
    except Inconclusive:
        return False, None
    if not report.scalable:
        return False, None
    return True, report.support_size


def _run_jobs(jobs: list, n_jobs: int) -> list:
    if n_jobs == 1 or len(jobs) < 2:
        return [_run_trial(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=n_jobs) as pool:
        # map preserves submission order, so the reduction below is order-fixed
        return list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * n_jobs))))


def sparsity_experiment(n_list, m_list, trials: int = 100, seed: int = 0, method: str = "lp",
                        tols: Tolerances = Tolerances(),
                        rule: CoefficientRule = CoefficientRule.ONES,
                        min_scalable: int = MIN_SCALABLE, unit_norm: bool = True,
                        n_jobs: int = 1) -> list[SparsityCell]:
    """Average support size of the scaling found for each ``(N, M)`` cell.

    Averages run over scalable trials only. Cells with fewer than
    ``min_scalable`` scalable trials, or with ``M < N``, carry
    ``avg_retained = None``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cells = []
    for n in n_list:
        for m in m_list:
            if m < n:
                cells.append(SparsityCell(n, m, 0, 0, None))
                continue
            jobs = [(seed, n, m, t, method, rule, tols, unit_norm) for t in range(trials)]
            results = _run_jobs(jobs, n_jobs)
            retained = [k for ok, k in results if ok]
            avg = float(np.mean(retained)) if len(retained) >= min_scalable else None
            cells.append(SparsityCell(n, m, trials, len(retained), avg, retained))
    return cells


def sweep_sizes(n: int, stride: int | None = None) -> list[int]:
    """Frame sizes ``N+1 .. 4N^2``; the default stride is 1 up to N=5, then ~20 points."""
    lo, hi = n + 1, 4 * n * n
    if stride is None:
        stride = 1 if n <= 5 else max(1, (hi - lo) // 20)
    sizes = list(range(lo, hi + 1, stride))
    if sizes[-1] != hi:
        sizes.append(hi)
    return sizes


def proportion_experiment(n_list, trials: int = 100, seed: int = 0, method: str = "lp",
                          tols: Tolerances = Tolerances(), stride: int | None = None,
                          n_jobs: int = 1) -> list[ProportionPoint]:
    """Fraction of scalable Gaussian frames for each ``M`` in the sweep of each ``N``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    points = []
    for n in n_list:
        span = 4 * n * n - n
        for m in sweep_sizes(n, stride):
            jobs = [(seed, n, m, t, method, CoefficientRule.ONES, tols, True)
                    for t in range(trials)]
            hits = sum(ok for ok, _ in _run_jobs(jobs, n_jobs))
            points.append(ProportionPoint(n, m, (m - n) / span, hits / trials, trials))
    return points


def dplus1_trend(cells) -> list[tuple[int, float, int, float]]:
    """Per ``N``: mean of the published cell averages, ``N(N+1)/2``, and the relative gap."""
    by_n: dict[int, list[float]] = {}
    for c in cells:
        if c.avg_retained is not None:
            by_n.setdefault(c.n, []).append(c.avg_retained)
    rows = []
    for n in sorted(by_n):
        avg = float(np.mean(by_n[n]))
        target = f_dim(n) + 1
        rows.append((n, avg, target, (avg - target) / target))
    return rows


@dataclass
class R2FigureData:
    original: np.ndarray      # M x 2, unit-normalised input vectors
    scaled: np.ndarray        # K x 2, sqrt(u_k) phi_k for the retained k (input lengths)
    scaled_index: list[int]


def r2_figure_data(f: Frame, w: ScalingWeights | None = None) -> R2FigureData:
    if f.n != 2:
        raise WrongDimension(f"R^2 figures need n = 2, got n = {f.n}")
    unit = normalize_columns(f).columns
    if w is None:
        return R2FigureData(unit, np.zeros((0, 2)), [])
    if w.m != f.m:
        raise DimensionMismatch(f"{w.m} weights for {f.m} vectors")
    keep = [int(k) for k in w.support]
    scaled = f.columns[keep] * np.sqrt(w.u[keep])[:, None]
    return R2FigureData(unit, scaled, keep)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def sparsity_csv(cells) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SPARSITY_HEADER)
    for c in cells:
        writer.writerow([c.n, c.m, c.trials_total, c.trials_scalable,
                         "" if c.avg_retained is None else _fmt(c.avg_retained)])
    return buf.getvalue()


def proportion_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROPORTION_HEADER)
    for p in points:
        writer.writerow([p.n, p.m, _fmt(p.m_scaled), p.trials, _fmt(p.proportion)])
    return buf.getvalue()
