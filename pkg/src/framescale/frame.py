"""Finite frames in R^N, their frame operators, and nonnegative rescalings."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import linalg
from .exceptions import (
    DimensionMismatch,
    InvalidShape,
    NegativeWeight,
    NotAFrame,
    ZeroColumn,
)
from .seeding import mix_seed

DEFAULT_ZERO_TOL = 1e-8
_MAX_REGENERATIONS = 64


@dataclass(frozen=True)
class Frame:
    """``M`` vectors in ``R^N`` stored as the columns of an ``N x M`` matrix.

    Construction only checks shape and finiteness, so degenerate collections
    (for instance the output of :func:`apply_scaling` with zero weights) can be
    represented. Call :meth:`validate` to enforce the frame property.
    """

    matrix: np.ndarray

    def __post_init__(self):
        arr = linalg.as_matrix(self.matrix, "frame matrix")
        arr.setflags(write=False)
        object.__setattr__(self, "matrix", arr)

    @classmethod
    def from_columns(cls, columns) -> "Frame":
        cols = np.array(columns, dtype=float)
        if cols.ndim != 2:
            raise InvalidShape("columns must be a list of equal-length vectors")
        return cls(cols.T)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def m(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> np.ndarray:
        """Frame vectors as rows of an ``M x N`` array."""
        return self.matrix.T

    def validate(self, tol: float = linalg.PIVOT_TOL) -> "Frame":
        if self.m < self.n:
            raise InvalidShape(f"a frame in R^{self.n} needs m >= n vectors, got m={self.m}")
        if np.any(np.linalg.norm(self.matrix, axis=0) == 0.0):
            raise ZeroColumn("frame has a zero column")
        if linalg.rank(self.matrix, tol) < self.n:
            raise NotAFrame("columns do not span R^n")
        return self

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "columns": self.columns.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "Frame":
        try:
            n, m, columns = int(data["n"]), int(data["m"]), data["columns"]
        except (KeyError, TypeError) as exc:
            raise InvalidShape(f"malformed frame document: {exc}") from exc
        f = cls.from_columns(columns)
        if (f.n, f.m) != (n, m):
            raise InvalidShape(f"header says {n}x{m} but columns give {f.n}x{f.m}")
        return f


def save_frame(f: Frame, path) -> None:
    Path(path).write_text(json.dumps(f.to_dict(), indent=2) + "\n")


def load_frame(path) -> Frame:
    return Frame.from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class ScalingWeights:
    """Nonnegative weights ``u`` with ``sum(u) == 1``.

    The scaled frame uses coefficients ``sqrt(u_k)``; ``support`` lists the
    indices whose weight exceeds ``zero_tol``.
    """

    u: np.ndarray
    zero_tol: float = field(default=0.0)

    def __post_init__(self):
        u = np.array(self.u, dtype=float).ravel()
        if u.size == 0 or not np.all(np.isfinite(u)):
            raise ValueError("weights must be a non-empty finite vector")
        if np.any(u < 0):
            raise NegativeWeight("weights must be nonnegative")
        if abs(u.sum() - 1.0) > 1e-10:
            raise ValueError(f"weights must sum to 1, got {u.sum()!r}")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @classmethod
    def from_vector(cls, v, rel_zero_tol: float = DEFAULT_ZERO_TOL,
                    neg_tol: float = 1e-9) -> "ScalingWeights":
        """Clip round-off negatives, rescale to unit l1 norm and set ``zero_tol``."""
        v = np.array(v, dtype=float).ravel()
        if np.any(v < -neg_tol * max(1.0, float(np.max(np.abs(v))))):
            raise NegativeWeight(f"weight {v.min():.3e} is not nonnegative")
        v = np.clip(v, 0.0, None)
        total = v.sum()
        if total <= 0:
            raise ValueError("weights vanish identically")
        v = v / total
        return cls(v, rel_zero_tol * float(v.max()))

    @property
    def m(self) -> int:
        return self.u.size

    @property
    def support(self) -> np.ndarray:
        return np.flatnonzero(self.u > self.zero_tol)

    @property
    def scaling_matrix(self) -> np.ndarray:
        """The diagonal matrix ``X`` whose square is ``diag(u)``."""
        return np.diag(np.sqrt(self.u))


def mercedes_benz() -> Frame:
    """Three unit vectors at 120 degree spacing; a tight frame with bound 3/2."""
    s = np.sqrt(3.0) / 2.0
    return Frame.from_columns([[0.0, 1.0], [-s, -0.5], [s, -0.5]])


def gaussian_frame(n: int, m: int, seed: int, unit_norm: bool = True) -> Frame:
    """Frame with i.i.d. standard normal entries, redrawn until it spans ``R^n``.

    Attempt ``k`` draws from ``numpy.random.Generator(PCG64(mix_seed(seed, k)))``
    using numpy's ziggurat normal sampler, filling the ``n x m`` matrix in
    row-major order.
    """
    if n < 1 or m < n:
        raise InvalidShape(f"m must be >= n (got n={n}, m={m})")
    for attempt in range(_MAX_REGENERATIONS):
        rng = np.random.Generator(np.random.PCG64(mix_seed(seed, attempt)))
        mat = rng.standard_normal((n, m))
        norms = np.linalg.norm(mat, axis=0)
        if np.any(norms == 0.0) or linalg.rank(mat) < n:
            continue
        if unit_norm:
            mat = mat / norms
        return Frame(mat)
    raise NotAFrame(f"could not draw a spanning frame in {_MAX_REGENERATIONS} attempts")


def normalize_columns(f: Frame) -> Frame:
    norms = np.linalg.norm(f.matrix, axis=0)
    if np.any(norms == 0.0):
        raise ZeroColumn("cannot normalize a zero column")
    return Frame(f.matrix / norms)


def frame_operator(f: Frame) -> np.ndarray:
    mat = f.matrix
    s = mat @ mat.T
    return 0.5 * (s + s.T)


def frame_bounds(f: Frame, tol: float = 1e-12) -> tuple[float, float]:
    """Optimal lower and upper frame bounds (extreme eigenvalues of ``S``)."""
    vals, _ = linalg.sym_eigen(frame_operator(f))
    lower, upper = float(vals[0]), float(vals[-1])
    if lower <= tol * max(1.0, upper):
        raise NotAFrame(f"lower frame bound {lower:.3e} is not positive")
    return lower, upper


def condition_number(f: Frame) -> float:
    lower, upper = frame_bounds(f)
    return upper / lower


def apply_scaling(f: Frame, w: ScalingWeights) -> Frame:
    """Multiply column ``k`` by ``sqrt(u_k)``.

    Columns at or below ``w.zero_tol`` become exact zeros but are kept, so
    column indices stay aligned with the input.
    """
    if w.m != f.m:
        raise DimensionMismatch(f"{w.m} weights for a frame with {f.m} vectors")
    coef = np.where(w.u > w.zero_tol, np.sqrt(w.u), 0.0)
    return Frame(f.matrix * coef)


def tightness_gap(f: Frame) -> float:
    """``||S - (trace(S)/N) I||_F`` for the frame operator ``S``."""
    s = frame_operator(f)
    a = np.trace(s) / f.n
    return float(np.linalg.norm(s - a * np.eye(f.n)))


def is_tight(f: Frame, tol: float = 1e-9) -> bool:
    a = np.trace(frame_operator(f)) / f.n
    return tightness_gap(f) <= tol * max(1.0, a)
