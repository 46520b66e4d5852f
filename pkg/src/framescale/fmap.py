"""The quadratic map F whose nonnegative kernel decides scalability.

For ``x`` in ``R^N`` (0-based indices below), ``F(x)`` stacks

* ``x[0]**2 - x[j]**2`` for ``j = 1 .. N-1``, then
* ``x[k] * x[j]`` for ``k = 0 .. N-2`` and ``j = k+1 .. N-1``,

giving ``d = (N-1)(N+2)/2`` entries. ``F(Phi) u = 0`` holds exactly when
``sum_k u_k phi_k phi_k^T`` is a multiple of the identity. The row order is a
stable format: downstream files and LPs index into it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidDimension
from .frame import Frame


def f_dim(n: int) -> int:
    if n < 2:
        raise InvalidDimension(f"F is defined for n >= 2, got n={n}")
    return (n - 1) * (n + 2) // 2


def _f_rows(x: np.ndarray) -> np.ndarray:
    # x has shape (n, ...) so one call handles a single vector or a whole frame
    n = x.shape[0]
    blocks = [x[0] ** 2 - x[1:] ** 2]
    for k in range(n - 1):
        blocks.append(x[k] * x[k + 1:])
    return np.concatenate(blocks, axis=0)


def f_of_vector(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).ravel()
    f_dim(x.size)
    return _f_rows(x)


@dataclass(frozen=True)
class FMatrix:
    """``F(Phi)``: a ``d x M`` matrix with column ``k`` equal to ``F(phi_k)``."""

    entries: np.ndarray
    n: int

    def __post_init__(self):
        arr = np.asarray(self.entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != f_dim(self.n):
            raise InvalidDimension(
                f"F matrix for n={self.n} needs {f_dim(self.n)} rows, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def d(self) -> int:
        return self.entries.shape[0]

    @property
    def m(self) -> int:
        return self.entries.shape[1]

    def column_norms(self) -> np.ndarray:
        return np.linalg.norm(self.entries, axis=0)


def f_of_frame(f: Frame) -> FMatrix:
    f_dim(f.n)
    return FMatrix(_f_rows(np.asarray(f.matrix)), f.n)
