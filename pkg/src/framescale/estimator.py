"""scikit-learn style wrapper around :func:`framescale.programs.is_scalable`.

``X`` follows the sklearn convention of one sample per row, so each row is a
frame vector: an ``(M, N)`` array describes ``M`` vectors in ``R^N``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .auglag import AugLagOptions
from .barrier import BarrierOptions
from .exceptions import DimensionMismatch, NotScalable
from .frame import Frame
from .programs import METHODS, CoefficientRule, Tolerances, is_scalable


def check_frame_array(X) -> np.ndarray:
    """Validate an ``(M, N)`` array of frame vectors with ``M >= N >= 2``."""
    X = check_array(X, dtype=np.float64, ensure_min_samples=2, ensure_min_features=2)
    if X.shape[0] < X.shape[1]:
        raise ValueError(f"need at least as many vectors as dimensions, got {X.shape}")
    return X


class FrameScaler(TransformerMixin, BaseEstimator):
    """Find nonnegative weights that make a frame tight.

    Parameters
    ----------
    method : {"lp", "maximin", "barrier", "auglag", "oracle"}
        Solver used by :meth:`fit`.
    coef : {"ones", "inv-fnorm"}
        LP cost vector, only used by ``method="lp"``.
    tol_feas, tol_zero, tol_tight : float
        Feasibility tolerance, support threshold relative to ``max(u)``, and
        tightness tolerance for validating a positive answer.
    epsilon : float
        Shift inside the log barrier.
    update_mode : {"classical", "paper-literal"}
        Multiplier update for the augmented Lagrangian.

    Attributes
    ----------
    scalable_ : bool
    weights_ : ndarray of shape (M,) or None
        ``u`` with ``sum(u) == 1``; the rows of :meth:`transform` are scaled by
        ``sqrt(u)``.
    support_ : ndarray of int
    report_ : ScalabilityReport
    """

    def __init__(self, method="lp", coef="ones", tol_feas=1e-9, tol_zero=1e-8,
                 tol_tight=1e-6, epsilon=1e-8, update_mode="classical"):
        self.method = method
        self.coef = coef
        self.tol_feas = tol_feas
        self.tol_zero = tol_zero
        self.tol_tight = tol_tight
        self.epsilon = epsilon
        self.update_mode = update_mode

    def fit(self, X, y=None):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        X = check_frame_array(X)
        self.n_features_in_ = X.shape[1]
        tols = Tolerances(feas=self.tol_feas, zero=self.tol_zero, tight=self.tol_tight)
        self.report_ = is_scalable(
            Frame(X.T), self.method, CoefficientRule(self.coef), tols,
            barrier_options=BarrierOptions(epsilon=self.epsilon),
            auglag_options=AugLagOptions(update_mode=self.update_mode),
        )
        self.scalable_ = self.report_.scalable
        if self.scalable_:
            self.weights_ = np.array(self.report_.weights.u)
            self.support_ = self.report_.weights.support
        else:
            self.weights_ = None
            self.support_ = np.array([], dtype=int)
        return self

    def transform(self, X):
        """Return ``sqrt(u_k) * x_k`` for every row ``x_k`` of ``X``."""
        check_is_fitted(self, "scalable_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise DimensionMismatch(
                f"X has {X.shape[1]} features, fitted with {self.n_features_in_}")
        if not self.scalable_:
            raise NotScalable("the fitted frame is not scalable")
        if X.shape[0] != self.weights_.size:
            raise DimensionMismatch(f"X has {X.shape[0]} vectors, weights cover {self.weights_.size}")
        coef = np.where(self.weights_ > self.report_.weights.zero_tol, np.sqrt(self.weights_), 0.0)
        return X * coef[:, None]
