"""Scalability of finite frames: find nonnegative weights that make a frame tight."""
from .estimator import FrameScaler
from .fmap import FMatrix, f_dim, f_of_frame, f_of_vector
from .frame import (
    Frame,
    ScalingWeights,
    apply_scaling,
    condition_number,
    frame_bounds,
    frame_operator,
    gaussian_frame,
    is_tight,
    mercedes_benz,
    normalize_columns,
)
from .programs import CoefficientRule, ScalabilityReport, Tolerances, is_scalable

__all__ = [
    "CoefficientRule",
    "FMatrix",
    "Frame",
    "FrameScaler",
    "ScalabilityReport",
    "ScalingWeights",
    "Tolerances",
    "apply_scaling",
    "condition_number",
    "f_dim",
    "f_of_frame",
    "f_of_vector",
    "frame_bounds",
    "frame_operator",
    "gaussian_frame",
    "is_scalable",
    "is_tight",
    "mercedes_benz",
    "normalize_columns",
]
