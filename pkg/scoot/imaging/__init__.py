"""Image transforms and distortions."""

from .transforms import (
    TransformSpec, apply_transform, downsize_nn, resize_nn, rotate,
    threshold_strokes, to_gray
)
from .distortions import (
    DISTORTION_FAMILIES, add_noise, change_contrast, gaussian_blur,
    remove_components, synthetic_sketch
)

__all__ = [
    "TransformSpec", "apply_transform", "downsize_nn", "resize_nn", "rotate",
    "threshold_strokes", "to_gray",
    "DISTORTION_FAMILIES", "add_noise", "change_contrast", "gaussian_blur",
    "remove_components", "synthetic_sketch",
]
