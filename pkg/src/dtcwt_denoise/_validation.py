"""Input validation shared by the estimators."""
from __future__ import annotations

import numpy as np

from .imgcore import Image


def check_image(X, allow_stack: bool = True, name: str = "X") -> np.ndarray:
    """Return ``X`` as a finite float64 array of shape ``(H, W)`` or ``(N, H, W)``.

    :class:`Image` objects and lists of equally sized images are accepted.
    """
    if isinstance(X, Image):
        X = X.pixels
    elif isinstance(X, (list, tuple)) and X and all(isinstance(x, Image) for x in X):
        X = [x.pixels for x in X]
    try:
        arr = np.asarray(X, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} is not a numeric array: {exc}") from None
    dims = (2, 3) if allow_stack else (2,)
    if arr.ndim not in dims:
        raise ValueError(f"{name} must have {' or '.join(map(str, dims))} dimensions, got {arr.ndim}")
    if arr.size == 0 or min(arr.shape) == 0:
        raise ValueError(f"{name} is empty: shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    return arr


def check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")


def check_fitted(est, attr: str = "params_") -> None:
    from sklearn.exceptions import NotFittedError

    if not hasattr(est, attr):
        raise NotFittedError(f"{type(est).__name__} is not fitted yet; call fit first")
