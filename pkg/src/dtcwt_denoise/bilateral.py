"""Spatial Gaussian kernel and the exact (brute-force-equivalent) bilateral filter."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .imgcore import like_input, pixels_of


def gaussian2d(x: float, y: float, s: float) -> float:
    """Normalised isotropic 2-D Gaussian ``exp(-(x^2+y^2)/(2 s^2)) / (2 pi s^2)``."""
    if not s > 0:
        raise ValueError(f"s must be positive, got {s}")
    return math.exp(-(x * x + y * y) / (2.0 * s * s)) / (2.0 * math.pi * s * s)


def default_radius(sigma_s: float) -> int:
    return max(1, math.ceil(2.0 * sigma_s))


@dataclass(frozen=True)
class BilateralParams:
    """``sigma_s`` in pixels, ``sigma_r`` in intensity units, ``radius`` is the
    half-width of the square window (defaults to ``ceil(2 * sigma_s)``)."""

    sigma_s: float
    sigma_r: float
    radius: Optional[int] = None

    def __post_init__(self):
        if not self.sigma_s > 0:
            raise ValueError(f"sigma_s must be positive, got {self.sigma_s}")
        if not self.sigma_r > 0:
            raise ValueError(f"sigma_r must be positive, got {self.sigma_r}")
        if self.radius is None:
            object.__setattr__(self, "radius", default_radius(self.sigma_s))
        elif int(self.radius) != self.radius or self.radius < 1:
            raise ValueError(f"radius must be a positive integer, got {self.radius}")
        else:
            object.__setattr__(self, "radius", int(self.radius))


def _bilateral_array(x: np.ndarray, p: BilateralParams) -> np.ndarray:
    r = p.radius
    h, w = x.shape
    # Padding only keeps slices in range; padded samples get zero weight.
    xp = np.pad(x, r)
    valid = np.pad(np.ones((h, w)), r)
    inv_s = -0.5 / (p.sigma_s * p.sigma_s)
    inv_r = -0.5 / (p.sigma_r * p.sigma_r)
    num = np.zeros((h, w))
    den = np.zeros((h, w))
    # Row-major over the window, so every pixel sums in a fixed order.
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            nb = xp[r + dy:r + dy + h, r + dx:r + dx + w]
            ok = valid[r + dy:r + dy + h, r + dx:r + dx + w]
            diff = nb - x
            wgt = math.exp((dx * dx + dy * dy) * inv_s) * np.exp(diff * diff * inv_r) * ok
            num += wgt * diff
            den += wgt
    # Summing offsets rather than values makes constant regions exact fixed points.
    return x + num / den


def bilateral(img, p: BilateralParams):
    """Bilateral filter with the window clipped at the image border.

    ``out(i) = sum_j Gs(|i-j|) Gr(I(i)-I(j)) I(j) / sum_j Gs Gr`` over the
    in-bounds part of the ``(2r+1)^2`` window. The Gaussian normalisers
    cancel and are dropped. Accepts an :class:`Image`, a 2-D array, or a
    stack of 2-D arrays.
    """
    x = pixels_of(img)
    if x.ndim == 2:
        out = _bilateral_array(x, p)
    elif x.ndim > 2:
        flat = x.reshape((-1,) + x.shape[-2:])
        out = np.stack([_bilateral_array(f, p) for f in flat]).reshape(x.shape)
    else:
        raise ValueError("bilateral expects 2-D input")
    return like_input(out, img)
