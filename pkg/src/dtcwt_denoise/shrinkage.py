"""Noise estimation and thresholding of complex detail subbands."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .calibration import MAX_LEVELS, detail_gain, median_gain
from .dtcwt import DIAGONAL, Pyramid

# median(|N(0, 1)|)
MAD_SCALE = 0.6745

KINDS = ("bayes", "universal")
MODES = ("soft", "hard")


@dataclass(frozen=True)
class ThresholdRule:
    """Threshold selection (``kind``) and shrinkage function (``mode``).

    With ``components=True`` the real and imaginary parts are thresholded
    separately instead of the complex magnitude.
    """

    kind: str = "bayes"
    mode: str = "soft"
    components: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown threshold kind {self.kind!r}; expected one of {KINDS}")
        if self.mode not in MODES:
            raise ValueError(f"unknown threshold mode {self.mode!r}; expected one of {MODES}")


def _pooled_abs_median(band: np.ndarray) -> float:
    """Median of the pooled ``|Re|`` and ``|Im|`` of complex coefficients."""
    if band.size == 0:
        return 0.0
    return float(np.median(np.abs(np.concatenate([band.real.ravel(), band.imag.ravel()]))))


def estimate_noise_sigma(pyr: Pyramid) -> float:
    """Robust pixel-domain noise std from the finest +-45 degree subbands.

    The median of the pooled absolute real and imaginary parts is divided by
    its calibrated value per unit input noise. For equal-variance parts that
    value is ``0.6745 * gain``; at level 1 the parts differ, and the exact
    median of the Gaussian mixture is used instead.
    """
    band = pyr.highpasses[0][..., list(DIAGONAL)]
    return _pooled_abs_median(band) / median_gain(1, DIAGONAL)


def soft_threshold_complex(c, T: float):
    """Shrink ``|c|`` by ``T`` keeping the phase; zero when ``|c| <= T``."""
    if T < 0:
        raise ValueError("threshold must be non-negative")
    c = np.asarray(c)
    mag = np.abs(c)
    keep = mag > T
    scale = np.where(keep, (mag - T) / np.where(keep, mag, 1.0), 0.0)
    out = c * scale
    return out.item() if out.ndim == 0 else out


def hard_threshold_complex(c, T: float):
    """Zero coefficients with ``|c| <= T``, keep the rest unchanged."""
    if T < 0:
        raise ValueError("threshold must be non-negative")
    c = np.asarray(c)
    out = np.where(np.abs(c) > T, c, 0)
    out = out.astype(np.result_type(c, float))
    return out.item() if out.ndim == 0 else out


def subband_threshold(subband: np.ndarray, sigma_n: float, rule: ThresholdRule) -> float:
    """Threshold for one complex subband whose per-component noise std is ``sigma_n``.

    universal: ``sigma_n * sqrt(2 ln N)`` with ``N`` the coefficient count.
    bayes: ``sigma_n**2 / sigma_x`` where ``sigma_x**2`` is the per-component
    signal variance left after removing the noise; if nothing is left the
    threshold is ``max |c|`` so the whole subband is zeroed.
    """
    if sigma_n < 0:
        raise ValueError("sigma_n must be non-negative")
    c = np.asarray(subband)
    if rule.kind == "universal":
        n = c.size
        return float(sigma_n * math.sqrt(2.0 * math.log(n))) if n > 1 else 0.0
    if sigma_n == 0:
        return 0.0
    # Per-component variance: complex coefficients carry two components.
    var_y = float(np.mean(np.abs(c) ** 2) / (2.0 if np.iscomplexobj(c) else 1.0))
    sigma_x = math.sqrt(max(var_y - sigma_n ** 2, 0.0))
    if sigma_x == 0:
        return float(np.max(np.abs(c))) if c.size else 0.0
    return sigma_n ** 2 / sigma_x


def apply_threshold(subband: np.ndarray, T: float, rule: ThresholdRule) -> np.ndarray:
    shrink = soft_threshold_complex if rule.mode == "soft" else hard_threshold_complex
    if rule.components:
        return shrink(subband.real, T) + 1j * shrink(subband.imag, T)
    return shrink(subband, T)


def subband_noise_sigmas(pyr: Pyramid, sigma_n: float, estimate: str = "calibrated") -> np.ndarray:
    """Per-component noise std of every subband, shape ``(levels, 6)``.

    ``calibrated`` scales the pixel-domain ``sigma_n`` by the stored gains;
    ``median`` applies the median estimator to each subband on its own.
    ``sigma_n == 0`` declares a noise-free image in both modes.
    """
    levels = pyr.levels
    if estimate in ("median", "calibrated") and sigma_n == 0:
        return np.zeros((levels, 6))
    if estimate == "calibrated":
        if levels > MAX_LEVELS:
            raise ValueError(f"calibrated gains cover at most {MAX_LEVELS} levels")
        return np.array([[sigma_n * detail_gain(k, o) for o in range(6)]
                         for k in range(1, levels + 1)])
    if estimate == "median":
        out = np.empty((levels, 6))
        for k, band in enumerate(pyr.highpasses, start=1):
            for o in range(6):
                med = _pooled_abs_median(band[..., o])
                if k <= MAX_LEVELS:
                    # Convert the pooled median to a per-component RMS std.
                    out[k - 1, o] = med * detail_gain(k, o) / median_gain(k, (o,))
                else:
                    out[k - 1, o] = med / MAD_SCALE
        return out
    raise ValueError(f"unknown subband noise estimate {estimate!r}")


def denoise_details(pyr: Pyramid, sigma_n: float, rule: ThresholdRule = ThresholdRule(),
                    estimate: str = "calibrated") -> Pyramid:
    """Threshold every detail subband; the lowpass residue is passed through.

    ``sigma_n`` is the pixel-domain noise std. Returns a new pyramid.
    """
    if sigma_n < 0:
        raise ValueError("sigma_n must be non-negative")
    sigmas = subband_noise_sigmas(pyr, sigma_n, estimate)
    out = []
    for k, band in enumerate(pyr.highpasses):
        new = np.empty_like(band)
        for o in range(6):
            sb = band[..., o]
            T = subband_threshold(sb, sigmas[k, o], rule)
            new[..., o] = apply_threshold(sb, T, rule)
        out.append(new)
    return Pyramid(out, pyr.lowpass.copy(), tuple(pyr.original_shape))
