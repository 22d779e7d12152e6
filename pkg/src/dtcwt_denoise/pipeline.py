"""The hybrid denoiser: DT-CWT, bilateral lowpass, thresholded details, inverse."""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .bilateral import BilateralParams, bilateral, default_radius
from .calibration import MAX_LEVELS, lowpass_gain
from .dtcwt import Pyramid, forward, inverse
from .imgcore import like_input, pixels_of
from .shrinkage import ThresholdRule, denoise_details, estimate_noise_sigma

DEFAULT_SIGMA_S = 1.8
DEFAULT_SIGMA_R_FACTOR = 2.0
SUBBAND_NOISE = ("calibrated", "median")


@dataclass(frozen=True)
class DenoiseParams:
    """Parameters of :func:`denoise`.

    ``sigma_r`` fixes the range std explicitly; when it is ``None`` the range
    std is ``sigma_r_factor`` times the noise std of the lowpass residue.
    ``known_sigma_n`` replaces the blind noise estimate.
    """

    levels: int = 2
    sigma_s: float = DEFAULT_SIGMA_S
    sigma_r: Optional[float] = None
    sigma_r_factor: float = DEFAULT_SIGMA_R_FACTOR
    radius: Optional[int] = None
    rule: ThresholdRule = field(default_factory=ThresholdRule)
    known_sigma_n: Optional[float] = None
    bilateral_all_scales: bool = False
    subband_noise: str = "calibrated"

    def __post_init__(self):
        if int(self.levels) != self.levels or not 1 <= self.levels <= MAX_LEVELS:
            raise ValueError(f"levels must be an integer in [1, {MAX_LEVELS}], got {self.levels}")
        if not self.sigma_s > 0:
            raise ValueError(f"sigma_s must be positive, got {self.sigma_s}")
        if self.sigma_r is not None and not self.sigma_r > 0:
            raise ValueError(f"sigma_r must be positive, got {self.sigma_r}")
        if self.sigma_r is None and not self.sigma_r_factor > 0:
            raise ValueError(f"sigma_r_factor must be positive, got {self.sigma_r_factor}")
        if self.radius is not None and (int(self.radius) != self.radius or self.radius < 1):
            raise ValueError(f"radius must be a positive integer, got {self.radius}")
        if self.known_sigma_n is not None and not self.known_sigma_n >= 0:
            raise ValueError(f"known_sigma_n must be >= 0, got {self.known_sigma_n}")
        if self.subband_noise not in SUBBAND_NOISE:
            raise ValueError(f"subband_noise must be one of {SUBBAND_NOISE}, got {self.subband_noise!r}")

    @property
    def resolved_radius(self) -> int:
        return self.radius if self.radius is not None else default_radius(self.sigma_s)


def noise_sigma(pyr: Pyramid, p: DenoiseParams) -> float:
    """Pixel-domain noise std: the supplied value or the blind estimate."""
    if p.known_sigma_n is not None:
        return float(p.known_sigma_n)
    return estimate_noise_sigma(pyr)


def resolve_sigma_r(pyr: Pyramid, p: DenoiseParams, level: Optional[int] = None) -> float:
    """Range std for the bilateral filter on the level-``level`` lowpass
    (default: the residue)."""
    if p.sigma_r is not None:
        return float(p.sigma_r)
    level = pyr.levels if level is None else level
    value = p.sigma_r_factor * noise_sigma(pyr, p) * lowpass_gain(level)
    if not value > 0:
        raise ValueError(f"resolved sigma_r must be positive, got {value}")
    return value


def filter_trees(lowpass: np.ndarray, bp: BilateralParams) -> np.ndarray:
    """Bilateral-filter each of the four interleaved tree images separately."""
    trees = [lowpass[..., i::2, j::2] for i in (0, 1) for j in (0, 1)]
    out = np.empty_like(lowpass)
    for (i, j), t in zip([(0, 0), (0, 1), (1, 0), (1, 1)], trees):
        out[..., i::2, j::2] = bilateral(t, bp)
    return out


def _bilateral_params(pyr, p, level=None):
    try:
        sigma_r = resolve_sigma_r(pyr, p, level)
    except ValueError:
        # No noise detected: the sigma_r -> 0 limit of the filter is the identity.
        return None
    return BilateralParams(p.sigma_s, sigma_r, p.resolved_radius)


def denoise_pyramid(pyr: Pyramid, p: DenoiseParams) -> np.ndarray:
    """Steps 2-4 of :func:`denoise` on an existing pyramid."""
    sigma_n = noise_sigma(pyr, p)
    bp = _bilateral_params(pyr, p)
    lowpass = pyr.lowpass if bp is None else filter_trees(pyr.lowpass, bp)
    cleaned = denoise_details(pyr, sigma_n, p.rule, p.subband_noise)
    cleaned = Pyramid(cleaned.highpasses, lowpass, cleaned.original_shape)
    hook = None
    if p.bilateral_all_scales:
        def hook(level, z):
            bpk = _bilateral_params(pyr, p, level)
            return z if bpk is None else filter_trees(z, bpk)
    return inverse(cleaned, lowpass_hook=hook)


def denoise(img, p: DenoiseParams = DenoiseParams()):
    """Denoise a grayscale image.

    1. forward DT-CWT to ``p.levels`` levels;
    2. bilateral filter on each tree of the lowpass residue;
    3. threshold every detail subband;
    4. inverse DT-CWT, cropped to the input size.
    """
    x = pixels_of(img)
    pyr = forward(x, p.levels)
    return like_input(denoise_pyramid(pyr, p), img)


def describe(p: DenoiseParams, pyr: Optional[Pyramid] = None) -> dict:
    """Resolved parameter values, for logging and ``--print-params``."""
    info = {
        "levels": p.levels,
        "sigma_s": p.sigma_s,
        "radius": p.resolved_radius,
        "rule": f"{p.rule.kind}/{p.rule.mode}" + ("/components" if p.rule.components else ""),
        "bilateral_all_scales": p.bilateral_all_scales,
        "subband_noise": p.subband_noise,
    }
    if pyr is not None:
        info["sigma_n"] = noise_sigma(pyr, p)
        bp = _bilateral_params(pyr, p)
        info["sigma_r"] = bp.sigma_r if bp is not None else 0.0
    else:
        info["sigma_r"] = p.sigma_r if p.sigma_r is not None else f"{p.sigma_r_factor} x residue noise"
    return info


def with_overrides(p: DenoiseParams, **kw) -> DenoiseParams:
    return replace(p, **{k: v for k, v in kw.items() if v is not None})

