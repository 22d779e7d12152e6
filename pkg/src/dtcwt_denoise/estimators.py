"""scikit-learn style wrappers.

The estimators hold plain constructor parameters (so ``get_params``,
``set_params`` and ``clone`` work) and are stateless apart from the
validated parameter object built by ``fit``. ``transform`` accepts one
image ``(H, W)`` or a stack ``(N, H, W)``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._validation import check_fitted, check_image, check_same_shape
from .bilateral import BilateralParams, bilateral
from .dtcwt import Pyramid, forward, inverse
from .imgcore import psnr
from .pipeline import DEFAULT_SIGMA_R_FACTOR, DEFAULT_SIGMA_S, DenoiseParams, denoise
from .shrinkage import ThresholdRule


def _per_image(fn, X):
    if X.ndim == 2:
        return fn(X)
    return np.stack([fn(x) for x in X])


class HybridDenoiser(TransformerMixin, BaseEstimator):
    """DT-CWT denoiser: bilateral lowpass residue, thresholded details.

    Parameters
    ----------
    levels : int
        Decomposition depth, 1 to 5.
    sigma_s : float
        Spatial std of the bilateral filter, in residue samples.
    sigma_r : float or None
        Range std; ``None`` derives it from the noise level.
    sigma_r_factor : float
        Multiplier of the residue noise std when ``sigma_r`` is ``None``.
    radius : int or None
        Bilateral window half-width; default ``ceil(2 * sigma_s)``.
    threshold : {"bayes", "universal"}
    mode : {"soft", "hard"}
    components : bool
        Threshold real and imaginary parts separately.
    sigma_n : float or None
        Known noise std; ``None`` estimates it from each image.
    all_scales : bool
        Also bilateral-filter the lowpass image of every finer level.
    subband_noise : {"calibrated", "median"}
        Per-subband noise std: ``sigma_n`` times the stored noise gains, or
        the median estimator applied to each subband.
    """

    def __init__(self, levels=2, sigma_s=DEFAULT_SIGMA_S, sigma_r=None,
                 sigma_r_factor=DEFAULT_SIGMA_R_FACTOR, radius=None, threshold="bayes",
                 mode="soft", components=False, sigma_n=None, all_scales=False,
                 subband_noise="calibrated"):
        self.levels = levels
        self.sigma_s = sigma_s
        self.sigma_r = sigma_r
        self.sigma_r_factor = sigma_r_factor
        self.radius = radius
        self.threshold = threshold
        self.mode = mode
        self.components = components
        self.sigma_n = sigma_n
        self.all_scales = all_scales
        self.subband_noise = subband_noise

    def _make_params(self) -> DenoiseParams:
        return DenoiseParams(
            levels=self.levels, sigma_s=self.sigma_s, sigma_r=self.sigma_r,
            sigma_r_factor=self.sigma_r_factor, radius=self.radius,
            rule=ThresholdRule(self.threshold, self.mode, bool(self.components)),
            known_sigma_n=self.sigma_n, bilateral_all_scales=bool(self.all_scales),
            subband_noise=self.subband_noise)

    def fit(self, X=None, y=None):
        """Validate parameters (and ``X`` if given); nothing is learned."""
        if X is not None:
            check_image(X)
        self.params_ = self._make_params()
        return self

    def transform(self, X):
        check_fitted(self)
        X = check_image(X)
        return _per_image(lambda x: denoise(x, self.params_), X)

    def score(self, X, y):
        """Mean PSNR (dB) of ``transform(X)`` against clean images ``y``."""
        y = check_image(y)
        out = self.transform(X)
        check_same_shape(out, y)
        if out.ndim == 2:
            return psnr(y, out)
        return float(np.mean([psnr(a, b) for a, b in zip(y, out)]))


class BilateralDenoiser(TransformerMixin, BaseEstimator):
    """Pixel-domain bilateral filter, the classical baseline."""

    def __init__(self, sigma_s=DEFAULT_SIGMA_S, sigma_r=20.0, radius=None):
        self.sigma_s = sigma_s
        self.sigma_r = sigma_r
        self.radius = radius

    def fit(self, X=None, y=None):
        if X is not None:
            check_image(X)
        self.params_ = BilateralParams(self.sigma_s, self.sigma_r, self.radius)
        return self

    def transform(self, X):
        check_fitted(self)
        return bilateral(check_image(X), self.params_)


class DTCWT(TransformerMixin, BaseEstimator):
    """Forward transform as ``transform``, inverse as ``inverse_transform``."""

    def __init__(self, levels=2):
        self.levels = levels

    def fit(self, X=None, y=None):
        if int(self.levels) != self.levels or self.levels < 1:
            raise ValueError(f"levels must be a positive integer, got {self.levels}")
        if X is not None:
            check_image(X)
        self.params_ = {"levels": int(self.levels)}
        return self

    def transform(self, X) -> Pyramid:
        check_fitted(self)
        return forward(check_image(X), self.params_["levels"])

    def inverse_transform(self, pyr: Pyramid) -> np.ndarray:
        check_fitted(self)
        return inverse(pyr)
