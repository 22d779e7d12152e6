"""Noise gains of the default filter bank.

For unit-variance white Gaussian input, ``DETAIL_GAINS_RE[k-1][o]`` and
``DETAIL_GAINS_IM[k-1][o]`` are the standard deviations of the real and
imaginary parts of an interior coefficient of level ``k``, orientation
``o``; ``LOWPASS_GAINS[k-1]`` is the standard deviation of an interior sample
of the level-``k`` lowpass image (all four trees pooled). Multiply by the
pixel-domain noise std to get the noise std of a subband.

The real and imaginary parts do not have equal variance at level 1, so a
pooled median of ``|Re|, |Im|`` is not ``0.6745`` times the RMS gain; see
:func:`median_gain`.

The tables are the exact values of ``impulse_gains(5)`` and are locked by a
Monte-Carlo regression test.
"""
from __future__ import annotations

import math

import numpy as np

from .dtcwt import forward
from .filters import FilterBank, default_bank

MAX_LEVELS = 5

DETAIL_GAINS_RE = (
    (0.586162, 0.400921, 0.586162, 0.395827, 0.591811, 0.395827),
    (0.494802, 0.488811, 0.494802, 0.494848, 0.488811, 0.494848),
    (0.500315, 0.500739, 0.500315, 0.501510, 0.500747, 0.501510),
    (0.502353, 0.501817, 0.502353, 0.499807, 0.501852, 0.499807),
    (0.501492, 0.500558, 0.501492, 0.499165, 0.500587, 0.499165),
)

DETAIL_GAINS_IM = (
    (0.395827, 0.591811, 0.395827, 0.586162, 0.400921, 0.586162),
    (0.494848, 0.488811, 0.494848, 0.494802, 0.488811, 0.494802),
    (0.501510, 0.500747, 0.501510, 0.500315, 0.500739, 0.500315),
    (0.499807, 0.501852, 0.499807, 0.502353, 0.501817, 0.502353),
    (0.499165, 0.500587, 0.499165, 0.501492, 0.500558, 0.501492),
)

LOWPASS_GAINS = (0.494862, 0.500913, 0.501082, 0.500330, 0.500087)


def impulse_gains(levels: int = MAX_LEVELS, size: int = 640, batch: int = 8,
                  bank: FilterBank | None = None):
    """Exact gains from impulse responses.

    Level-``k`` coefficients repeat their input weights under input shifts of
    ``2**k``, so the squared norm of one coefficient's weights equals the
    subband response energy summed over one impulse per residue class modulo
    ``2**k``. ``size`` must leave every response clear of the borders.

    Returns ``(re, im, lowpass)`` with shapes ``(levels, 6)``, ``(levels, 6)``
    and ``(levels,)``.
    """
    bank = bank or default_bank()
    re = np.zeros((levels, 6))
    im = np.zeros((levels, 6))
    low = np.zeros(levels)
    for k in range(1, levels + 1):
        period = 2 ** k
        c0 = size // 2 - period // 2
        offsets = [(i, j) for i in range(period) for j in range(period)]
        for start in range(0, len(offsets), batch):
            chunk = offsets[start:start + batch]
            x = np.zeros((len(chunk), size, size))
            for n, (i, j) in enumerate(chunk):
                x[n, c0 + i, c0 + j] = 1.0
            pyr = forward(x, k, bank)
            band = pyr.highpasses[k - 1]
            re[k - 1] += np.sum(band.real ** 2, axis=(0, 1, 2))
            im[k - 1] += np.sum(band.imag ** 2, axis=(0, 1, 2))
            # Four interleaved trees, each a full set of residue classes.
            low[k - 1] += np.sum(pyr.lowpass ** 2) / 4.0
    return np.sqrt(re), np.sqrt(im), np.sqrt(low)


def measure_gains(levels: int = MAX_LEVELS, size: int = 1024, seeds=range(8),
                  bank: FilterBank | None = None, margin: int = 16):
    """Monte-Carlo estimate of the gains (cross-check of :func:`impulse_gains`).

    Coefficients within ``margin`` samples of a border are excluded so the
    symmetric extension does not bias the estimate. Returns ``(re, im, lowpass)``.
    """
    bank = bank or default_bank()
    re = np.zeros((levels, 6))
    im = np.zeros((levels, 6))
    low = np.zeros(levels)
    n_det = np.zeros(levels)
    n_low = np.zeros(levels)
    for seed in seeds:
        x = np.random.default_rng(seed).standard_normal((size, size))
        for k in range(1, levels + 1):
            pyr = forward(x, k, bank)
            band = pyr.highpasses[k - 1]
            m = min(margin, band.shape[0] // 4)
            inner = band[m:band.shape[0] - m, m:band.shape[1] - m]
            re[k - 1] += np.sum(inner.real ** 2, axis=(0, 1))
            im[k - 1] += np.sum(inner.imag ** 2, axis=(0, 1))
            n_det[k - 1] += inner.shape[0] * inner.shape[1]
            lo = pyr.lowpass
            m = min(2 * margin, lo.shape[0] // 4)
            inner = lo[m:lo.shape[0] - m, m:lo.shape[1] - m]
            low[k - 1] += np.sum(inner ** 2)
            n_low[k - 1] += inner.size
    return (np.sqrt(re / n_det[:, None]), np.sqrt(im / n_det[:, None]), np.sqrt(low / n_low))


def _check_level(level: int) -> None:
    if not 1 <= level <= MAX_LEVELS:
        raise ValueError(f"no calibration for level {level}; supported 1..{MAX_LEVELS}")


def detail_gain(level: int, orientation: int) -> float:
    """Per-component RMS gain ``sqrt((g_re**2 + g_im**2) / 2)``."""
    _check_level(level)
    g_re = DETAIL_GAINS_RE[level - 1][orientation]
    g_im = DETAIL_GAINS_IM[level - 1][orientation]
    return math.sqrt(0.5 * (g_re * g_re + g_im * g_im))


def lowpass_gain(level: int) -> float:
    _check_level(level)
    return LOWPASS_GAINS[level - 1]


def mixture_median_abs(stds) -> float:
    """Median of ``|X|`` when ``X`` is an equal mixture of ``N(0, s**2)`` for ``s`` in ``stds``.

    Solves ``mean(erf(m / (s sqrt 2))) = 1/2`` by bisection.
    """
    stds = [float(s) for s in stds]
    if not stds or min(stds) <= 0:
        raise ValueError("standard deviations must be positive")

    def cdf(m):
        return sum(math.erf(m / (s * math.sqrt(2.0))) for s in stds) / len(stds)

    lo, hi = 0.0, 10.0 * max(stds)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < 0.5:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def median_gain(level: int, orientations) -> float:
    """Median of the pooled ``|Re|, |Im|`` of the given subbands per unit input noise."""
    _check_level(level)
    stds = [g[level - 1][o] for o in orientations for g in (DETAIL_GAINS_RE, DETAIL_GAINS_IM)]
    return mixture_median_abs(stds)
