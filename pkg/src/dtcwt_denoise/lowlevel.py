"""1-D filtering primitives applied along one axis of an array.

All three use half-sample symmetric extension (end samples repeated).
``coldfilt``/``colifilt`` operate on composite signals whose even and odd
samples belong to the two trees; reflecting the composite at a boundary maps
one tree onto the other, which is what keeps the q-shift stages perfectly
reconstructing under symmetric extension.
"""
from __future__ import annotations

import numpy as np


def reflect_index(idx: np.ndarray, n: int) -> np.ndarray:
    """Map integer positions onto ``[0, n)`` by half-sample symmetric reflection.

    >>> reflect_index(np.arange(-3, 7), 4)
    array([2, 1, 0, 0, 1, 2, 3, 3, 2, 1])
    """
    m = np.mod(idx, 2 * n)
    return np.where(m < n, m, 2 * n - 1 - m)


def _gather(x, idx, axis):
    return np.take(x, reflect_index(idx, x.shape[axis]), axis=axis)


def _slot(axis, ndim, sl):
    index = [slice(None)] * ndim
    index[axis] = sl
    return tuple(index)


def colfilter(x: np.ndarray, h: np.ndarray, axis: int = -2) -> np.ndarray:
    """Undecimated filtering with an odd-length filter centred on each sample."""
    m = len(h)
    if m % 2 != 1:
        raise ValueError("colfilter needs an odd-length filter")
    half = m // 2
    n = np.arange(x.shape[axis])
    y = np.zeros_like(x, dtype=np.float64)
    for k, hk in enumerate(h):
        if hk != 0.0:
            y += hk * _gather(x, n + half - k, axis)
    return y


def coldfilt(x: np.ndarray, ha: np.ndarray, hb: np.ndarray, axis: int = -2) -> np.ndarray:
    """Filter with ``ha`` and ``hb`` on the two polyphase trees and decimate by 2.

    The output interleaves the two tree outputs; which tree lands on the even
    output samples depends on the sign of ``sum(ha * hb)``.
    """
    r = x.shape[axis]
    m = len(ha)
    if r % 4 != 0:
        raise ValueError(f"coldfilt needs a length divisible by 4, got {r}")
    if len(hb) != m or m % 2 != 0:
        raise ValueError("coldfilt needs two even filters of equal length")
    q = 4 * np.arange(r // 4)
    ya = 0.0
    yb = 0.0
    for k in range(m):
        ya = ya + ha[k] * _gather(x, q + m - 2 * k, axis)
        yb = yb + hb[k] * _gather(x, q + m + 1 - 2 * k, axis)
    shape = list(x.shape)
    shape[axis] = r // 2
    y = np.empty(shape)
    first, second = (ya, yb) if np.dot(ha, hb) > 0 else (yb, ya)
    y[_slot(axis, x.ndim, slice(0, None, 2))] = first
    y[_slot(axis, x.ndim, slice(1, None, 2))] = second
    return y


def colifilt(x: np.ndarray, ha: np.ndarray, hb: np.ndarray, axis: int = -2) -> np.ndarray:
    """Interpolate by 2 with the tree filters ``ha`` and ``hb``; inverse partner
    of :func:`coldfilt`."""
    r = x.shape[axis]
    m = len(ha)
    if r % 2 != 0:
        raise ValueError(f"colifilt needs an even length, got {r}")
    if len(hb) != m or m % 2 != 0:
        raise ValueError("colifilt needs two even filters of equal length")
    half = m // 2
    # Each tree reads composite samples of one parity: even ones at offset
    # half - 1, odd ones at offset half.
    if np.dot(ha, hb) > 0:
        off_a, off_b = half - 1, half
    else:
        off_a, off_b = half, half - 1
    par_a = off_a - (half - 1)
    par_b = 1 - par_a

    shape = list(x.shape)
    shape[axis] = r
    ya = np.zeros(shape)
    yb = np.zeros(shape)
    for k in range(m):
        # Output positions s where (s + off - k) has the tree's parity.
        sa = (par_a - off_a + k) % 2
        s = np.arange(sa, r, 2)
        ya[_slot(axis, x.ndim, slice(sa, None, 2))] += ha[k] * _gather(x, s + off_a - k, axis)
        sb = (par_b - off_b + k) % 2
        s = np.arange(sb, r, 2)
        yb[_slot(axis, x.ndim, slice(sb, None, 2))] += hb[k] * _gather(x, s + off_b - k, axis)
    shape[axis] = 2 * r
    y = np.empty(shape)
    y[_slot(axis, x.ndim, slice(0, None, 2))] = ya
    y[_slot(axis, x.ndim, slice(1, None, 2))] = yb
    return y
