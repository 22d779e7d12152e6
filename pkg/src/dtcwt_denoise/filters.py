"""Filter tables for the dual-tree complex wavelet transform.

Level 1 uses the near-symmetric 13/19-tap biorthogonal pair (``near_sym_b``),
later levels the 14-tap quarter-shift orthonormal filter (``qshift_b``).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Analysis lowpass, 13 taps, DC gain 1.
NEAR_SYM_B_H0 = (
    -0.0017578125, 0.0, 0.022265625, -0.046875, -0.0482421875, 0.296875,
    0.55546875,
    0.296875, -0.0482421875, -0.046875, 0.022265625, 0.0, -0.0017578125,
)

# Analysis highpass, 19 taps.
NEAR_SYM_B_H1 = (
    -7.062639508928571e-05, 0.0, 0.0013419015066964285,
    -0.0018833705357142855, -0.007156808035714285, 0.023856026785714284,
    0.05564313616071428, -0.05168805803571428, -0.29975760323660716,
    0.5594308035714286,
    -0.29975760323660716, -0.05168805803571428, 0.05564313616071428,
    0.023856026785714284, -0.007156808035714285, -0.0018833705357142855,
    0.0013419015066964285, 0.0, -7.062639508928571e-05,
)

# Tree-a analysis lowpass, 14 taps, unit norm, sum sqrt(2). The published
# qshift_b table leaks 9.3e-7 through its highpass at DC; these values are
# that table projected onto the nearest exactly orthonormal filter whose
# even and odd taps sum to the same value (max change 1.3e-7).
QSHIFT_B_H0A = (
    0.003253131453937845, -0.003883200384190762, 0.03466023000825228,
    -0.03887268833066861, -0.11720401465701731, 0.27529548310269075,
    0.7561455337234387, 0.568810532359082, 0.011865974004314682,
    -0.10671169218758103, 0.023825382688208784, 0.017025223370035193,
    -0.0054394560345875365, -0.004556876742820043,
)


def _alternate(h: np.ndarray, start: int) -> np.ndarray:
    out = h.copy()
    out[start::2] *= -1
    return out


@dataclass(frozen=True)
class FilterBank:
    """Analysis and synthesis filters for both trees.

    ``h0o``/``h1o``/``g0o``/``g1o`` are the odd-length level-1 filters shared
    by both trees (the trees are separated by polyphase sampling at level 1).
    The remaining arrays are the even-length q-shift filters for levels >= 2;
    the ``b`` filters are time reverses of the ``a`` filters.
    """

    h0o: np.ndarray
    h1o: np.ndarray
    g0o: np.ndarray
    g1o: np.ndarray
    h0a: np.ndarray
    h0b: np.ndarray
    h1a: np.ndarray
    h1b: np.ndarray
    g0a: np.ndarray
    g0b: np.ndarray
    g1a: np.ndarray
    g1b: np.ndarray

    def __post_init__(self):
        for name in self.__dataclass_fields__:
            arr = np.asarray(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if len(self.h0o) % 2 != 1 or len(self.h1o) % 2 != 1:
            raise ValueError("level-1 filters must have odd length")
        if len(self.h0a) % 2 != 0:
            raise ValueError("q-shift filters must have even length")

    @classmethod
    def from_prototypes(cls, h0o, h1o, h0a) -> "FilterBank":
        """Build the full bank from the two level-1 analysis filters and the
        tree-a q-shift lowpass."""
        h0o = np.asarray(h0o, dtype=np.float64)
        h1o = np.asarray(h1o, dtype=np.float64)
        h0a = np.asarray(h0a, dtype=np.float64)
        # Biorthogonal synthesis: modulated cross filters.
        g0o = _alternate(h1o, 0)
        g1o = _alternate(h0o, 1)
        h0b = h0a[::-1].copy()
        h1a = _alternate(h0b, 1)
        h1b = h1a[::-1].copy()
        # Orthonormal q-shift: synthesis is the time reverse of analysis.
        return cls(
            h0o=h0o, h1o=h1o, g0o=g0o, g1o=g1o,
            h0a=h0a, h0b=h0b, h1a=h1a, h1b=h1b,
            g0a=h0b, g0b=h0a, g1a=h1b, g1b=h1a,
        )


def default_bank() -> FilterBank:
    """The near_sym_b / qshift_b bank used throughout the package."""
    return FilterBank.from_prototypes(NEAR_SYM_B_H0, NEAR_SYM_B_H1, QSHIFT_B_H0A)
