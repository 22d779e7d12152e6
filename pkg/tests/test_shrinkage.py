import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dtcwt_denoise.calibration import detail_gain, median_gain
from dtcwt_denoise.dtcwt import DIAGONAL, Pyramid, forward, inverse
from dtcwt_denoise.shrinkage import (
    ThresholdRule, apply_threshold, denoise_details, estimate_noise_sigma,
    hard_threshold_complex, soft_threshold_complex, subband_noise_sigmas, subband_threshold,
)

complexes = st.complex_numbers(max_magnitude=1e6, allow_nan=False, allow_infinity=False)
thresholds = st.floats(0, 1e6)


class TestRule:
    def test_default(self):
        assert ThresholdRule() == ThresholdRule("bayes", "soft", False)

    @pytest.mark.parametrize("kw", [dict(kind="sure"), dict(mode="garrote")])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            ThresholdRule(**kw)


class TestSoft:
    def test_example(self):
        assert abs(soft_threshold_complex(3 + 4j, 2) - (1.8 + 2.4j)) < 1e-9

    def test_zero_threshold(self):
        assert soft_threshold_complex(3 + 4j, 0) == 3 + 4j

    def test_boundary(self):
        assert soft_threshold_complex(3 + 4j, 5) == 0

    def test_vectorised(self):
        out = soft_threshold_complex(np.array([3 + 4j, 0.5j, 0]), 1)
        np.testing.assert_allclose(out, [2.4 + 3.2j, 0, 0])

    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            soft_threshold_complex(1j, -1)

    @settings(max_examples=200)
    @given(c=complexes, d=complexes, t=thresholds)
    def test_contraction(self, c, d, t):
        sc, sd = soft_threshold_complex(c, t), soft_threshold_complex(d, t)
        assert abs(sc) <= abs(c) * (1 + 1e-12)
        assert abs(sc - sd) <= abs(c - d) * (1 + 1e-9) + 1e-9

    @settings(max_examples=200)
    @given(c=complexes, t1=thresholds, t2=thresholds)
    def test_monotone_in_threshold(self, c, t1, t2):
        lo, hi = sorted((t1, t2))
        assert abs(soft_threshold_complex(c, lo)) >= abs(soft_threshold_complex(c, hi)) - 1e-9

    @settings(max_examples=200)
    @given(c=complexes, t=thresholds)
    def test_phase_preserving(self, c, t):
        for f in (soft_threshold_complex, hard_threshold_complex):
            out = f(c, t)
            if out != 0:
                assert abs(out / abs(out) - c / abs(c)) < 1e-9

    @settings(max_examples=100)
    @given(c=complexes, t=thresholds, theta=st.floats(-math.pi, math.pi))
    def test_commutes_with_rotation(self, c, t, theta):
        rot = complex(math.cos(theta), math.sin(theta))
        a = soft_threshold_complex(c * rot, t)
        b = soft_threshold_complex(c, t) * rot
        assert abs(a - b) <= 1e-9 * (1 + abs(c))


class TestHard:
    def test_examples(self):
        assert hard_threshold_complex(3 + 4j, 2) == 3 + 4j
        assert hard_threshold_complex(1 + 0j, 2) == 0
        assert hard_threshold_complex(0j, 0) == 0
        assert hard_threshold_complex(3 + 4j, 5) == 0

    def test_negative_threshold(self):
        with pytest.raises(ValueError):
            hard_threshold_complex(1j, -0.1)


class TestSubbandThreshold:
    def test_universal(self):
        sb = np.zeros((256, 256), complex)
        T = subband_threshold(sb, 10.0, ThresholdRule("universal"))
        assert abs(T - 10 * math.sqrt(2 * math.log(65536))) < 1e-9
        assert T == pytest.approx(47.0964, abs=1e-4)

    def test_bayes_zero_noise(self, rng):
        sb = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
        assert subband_threshold(sb, 0.0, ThresholdRule()) == 0

    def test_bayes_closed_form(self):
        # Per-component variance (9 + 16) / 2 = 12.5; sigma_x = sqrt(12.5 - 4).
        sb = np.full((4, 4), 3 + 4j)
        T = subband_threshold(sb, 2.0, ThresholdRule())
        assert abs(T - 4 / math.sqrt(8.5)) < 1e-9

    def test_bayes_noise_dominated_kills_all(self, rng):
        sb = 0.1 * (rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8)))
        rule = ThresholdRule()
        T = subband_threshold(sb, 5.0, rule)
        assert abs(T - np.max(np.abs(sb))) < 1e-9
        assert np.all(apply_threshold(sb, T, rule) == 0)

    def test_components_mode(self):
        sb = np.array([3 + 0.5j])
        out = apply_threshold(sb, 1.0, ThresholdRule(mode="soft", components=True))
        np.testing.assert_allclose(out, [2 + 0j])

    def test_negative_sigma(self):
        with pytest.raises(ValueError):
            subband_threshold(np.zeros(4, complex), -1, ThresholdRule())


class TestNoiseEstimate:
    def test_zero_pyramid(self):
        assert estimate_noise_sigma(forward(np.zeros((32, 32)), 2)) == 0

    def test_pure_noise(self):
        est = [estimate_noise_sigma(forward(20 * np.random.default_rng(s).standard_normal((512, 512)), 1))
               for s in range(20)]
        assert all(18 <= e <= 22 for e in est)
        # Recorded spread: every seed within a few tenths of a grey level.
        assert np.std(est) < 0.2

    def test_formula(self, rng):
        pyr = forward(rng.standard_normal((64, 64)), 2)
        band = pyr.highpasses[0][..., list(DIAGONAL)]
        pooled = np.concatenate([band.real.ravel(), band.imag.ravel()])
        assert estimate_noise_sigma(pyr) == pytest.approx(np.median(np.abs(pooled)) / median_gain(1, DIAGONAL))

    def test_unbiased_at_other_sizes(self):
        est = [estimate_noise_sigma(forward(20 * np.random.default_rng(s).standard_normal((256, 256)), 2))
               for s in range(10)]
        assert np.mean(est) == pytest.approx(20.0, rel=0.02)

    @pytest.mark.parametrize("alpha", [-3.0, 0.5, 7.0])
    def test_scale_equivariant(self, rng, alpha):
        pyr = forward(rng.standard_normal((64, 64)), 2)
        assert estimate_noise_sigma(pyr.scaled(alpha)) == pytest.approx(abs(alpha) * estimate_noise_sigma(pyr))


class TestDenoiseDetails:
    @pytest.mark.parametrize("estimate", ["median", "calibrated"])
    def test_zero_noise_identity(self, rng, estimate):
        pyr = forward(rng.standard_normal((32, 32)), 3)
        out = denoise_details(pyr, 0.0, ThresholdRule(), estimate)
        for a, b in zip(pyr.highpasses, out.highpasses):
            assert np.array_equal(a, b)

    def test_residue_untouched(self, rng):
        pyr = forward(rng.standard_normal((32, 32)), 2)
        lo = pyr.lowpass.copy()
        out = denoise_details(pyr, 1.0, ThresholdRule("universal", "hard"))
        assert np.array_equal(out.lowpass, lo)
        assert np.array_equal(pyr.lowpass, lo)
        assert out.lowpass is not pyr.lowpass

    @pytest.mark.parametrize("estimate", ["median", "calibrated"])
    def test_universal_on_pure_noise(self, estimate):
        for seed in (0, 1, 2):
            x = 20 * np.random.default_rng(seed).standard_normal((128, 128))
            pyr = forward(x, 3)
            details = Pyramid(pyr.highpasses, np.zeros_like(pyr.lowpass), pyr.original_shape)
            before = np.sum(inverse(details) ** 2)
            cleaned = denoise_details(details, 20.0, ThresholdRule("universal"), estimate)
            after = np.sum(inverse(cleaned) ** 2)
            assert after <= 0.1 * before

    def test_subband_sigmas(self, rng):
        pyr = forward(rng.standard_normal((64, 64)), 2)
        cal = subband_noise_sigmas(pyr, 2.0, "calibrated")
        assert cal.shape == (2, 6)
        assert cal[0, 1] == pytest.approx(2.0 * detail_gain(1, 1))
        med = subband_noise_sigmas(pyr, 1.0, "median")
        np.testing.assert_allclose(med, cal / 2.0, rtol=0.25)
        with pytest.raises(ValueError):
            subband_noise_sigmas(pyr, 1.0, "oracle")
