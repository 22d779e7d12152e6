"""Grayscale image denoising: DT-CWT detail thresholding plus bilateral filtering of the lowpass."""
from .bilateral import BilateralParams, bilateral
from .dtcwt import Pyramid, forward, inverse, shift_invariance_metric
from .estimators import DTCWT, BilateralDenoiser, HybridDenoiser
from .imgcore import Image, NoiseSpec, add_awgn, load_pgm, mse, psnr, save_pgm
from .pipeline import DenoiseParams, denoise
from .shrinkage import ThresholdRule, estimate_noise_sigma

__version__ = "0.1.0"

__all__ = [
    "BilateralDenoiser", "BilateralParams", "DTCWT", "DenoiseParams", "HybridDenoiser", "Image",
    "NoiseSpec", "Pyramid", "ThresholdRule", "add_awgn", "bilateral", "denoise",
    "estimate_noise_sigma", "forward", "inverse", "load_pgm", "mse", "psnr", "save_pgm",
    "shift_invariance_metric",
]
