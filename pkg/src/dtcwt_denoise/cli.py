"""Command-line front end: add-noise, denoise, psnr, bench, transform-dump."""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bench import DEFAULT_SIGMAS, METHODS, find_images, load_image, run_bench
from .calibration import MAX_LEVELS
from .dtcwt import ORIENTATIONS, forward
from .imgcore import Image, NoiseSpec, PGMError, add_awgn, load_pgm, psnr, save_pgm
from .pipeline import (
    DEFAULT_SIGMA_R_FACTOR, DEFAULT_SIGMA_S, SUBBAND_NOISE, DenoiseParams, denoise_pyramid, describe,
)
from .shrinkage import ThresholdRule


def _levels(text: str) -> int:
    value = int(text)
    if not 1 <= value <= MAX_LEVELS:
        raise argparse.ArgumentTypeError(f"levels must be in [1, {MAX_LEVELS}], got {value}")
    return value


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _non_negative(text: str) -> float:
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return value


def _float_list(text: str) -> list:
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not values or any(not v > 0 for v in values):
        raise argparse.ArgumentTypeError("sigma values must be positive")
    return values


def _int_list(text: str) -> list:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _method_list(text: str) -> list:
    methods = [m.strip() for m in text.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if unknown or not methods:
        raise argparse.ArgumentTypeError(f"unknown method(s) {unknown}; choose from {', '.join(METHODS)}")
    return methods


def add_denoise_args(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("denoiser parameters")
    g.add_argument("--levels", type=_levels, default=2, help="decomposition levels (default 2)")
    g.add_argument("--sigma-s", type=_positive, default=DEFAULT_SIGMA_S,
                   help=f"bilateral spatial std (default {DEFAULT_SIGMA_S})")
    g.add_argument("--sigma-r", type=_positive, default=None,
                   help="bilateral range std (default: derived from the noise level)")
    g.add_argument("--sigma-r-factor", type=_positive, default=DEFAULT_SIGMA_R_FACTOR,
                   help=f"range std in units of the residue noise std (default {DEFAULT_SIGMA_R_FACTOR})")
    g.add_argument("--radius", type=_positive_int, default=None,
                   help="bilateral window half-width (default ceil(2 sigma_s))")
    g.add_argument("--rule", choices=("bayes", "universal"), default="bayes")
    g.add_argument("--mode", choices=("soft", "hard"), default="soft")
    g.add_argument("--components", action="store_true",
                   help="threshold real and imaginary parts separately")
    g.add_argument("--sigma-n", type=_non_negative, default=None,
                   help="known noise std (default: blind estimate)")
    g.add_argument("--all-scales", action="store_true",
                   help="also filter the lowpass image at every finer level")
    g.add_argument("--subband-noise", choices=SUBBAND_NOISE, default="calibrated")


def params_from_args(args) -> DenoiseParams:
    return DenoiseParams(
        levels=args.levels, sigma_s=args.sigma_s, sigma_r=args.sigma_r,
        sigma_r_factor=args.sigma_r_factor, radius=args.radius,
        rule=ThresholdRule(args.rule, args.mode, args.components),
        known_sigma_n=args.sigma_n, bilateral_all_scales=args.all_scales,
        subband_noise=args.subband_noise)


def _format_params(info: dict) -> str:
    return "\n".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in info.items())


def cmd_add_noise(args) -> int:
    img = load_pgm(args.input)
    noisy = add_awgn(img, NoiseSpec(args.sigma, args.seed))
    save_pgm(noisy, args.output, ascii=args.ascii)
    return 0


def cmd_denoise(args) -> int:
    params = params_from_args(args)
    img = load_pgm(args.input)
    pyr = forward(img.pixels, params.levels)
    print(_format_params(describe(params, pyr)))
    if args.print_params:
        return 0
    out = img.with_pixels(denoise_pyramid(pyr, params))
    save_pgm(out, args.output, ascii=args.ascii)
    return 0


def cmd_psnr(args) -> int:
    ref = load_pgm(args.reference)
    test = load_pgm(args.test)
    value = psnr(ref, test, peak=args.peak)
    print(f"{value:.4f}")
    return 0


def cmd_bench(args) -> int:
    files = find_images(args.image_dir)
    images = {f.stem: load_image(f) for f in files}
    sigmas = list(args.sigmas)
    if args.include_60 and 60.0 not in sigmas:
        sigmas.append(60.0)
    params = params_from_args(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        report = run_bench(images, sigmas=sigmas, seeds=args.seeds, methods=args.methods,
                           params=params, known_sigma=not args.blind,
                           compare_paper=args.compare_paper, jobs=args.jobs)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    csv_text = report.to_csv(args.compare_paper)
    table = report.to_table(args.compare_paper)
    if args.compare_paper:
        table += "paper columns: values reported in the paper (Table I), not recomputed\n"
    if args.csv:
        Path(args.csv).write_text(csv_text)
        meta = dict(report.metadata, images=[str(f) for f in files],
                    timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"))
        Path(str(args.csv) + ".meta.json").write_text(json.dumps(meta, indent=2, default=str) + "\n")
    if args.table:
        Path(args.table).write_text(table)
    sys.stdout.write(table)
    return 0


def _normalize(a: np.ndarray) -> np.ndarray:
    lo, hi = float(a.min()), float(a.max())
    if hi == lo:
        return np.zeros_like(a)
    return (a - lo) * (255.0 / (hi - lo))


def cmd_transform_dump(args) -> int:
    img = load_pgm(args.input)
    pyr = forward(img.pixels, args.levels)
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    levels = [args.level] if args.level else range(1, args.levels + 1)
    orients = [args.orientation] if args.orientation is not None else range(6)
    parts = {"real": np.real, "imag": np.imag, "magnitude": np.abs}
    for k in levels:
        if k > args.levels:
            raise ValueError(f"--level {k} exceeds --levels {args.levels}")
        for o in orients:
            band = pyr.highpasses[k - 1][..., o]
            for part in args.part:
                path = out_dir / f"level{k}_{ORIENTATIONS[o]}deg_{part}.pgm"
                save_pgm(Image(_normalize(parts[part](band))), path)
                print(path)
    if args.lowpass:
        path = out_dir / "lowpass.pgm"
        save_pgm(Image(_normalize(pyr.lowpass)), path)
        print(path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dtcwt-denoise",
        description="Image denoising with the dual-tree complex wavelet transform and bilateral filtering.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("add-noise", help="add seeded white Gaussian noise to a PGM")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=_non_negative, required=True, help="noise std in grey levels")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ascii", action="store_true", help="write plain (P2) PGM")
    p.set_defaults(func=cmd_add_noise)

    p = sub.add_parser("denoise", help="denoise a PGM")
    p.add_argument("input")
    p.add_argument("output", nargs="?")
    add_denoise_args(p)
    p.add_argument("--print-params", action="store_true",
                   help="print the resolved parameters and exit without writing")
    p.add_argument("--ascii", action="store_true", help="write plain (P2) PGM")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("psnr", help="PSNR of a test PGM against a reference PGM")
    p.add_argument("reference")
    p.add_argument("test")
    p.add_argument("--peak", type=_positive, default=None, help="peak value (default: reference maxval)")
    p.set_defaults(func=cmd_psnr)

    p = sub.add_parser("bench", help="PSNR table over images, noise levels and seeds")
    p.add_argument("image_dir", help="directory of clean grayscale images (.pgm, or .png/.tif via Pillow)")
    p.add_argument("--sigmas", type=_float_list, default=list(map(float, DEFAULT_SIGMAS)),
                   help="comma-separated noise stds (default 10,20,30,40,50)")
    p.add_argument("--include-60", action="store_true", help="append sigma 60")
    p.add_argument("--seeds", type=_int_list, default=[0, 1, 2], help="comma-separated seeds (default 0,1,2)")
    p.add_argument("--methods", type=_method_list, default=["noisy", "proposed"],
                   help=f"comma-separated subset of {','.join(METHODS)} (default noisy,proposed)")
    p.add_argument("--blind", action="store_true",
                   help="estimate the noise std instead of using the simulated value")
    p.add_argument("--compare-paper", action="store_true",
                   help="show paper-reported Table I values beside measured ones")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes")
    p.add_argument("--csv", help="write rows as CSV (plus a .meta.json sidecar)")
    p.add_argument("--table", help="write the aligned text table to this file")
    add_denoise_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("transform-dump", help="write DT-CWT subbands as normalized PGMs")
    p.add_argument("input")
    p.add_argument("output_dir")
    p.add_argument("--levels", type=_levels, default=2)
    p.add_argument("--level", type=_levels, default=None, help="only this level")
    p.add_argument("--orientation", type=int, choices=range(6), default=None,
                   help="only this orientation index (0..5 = 15..165 degrees)")
    p.add_argument("--part", nargs="+", choices=("real", "imag", "magnitude"), default=["magnitude"])
    p.add_argument("--lowpass", action="store_true", help="also write the lowpass residue")
    p.set_defaults(func=cmd_transform_dump)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "denoise" and args.output is None and not args.print_params:
        parser.error("denoise: output path required unless --print-params is given")
    try:
        return args.func(args)
    except (OSError, PGMError, ValueError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
