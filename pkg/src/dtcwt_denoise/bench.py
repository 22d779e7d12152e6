"""Benchmark harness: simulate AWGN, run denoisers, tabulate PSNR."""
from __future__ import annotations

import csv
import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .bilateral import BilateralParams, bilateral
from .dtcwt import forward, inverse
from .imgcore import Image, NoiseSpec, add_awgn, load_pgm, psnr
from .pipeline import DenoiseParams, denoise_pyramid, noise_sigma, resolve_sigma_r
from .shrinkage import denoise_details

DEFAULT_SIGMAS = (10, 20, 30, 40, 50)
METHODS = ("noisy", "proposed", "bilateral", "threshold", "all-scales")

# Paper-reported PSNR (dB), Table I: {image: {sigma: (multiresolution bilateral, proposed)}}.
PAPER_PSNR = {
    "barbara": {10: (31.79, 32.61), 20: (27.74, 28.55), 30: (25.61, 26.83),
                40: (23.10, 23.96), 50: (22.56, 23.29)},
    "boats": {10: (32.58, 33.21), 20: (29.25, 29.87), 30: (27.24, 28.76),
              40: (25.76, 26.30), 50: (24.63, 25.05)},
    "lake": {10: (31.33, 32.14), 20: (28.40, 29.06), 30: (26.57, 26.93),
             40: (24.21, 24.84), 50: (23.36, 23.81)},
    "jetplane": {10: (33.27, 33.88), 20: (30.18, 31.06), 30: (28.20, 28.79),
                 40: (25.95, 26.41), 50: (24.69, 25.16)},
}
_PAPER_COLUMN = {"all-scales": 0, "proposed": 1}

IMAGE_SUFFIXES = (".pgm", ".png", ".tif", ".tiff", ".bmp")


def paper_psnr(image: str, sigma: float, method: str):
    """Paper-reported value for a row, or ``None``.

    ``all-scales`` rows are matched with the multiresolution-bilateral column.
    """
    col = _PAPER_COLUMN.get(method)
    table = PAPER_PSNR.get(image.lower())
    if col is None or table is None or float(sigma) not in table:
        return None
    return table[int(sigma)][col]


def load_image(path) -> Image:
    path = Path(path)
    if path.suffix.lower() == ".pgm":
        return load_pgm(path)
    from PIL import Image as PILImage  # optional convenience, not needed for PGM

    with PILImage.open(path) as im:
        arr = np.asarray(im.convert("L"), dtype=np.float64)
    return Image(arr, 255.0)


def find_images(directory) -> list:
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a directory: {directory}")
    files = sorted(p for p in directory.iterdir() if p.suffix.lower() in IMAGE_SUFFIXES)
    if not files:
        raise ValueError(f"no images found in {directory}")
    return files


def noise_seed(seed: int, sigma: float) -> int:
    """Distinct, reproducible noise seed per (seed, sigma) cell."""
    ss = np.random.SeedSequence([int(seed), int(round(sigma * 1000))])
    return int(ss.generate_state(1, np.uint64)[0])


@dataclass(frozen=True)
class BenchRow:
    image: str
    sigma: float
    method: str
    seed_count: int
    psnr_db: float
    paper_psnr_db: float | None = None


@dataclass
class BenchReport:
    rows: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        keys = [(r.image, r.sigma, r.method) for r in self.rows]
        if len(keys) != len(set(keys)):
            raise ValueError("duplicate (image, sigma, method) rows")

    def sorted_rows(self, methods=METHODS) -> list:
        order = {m: i for i, m in enumerate(methods)}
        return sorted(self.rows, key=lambda r: (r.image.lower(), r.sigma, order.get(r.method, 99)))

    def to_csv(self, compare_paper: bool = False) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["image", "sigma", "method", "seed_count", "psnr_db"]
        if compare_paper:
            header.append("paper_psnr_db")
        writer.writerow(header)
        for r in self.sorted_rows():
            row = [r.image, f"{r.sigma:g}", r.method, r.seed_count, f"{r.psnr_db:.4f}"]
            if compare_paper:
                row.append("" if r.paper_psnr_db is None else f"{r.paper_psnr_db:.2f}")
            writer.writerow(row)
        return buf.getvalue()

    def to_table(self, compare_paper: bool = False) -> str:
        """Aligned text grouped by image, one line per sigma, one column per method."""
        methods = [m for m in METHODS if any(r.method == m for r in self.rows)]
        methods += sorted({r.method for r in self.rows} - set(methods))
        cols = list(methods)
        if compare_paper:
            cols += [f"paper:{m}" for m in methods if m in _PAPER_COLUMN]
        cols.append("closed-form noisy")
        width = max(12, max(len(c) for c in cols) + 2)
        lines = ["Images".ljust(10) + "".join(c.rjust(width) for c in cols)]
        by_key = {(r.image, r.sigma, r.method): r for r in self.rows}
        images = sorted({r.image for r in self.rows}, key=str.lower)
        for image in images:
            lines.append(image)
            for sigma in sorted({r.sigma for r in self.rows if r.image == image}):
                cells = []
                for m in methods:
                    r = by_key.get((image, sigma, m))
                    cells.append("-" if r is None else f"{r.psnr_db:.2f}")
                if compare_paper:
                    for m in methods:
                        if m in _PAPER_COLUMN:
                            ref = paper_psnr(image, sigma, m)
                            cells.append("-" if ref is None else f"{ref:.2f}")
                peak = self.metadata.get("peaks", {}).get(image, 255.0)
                cells.append(f"{20 * math.log10(peak / sigma):.2f}" if sigma > 0 else "inf")
                lines.append(f"  {sigma:<8g}" + "".join(c.rjust(width) for c in cells))
        return "\n".join(lines) + "\n"

    def check_invariants(self) -> list:
        """Warnings for non-monotone PSNR in sigma and for denoisers that lose to the noisy input."""
        msgs = []
        groups = {}
        for r in self.rows:
            groups.setdefault((r.image, r.method), []).append(r)
        for (image, method), rows in sorted(groups.items()):
            rows.sort(key=lambda r: r.sigma)
            for a, b in zip(rows, rows[1:]):
                if b.psnr_db > a.psnr_db:
                    msgs.append(f"{image}/{method}: PSNR rises from sigma {a.sigma:g} to {b.sigma:g}")
        by_key = {(r.image, r.sigma, r.method): r for r in self.rows}
        for (image, sigma, method), r in sorted(by_key.items()):
            noisy = by_key.get((image, sigma, "noisy"))
            if method == "proposed" and noisy is not None and not r.psnr_db > noisy.psnr_db:
                msgs.append(f"{image}/sigma {sigma:g}: proposed does not beat the noisy input")
        return msgs


def run_method(method: str, noisy: Image, params: DenoiseParams) -> np.ndarray:
    x = noisy.pixels
    if method == "noisy":
        return x
    pyr = forward(x, params.levels)
    if method == "proposed":
        return denoise_pyramid(pyr, params)
    if method == "all-scales":
        return denoise_pyramid(pyr, replace(params, bilateral_all_scales=True))
    if method == "threshold":
        cleaned = denoise_details(pyr, noise_sigma(pyr, params), params.rule, params.subband_noise)
        return inverse(cleaned)
    if method == "bilateral":
        sigma_r = resolve_sigma_r(pyr, params)
        return bilateral(x, BilateralParams(params.sigma_s, sigma_r, params.resolved_radius))
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")


def _cell(args):
    name, clean, sigma, seed, methods, params, known = args
    noisy = add_awgn(clean, NoiseSpec(sigma, noise_seed(seed, sigma)))
    p = replace(params, known_sigma_n=float(sigma)) if known else params
    return {m: psnr(clean, clean.with_pixels(run_method(m, noisy, p))) for m in methods}


def run_bench(images: dict, sigmas=DEFAULT_SIGMAS, seeds=(0,), methods=("noisy", "proposed"),
              params: DenoiseParams = DenoiseParams(), known_sigma: bool = True,
              compare_paper: bool = False, jobs: int = 1) -> BenchReport:
    """Average PSNR over ``seeds`` for every image x sigma x method.

    ``images`` maps a display name to a clean :class:`Image`. Results do not
    depend on ``jobs``: cells are independent and the report is sorted.
    """
    for m in methods:
        if m not in METHODS:
            raise ValueError(f"unknown method {m!r}; expected one of {METHODS}")
    if not images:
        raise ValueError("no images to benchmark")
    tasks = [(name, img, float(s), int(seed), tuple(methods), params, known_sigma)
             for name, img in sorted(images.items()) for s in sigmas for seed in seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell, tasks))
    else:
        results = [_cell(t) for t in tasks]
    sums = {}
    for task, res in zip(tasks, results):
        name, _, sigma = task[:3]
        for m, value in res.items():
            sums.setdefault((name, sigma, m), []).append(value)
    rows = [BenchRow(name, sigma, m, len(vals), float(np.mean(vals)),
                     paper_psnr(name, sigma, m) if compare_paper else None)
            for (name, sigma, m), vals in sums.items()]
    meta = {
        "sigmas": [float(s) for s in sigmas],
        "seeds": [int(s) for s in seeds],
        "methods": list(methods),
        "known_sigma": known_sigma,
        "params": {k: (v if not hasattr(v, "__dataclass_fields__") else vars(v))
                   for k, v in vars(params).items()},
        "peaks": {name: img.peak for name, img in images.items()},
    }
    report = BenchReport(rows, meta)
    for msg in report.check_invariants():
        warnings.warn(msg, stacklevel=2)
    return report
