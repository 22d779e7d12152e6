import csv
import io
import json
import math
import warnings

import numpy as np
import pytest

from dtcwt_denoise.bench import (
    BenchReport, BenchRow, PAPER_PSNR, noise_seed, paper_psnr, run_bench,
)
from dtcwt_denoise.cli import main
from dtcwt_denoise.imgcore import Image, load_pgm, psnr, save_pgm


@pytest.fixture
def image_dir(tmp_path, small_camera):
    d = tmp_path / "images"
    d.mkdir()
    save_pgm(Image(small_camera[:64, :64]), d / "lake.pgm")
    return d


@pytest.fixture
def clean_pgm(image_dir):
    return image_dir / "lake.pgm"


class TestAddNoise:
    def test_sigma_zero(self, tmp_path, clean_pgm):
        out = tmp_path / "n.pgm"
        assert main(["add-noise", str(clean_pgm), str(out), "--sigma", "0"]) == 0
        assert load_pgm(out) == load_pgm(clean_pgm)

    def test_same_seed(self, tmp_path, clean_pgm):
        a, b = tmp_path / "a.pgm", tmp_path / "b.pgm"
        main(["add-noise", str(clean_pgm), str(a), "--sigma", "20", "--seed", "4"])
        main(["add-noise", str(clean_pgm), str(b), "--sigma", "20", "--seed", "4"])
        assert a.read_bytes() == b.read_bytes()

    def test_missing_input(self, tmp_path, capsys):
        assert main(["add-noise", str(tmp_path / "none.pgm"), str(tmp_path / "o.pgm"), "--sigma", "1"]) != 0
        assert "error" in capsys.readouterr().err

    def test_malformed_input(self, tmp_path, capsys):
        bad = tmp_path / "bad.pgm"
        bad.write_bytes(b"P5\n4 4\n255\n\x00")
        assert main(["add-noise", str(bad), str(tmp_path / "o.pgm"), "--sigma", "1"]) == 1
        assert "error" in capsys.readouterr().err


class TestDenoise:
    def test_default(self, tmp_path, clean_pgm, capsys):
        noisy, out = tmp_path / "n.pgm", tmp_path / "d.pgm"
        main(["add-noise", str(clean_pgm), str(noisy), "--sigma", "20"])
        capsys.readouterr()
        assert main(["denoise", str(noisy), str(out)]) == 0
        assert load_pgm(out).shape == load_pgm(noisy).shape
        assert "sigma_r=" in capsys.readouterr().out

    def test_levels_zero_is_usage_error(self, clean_pgm, tmp_path):
        with pytest.raises(SystemExit) as exc:
            main(["denoise", str(clean_pgm), str(tmp_path / "d.pgm"), "--levels", "0"])
        assert exc.value.code != 0

    def test_missing_output_is_usage_error(self, clean_pgm):
        with pytest.raises(SystemExit) as exc:
            main(["denoise", str(clean_pgm)])
        assert exc.value.code != 0

    def test_print_params(self, clean_pgm, tmp_path, capsys):
        out = tmp_path / "d.pgm"
        assert main(["denoise", str(clean_pgm), str(out), "--print-params", "--sigma-n", "10",
                     "--rule", "universal", "--mode", "hard", "--levels", "3"]) == 0
        text = capsys.readouterr().out
        values = dict(line.split("=", 1) for line in text.strip().splitlines())
        for key in ("sigma_s", "sigma_r", "radius", "levels", "rule"):
            assert key in values
        assert values["levels"] == "3" and values["rule"] == "universal/hard"
        assert values["radius"] == "4"
        assert not out.exists()

    def test_every_param_flag(self, clean_pgm, tmp_path):
        out = tmp_path / "d.pgm"
        args = ["denoise", str(clean_pgm), str(out), "--levels", "1", "--sigma-s", "1.5",
                "--sigma-r", "12", "--radius", "2", "--rule", "bayes", "--mode", "soft",
                "--components", "--sigma-n", "5", "--all-scales", "--subband-noise", "median",
                "--sigma-r-factor", "3"]
        assert main(args) == 0 and out.exists()


def test_psnr_command(tmp_path, clean_pgm, capsys):
    noisy = tmp_path / "n.pgm"
    main(["add-noise", str(clean_pgm), str(noisy), "--sigma", "10", "--seed", "1"])
    capsys.readouterr()
    assert main(["psnr", str(clean_pgm), str(noisy)]) == 0
    value = float(capsys.readouterr().out)
    assert value == pytest.approx(psnr(load_pgm(clean_pgm), load_pgm(noisy)), abs=1e-4)


def test_transform_dump(tmp_path, clean_pgm, capsys):
    out = tmp_path / "dump"
    assert main(["transform-dump", str(clean_pgm), str(out), "--levels", "2",
                 "--part", "real", "imag", "magnitude", "--lowpass"]) == 0
    files = sorted(p.name for p in out.iterdir())
    assert len(files) == 2 * 6 * 3 + 1
    img = load_pgm(out / "level1_45deg_magnitude.pgm")
    assert img.shape == (32, 32)
    assert img.pixels.min() == 0 and img.pixels.max() == 255


class TestBench:
    def test_five_rows(self, image_dir):
        report = run_bench({"lake": load_pgm(image_dir / "lake.pgm")}, methods=["proposed"], seeds=[0])
        assert len(report.rows) == 5
        assert [r.sigma for r in report.sorted_rows()] == [10, 20, 30, 40, 50]

    def test_cli_outputs(self, image_dir, tmp_path, capsys):
        csv_path = tmp_path / "r.csv"
        assert main(["bench", str(image_dir), "--sigmas", "20", "--seeds", "0,1",
                     "--methods", "noisy,proposed,all-scales", "--compare-paper",
                     "--csv", str(csv_path), "--table", str(tmp_path / "t.txt")]) == 0
        table = capsys.readouterr().out
        assert "paper" in table and "29.06" in table and "28.40" in table
        rows = list(csv.DictReader(io.StringIO(csv_path.read_text())))
        assert list(rows[0]) == ["image", "sigma", "method", "seed_count", "psnr_db", "paper_psnr_db"]
        by_method = {r["method"]: r for r in rows}
        assert by_method["proposed"]["paper_psnr_db"] == "29.06"
        assert by_method["noisy"]["paper_psnr_db"] == ""
        assert by_method["proposed"]["seed_count"] == "2"
        assert float(by_method["noisy"]["psnr_db"]) == pytest.approx(20 * math.log10(255 / 20), abs=0.3)
        meta = json.loads((tmp_path / "r.csv.meta.json").read_text())
        assert meta["seeds"] == [0, 1] and "timestamp" in meta
        assert "timestamp" not in csv_path.read_text()

    def test_include_60(self, image_dir, tmp_path):
        csv_path = tmp_path / "r.csv"
        main(["bench", str(image_dir), "--sigmas", "50", "--include-60", "--seeds", "0",
              "--methods", "proposed", "--csv", str(csv_path)])
        assert [r["sigma"] for r in csv.DictReader(open(csv_path))] == ["50", "60"]

    def test_unknown_method(self, image_dir):
        with pytest.raises(SystemExit):
            main(["bench", str(image_dir), "--methods", "wiener"])
        with pytest.raises(ValueError):
            run_bench({"x": load_pgm(image_dir / "lake.pgm")}, methods=["wiener"])

    def test_empty_dir(self, tmp_path, capsys):
        (tmp_path / "empty").mkdir()
        assert main(["bench", str(tmp_path / "empty")]) == 1
        assert "no images" in capsys.readouterr().err

    def test_duplicate_rows_rejected(self):
        row = BenchRow("a", 10.0, "proposed", 1, 30.0)
        with pytest.raises(ValueError):
            BenchReport([row, row])

    def test_monotonicity_warning(self):
        rows = [BenchRow("a", 10.0, "proposed", 1, 30.0), BenchRow("a", 20.0, "proposed", 1, 31.0)]
        msgs = BenchReport(rows).check_invariants()
        assert any("rises" in m for m in msgs)

    def test_proposed_beats_noisy(self, image_dir):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            report = run_bench({"lake": load_pgm(image_dir / "lake.pgm")}, sigmas=[20, 40],
                               methods=["noisy", "proposed"], seeds=[0])
        by = {(r.sigma, r.method): r.psnr_db for r in report.rows}
        for s in (20, 40):
            assert by[(s, "proposed")] > by[(s, "noisy")]

    def test_all_methods_run(self, image_dir):
        report = run_bench({"lake": load_pgm(image_dir / "lake.pgm")}, sigmas=[30],
                           methods=["noisy", "proposed", "bilateral", "threshold", "all-scales"])
        assert len({r.method for r in report.rows}) == 5
        assert all(math.isfinite(r.psnr_db) and r.psnr_db > 0 for r in report.rows)

    def test_noise_seed(self):
        assert noise_seed(0, 10) == noise_seed(0, 10)
        assert len({noise_seed(s, g) for s in range(3) for g in (10, 20)}) == 6

    def test_paper_table(self):
        assert paper_psnr("Lake", 10, "proposed") == 32.14
        assert paper_psnr("lake", 10, "all-scales") == 31.33
        assert paper_psnr("jetplane", 20, "proposed") == 31.06
        assert paper_psnr("lake", 60, "proposed") is None
        assert paper_psnr("camera", 10, "proposed") is None
        assert set(PAPER_PSNR) == {"barbara", "boats", "lake", "jetplane"}

