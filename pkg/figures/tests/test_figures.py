import csv
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1]))

from figures import main  # noqa: E402

SUMMARY_HEADER = ["algo", "stepsize", "restart", "ablation", "fn", "dim",
                  "eff_dim", "trials", "successes", "success_rate",
                  "median_evals", "q25_evals", "q75_evals",
                  "evals_div_success"]
TRACE_HEADER = ["trial", "iteration", "coord", "v_snr", "v", "align"]


def write_summary(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        for algo, dim, eff, rate, median, q25, q75 in rows:
            writer.writerow([algo, "csa", "none", "none", 1, dim, eff, 20,
                             int(rate * 20), rate, median, q25, q75,
                             median / rate if rate else ""])


def write_trace(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_HEADER)
        for row in rows:
            writer.writerow(row)


def test_scaling_points_equal_median_over_success_rate(tmp_path, capsys):
    summary = tmp_path / "summary.csv"
    write_summary(summary, [
        ("cmaes", 8, 8, 1.0, 1000.0, 900.0, 1100.0),
        ("cmaes", 40, 8, 0.5, 3000.0, 2500.0, 3500.0),
        ("led", 8, 8, 1.0, 950.0, 900.0, 1000.0),
        ("led", 40, 8, 1.0, 1500.0, 1400.0, 1600.0),
    ])
    out = tmp_path / "scaling.png"
    code = main(["--kind", "scaling", "--in", str(summary), "--out",
                 str(out), "--dump-points"])
    assert code == 0
    assert out.exists()
    printed = capsys.readouterr().out
    points = {}
    for line in printed.splitlines():
        if line.startswith("point "):
            _, algo, stepsize, x, y, rate = line.split()
            points[(algo, int(x.split("=")[1]))] = (
                y.split("=", 1)[1], float(rate.split("=")[1]))
    # y is exactly median / success_rate
    assert float(points[("cmaes", 0)][0]) == 1000.0 / 1.0
    assert float(points[("cmaes", 32)][0]) == 3000.0 / 0.5
    assert float(points[("led", 32)][0]) == 1500.0 / 1.0


def test_scaling_zero_success_point_omitted(tmp_path, capsys):
    summary = tmp_path / "summary.csv"
    with open(summary, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_HEADER)
        writer.writerow(["cmaes", "csa", "none", "none", 1, 8, 8, 20, 20,
                         1.0, 1000.0, 900.0, 1100.0, 1000.0])
        writer.writerow(["cmaes", "csa", "none", "none", 1, 40, 8, 20, 0,
                         0.0, "", "", "", ""])
    out = tmp_path / "scaling.png"
    assert main(["--kind", "scaling", "--in", str(summary), "--out",
                 str(out), "--dump-points"]) == 0
    printed = capsys.readouterr().out
    omitted = [line for line in printed.splitlines()
               if line.startswith("point") and "x=32" in line]
    assert len(omitted) == 1
    assert "y= " in omitted[0]  # no y value, annotation only
    assert out.exists()


def test_scaling_identical_series_overlap(tmp_path):
    summary = tmp_path / "summary.csv"
    write_summary(summary, [
        ("cmaes", 8, 8, 1.0, 1000.0, 900.0, 1100.0),
        ("led", 8, 8, 1.0, 1000.0, 900.0, 1100.0),
    ])
    out = tmp_path / "overlap.png"
    assert main(["--kind", "scaling", "--in", str(summary),
                 "--out", str(out)]) == 0
    assert out.exists()


def test_scaling_missing_column_is_named(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    with open(bad, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["algo", "stepsize", "dim"])  # truncated header
        writer.writerow(["cmaes", "csa", 8])
    assert main(["--kind", "scaling", "--in", str(bad),
                 "--out", str(tmp_path / "x.png")]) == 2
    assert "eff_dim" in capsys.readouterr().err


def test_trace_missing_led_columns_mentions_flag(tmp_path, capsys):
    bad = tmp_path / "trace.csv"
    with open(bad, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["trial", "iteration", "coord"])
        writer.writerow([0, 1, 0])
    assert main(["--kind", "snr", "--in", str(bad),
                 "--out", str(tmp_path / "x.png")]) == 2
    assert "--trace-led" in capsys.readouterr().err


def test_snr_trace_band_and_median(tmp_path, capsys):
    trace = tmp_path / "led_trace.csv"
    rows = []
    for it in (1, 2):
        for coord, value in enumerate((0.1 * it, 0.3 * it, 0.2 * it)):
            rows.append([0, it, coord, value, 1.0, 0.5])
    write_trace(trace, rows)
    out = tmp_path / "snr.png"
    assert main(["--kind", "snr", "--in", str(trace), "--out", str(out),
                 "--dump-points"]) == 0
    printed = capsys.readouterr().out
    lines = [l for l in printed.splitlines() if l.startswith("band")]
    assert "band iter=1 min=0.1 max=0.3 median=0.2" in lines[0]
    assert out.exists()


def test_alignment_trace_constant_series(tmp_path, capsys):
    trace = tmp_path / "led_trace.csv"
    rows = [[0, it, coord, 0.01, 1.0, 0.9 if coord == 0 else 0.1]
            for it in (1, 2, 3) for coord in (0, 1)]
    write_trace(trace, rows)
    out = tmp_path / "align.png"
    assert main(["--kind", "alignment", "--in", str(trace), "--out",
                 str(out), "--dump-points"]) == 0
    printed = capsys.readouterr().out
    assert "final coord=0 value=0.9" in printed
    assert "final coord=1 value=0.1" in printed
    assert out.exists()


def test_single_iteration_trace_renders(tmp_path):
    trace = tmp_path / "led_trace.csv"
    write_trace(trace, [[0, 1, 0, 0.2, 1.0, 0.7]])
    out = tmp_path / "single.png"
    assert main(["--kind", "snr", "--in", str(trace),
                 "--out", str(out)]) == 0
    assert out.exists()
