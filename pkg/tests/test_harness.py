import io
import json
import math

import numpy as np
import pytest

from zonal.asymptotics import AngleWindow, c_constant_leading
from zonal.harness import (
    CSV_HEADER,
    bracket_errors_on_grid,
    c_constant_convergence,
    compare_rows,
    crossover_benchmark,
    fit_error_scaling,
    format_float,
    geometric_oracle,
    json_summary,
    relative_bracket_error,
    write_csv,
)
from zonal.special import ZonalIndex


def test_bracket_errors_on_grid_shapes():
    idx = ZonalIndex(n=2, k=32)
    window = AngleWindow()
    thetas, exact, lead, rel = bracket_errors_on_grid(idx, window, grid_size=64)
    assert thetas.shape == exact.shape == rel.shape == (64,)
    lo, hi = window.bounds(32)
    assert np.all((thetas > lo) & (thetas < hi))
    assert np.all(rel >= 0.0)
    assert np.asarray(lead.value).shape == (64,)


def test_relative_bracket_error_circle_closes():
    # the n=1 bracket is exactly the cosine, so only rounding remains
    for k in (8, 64, 512):
        assert relative_bracket_error(ZonalIndex(n=1, k=k), AngleWindow()) < 1e-13


def test_relative_bracket_error_decreases_with_degree():
    window = AngleWindow()
    errs = [relative_bracket_error(ZonalIndex(n=2, k=k), window) for k in (256, 1024)]
    assert errs[1] < errs[0]


def test_wider_window_is_harder():
    idx = ZonalIndex(n=2, k=256)
    narrow = relative_bracket_error(idx, AngleWindow())
    wide = relative_bracket_error(idx, AngleWindow(c=1.0, delta=0.1))
    assert wide >= narrow


def test_fit_error_scaling_exact_circle():
    fit = fit_error_scaling(1, (64, 128, 256))
    assert fit.exact
    assert math.isnan(fit.slope)
    assert fit.r_squared == 1.0
    assert all(math.isfinite(x) and math.isfinite(y) for x, y in fit.points)


def test_fit_error_scaling_slope_band():
    for n in (2, 3):
        fit = fit_error_scaling(n, (64, 128, 256, 512))
        assert not fit.exact
        assert -1.4 < fit.slope < -0.6
        assert fit.r_squared > 0.9


def test_fit_error_scaling_validation():
    with pytest.raises(ValueError):
        fit_error_scaling(2, (64,))
    with pytest.raises(ValueError):
        fit_error_scaling(2, (0, 64))


def test_scaling_fit_points_and_dict():
    fit = fit_error_scaling(2, (64, 128))
    assert fit.points == tuple(
        (math.log(float(k)), math.log(e)) for k, e in zip(fit.ks, fit.errors)
    )
    doc = fit.as_dict()
    assert doc["ks"] == [64, 128]
    assert doc["points"] == [list(p) for p in fit.points]
    assert set(doc) == {
        "n", "C", "delta", "ks", "errors", "points", "slope", "intercept", "r_squared", "exact",
    }


def test_c_constant_convergence_rows():
    rows = c_constant_convergence(2, (2, 4), samples=20_000, seed=5)
    assert [r.k for r in rows] == [2, 4]
    for row in rows:
        lead = c_constant_leading(ZonalIndex(n=2, k=row.k))
        assert row.leading == lead
        assert row.ratio == row.numeric / lead
        assert row.ratio_stderr == row.stderr / lead
        assert 0.8 < row.ratio < 1.5
        assert row.stderr > 0.0


def test_crossover_benchmark_validation():
    with pytest.raises(ValueError):
        crossover_benchmark(2, (4,), batch=50_000)
    with pytest.raises(ValueError):
        crossover_benchmark(2, (4,), error_budget=0.0)


def test_crossover_benchmark_report():
    report = crossover_benchmark(2, (2048, 4), batch=100_000, reps=3)
    assert [r.k for r in report.rows] == [4, 2048]
    small, large = report.rows
    # recurrence cost grows with degree; the leading form does not
    assert large.exact_ns > 10.0 * small.exact_ns
    assert large.asymptotic_ns < large.exact_ns / 10.0
    assert large.max_rel_err < small.max_rel_err
    assert small.max_rel_err > 1e-2  # k=4 can never satisfy the default budget
    assert report.k_star == 2048
    doc = report.as_dict()
    assert doc["k_star"] == 2048
    assert len(doc["rows"]) == 2


def test_crossover_benchmark_unreachable_budget():
    report = crossover_benchmark(2, (4, 2048), error_budget=1e-6, batch=100_000, reps=2)
    assert report.k_star is None


def test_format_float_round_trip():
    for x in (0.1, 1.0 / 3.0, 1e-300, 2.0, -0.0, math.pi):
        assert float(format_float(x)) == x
    assert format_float(2) == "2.0"


def test_write_csv_schema():
    rows = compare_rows(ZonalIndex(n=2, k=16), AngleWindow(), grid_size=4)
    text = write_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "n,k,delta,C,theta,exact,asymptotic,abs_err,rel_err"
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "2" and first[1] == "16"  # integers stay integers
    assert float(first[4]) > 0.0
    stream = io.StringIO()
    echoed = write_csv(rows, stream)
    assert stream.getvalue() == echoed == text


def test_compare_rows_contents():
    window = AngleWindow(c=1.0, delta=0.1)
    rows = compare_rows(ZonalIndex(n=2, k=64), window, grid_size=8)
    for row in rows:
        assert set(row) == set(CSV_HEADER)
        assert row["n"] == 2 and row["k"] == 64
        assert row["delta"] == 0.1 and row["C"] == 1.0
        np.testing.assert_allclose(row["abs_err"], abs(row["exact"] - row["asymptotic"]), rtol=1e-12)


def test_json_summary_layout():
    text = json_summary("demo", {"n": 2}, {"alpha": 1.5})
    assert text.endswith("\n")
    doc = json.loads(text)
    assert doc["schema_version"] == 1
    assert doc["kind"] == "demo"
    assert doc["config"] == {"n": 2}
    assert doc["alpha"] == 1.5
    # keys are serialized sorted for byte-stable output
    assert text.index('"alpha"') < text.index('"config"') < text.index('"kind"')


def test_geometric_oracle_validation():
    with pytest.raises(ValueError):
        geometric_oracle(2, (), samples=30_000, pairs=2, seed=1)
    with pytest.raises(ValueError):
        geometric_oracle(2, (2,), samples=30_000, pairs=0, seed=1)


def test_geometric_oracle_report():
    out = geometric_oracle(2, (2, 3), samples=30_000, pairs=3, seed=123)
    assert set(out) == {"n", "samples", "pairs", "degrees", "decay"}
    assert out["n"] == 2 and out["samples"] == 30_000 and out["pairs"] == 3
    assert [d["k"] for d in out["degrees"]] == [2, 3]
    for deg in out["degrees"]:
        assert len(deg["pairs"]) == 3
        for row in deg["pairs"]:
            assert set(row) == {"dot", "pushforward", "predicted", "residual"}
        assert deg["max_residual"] == max(r["residual"] for r in deg["pairs"])
        assert deg["max_residual"] < 0.1
        assert deg["diagonal_residual"] < 0.1
        assert 0.9 < deg["c_ratio"] < 1.1
    decay = out["decay"]
    assert decay["ks"] == [2, 3]
    assert decay["monotone_until_floor"] is True
    assert decay["superpolynomial"] is None  # two degrees cannot show curvature


def test_geometric_oracle_deterministic():
    a = geometric_oracle(2, (2,), samples=30_000, pairs=2, seed=7)
    b = geometric_oracle(2, (2,), samples=30_000, pairs=2, seed=7)
    c = geometric_oracle(2, (2,), samples=30_000, pairs=2, seed=7, threads=2)
    assert a == b == c
