"""Measurement harness: error sweeps, scaling fits, and the crossover bench.

Errors are always measured against the local oscillation envelope: the
figure of merit for a degree is max |exact - leading| / amplitude over a
midpoint grid inside the angle window.  Output helpers emit one CSV schema
(n,k,delta,C,theta,exact,asymptotic,abs_err,rel_err) and JSON summaries
with schema_version 1; floats are formatted for full round-trip.
"""
from __future__ import annotations

import io
import json
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import quadric, rng
from .asymptotics import AngleWindow, c_constant_leading, legendre_leading
from .special import ZonalIndex, dim_eigenspace, legendre_normalized, projector_kernel, vol_sphere

__all__ = [
    "ScalingFit",
    "CrossRow",
    "CrossoverReport",
    "ConvergenceRow",
    "relative_bracket_error",
    "bracket_errors_on_grid",
    "fit_error_scaling",
    "c_constant_convergence",
    "crossover_benchmark",
    "geometric_oracle",
    "format_float",
    "compare_rows",
    "write_csv",
    "json_summary",
]

GRID_SIZE = 512
# below this everything is float noise and a log-log fit is meaningless
EXACT_FLOOR = 1e-13

CSV_HEADER = ("n", "k", "delta", "C", "theta", "exact", "asymptotic", "abs_err", "rel_err")


def bracket_errors_on_grid(idx: ZonalIndex, window: AngleWindow, grid_size: int = GRID_SIZE):
    """Per-angle envelope-relative errors of the leading form at degree k.

    Returns (thetas, exact, leading, rel_err) arrays over the window's
    midpoint grid.
    """
    thetas = window.grid(idx.k, grid_size)
    exact = legendre_normalized(idx, np.cos(thetas))
    lead = legendre_leading(idx, thetas)
    rel = np.abs(exact - lead.value) / lead.amplitude
    return thetas, exact, lead, rel


def relative_bracket_error(
    idx: ZonalIndex, window: AngleWindow | None = None, grid_size: int = GRID_SIZE
) -> float:
    """Worst envelope-relative error of the leading form over the window."""
    window = window or AngleWindow()
    return float(bracket_errors_on_grid(idx, window, grid_size)[3].max())


@dataclass(frozen=True)
class ScalingFit:
    """Log-log fit of bracket error against degree."""

    n: int
    window: AngleWindow
    ks: tuple[int, ...]
    errors: tuple[float, ...]
    slope: float
    intercept: float
    r_squared: float
    exact: bool

    @property
    def points(self) -> tuple[tuple[float, float], ...]:
        """(log k, log error) pairs behind the fit; zero errors floored."""
        floor = sys.float_info.min
        return tuple(
            (math.log(float(k)), math.log(max(err, floor)))
            for k, err in zip(self.ks, self.errors)
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "C": self.window.c,
            "delta": self.window.delta,
            "ks": list(self.ks),
            "errors": list(self.errors),
            "points": [list(point) for point in self.points],
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
            "exact": self.exact,
        }


def fit_error_scaling(
    n: int,
    ks,
    window: AngleWindow | None = None,
    grid_size: int = GRID_SIZE,
) -> ScalingFit:
    """Ordinary least squares of log error on log degree.

    A family whose bracket closes exactly (the circle case) produces errors
    at rounding level; those runs are flagged exact and carry a NaN slope
    instead of a fit through noise.
    """
    window = window or AngleWindow()
    ks = tuple(int(k) for k in ks)
    if len(ks) < 2:
        raise ValueError(f"fit_error_scaling: need at least 2 degrees, got {len(ks)}")
    if any(k < 1 for k in ks):
        raise ValueError("fit_error_scaling: degrees must be >= 1")
    errors = tuple(
        relative_bracket_error(ZonalIndex(n=n, k=k), window, grid_size) for k in ks
    )
    if max(errors) < EXACT_FLOOR:
        return ScalingFit(
            n=n,
            window=window,
            ks=ks,
            errors=errors,
            slope=math.nan,
            intercept=math.nan,
            r_squared=1.0,
            exact=True,
        )
    logk = np.log(np.array(ks, dtype=float))
    loge = np.log(np.array(errors, dtype=float))
    slope, intercept = np.polyfit(logk, loge, 1)
    pred = slope * logk + intercept
    ss_res = float(np.sum((loge - pred) ** 2))
    ss_tot = float(np.sum((loge - loge.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0.0 else 1.0
    return ScalingFit(
        n=n,
        window=window,
        ks=ks,
        errors=errors,
        slope=float(slope),
        intercept=float(intercept),
        r_squared=r2,
        exact=False,
    )


@dataclass(frozen=True)
class ConvergenceRow:
    """One degree of the push-forward constant comparison."""

    k: int
    numeric: float
    stderr: float
    leading: float
    ratio: float
    ratio_stderr: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "numeric": self.numeric,
            "stderr": self.stderr,
            "leading": self.leading,
            "ratio": self.ratio,
            "ratio_stderr": self.ratio_stderr,
        }


def c_constant_convergence(
    n: int, ks, samples: int, seed: int, threads: int | None = None
) -> list[ConvergenceRow]:
    """Numeric push-forward constant against its leading form, per degree."""
    rows = []
    for k in ks:
        idx = ZonalIndex(n=n, k=int(k))
        value, stderr = quadric.c_constant_numeric(
            idx, samples=samples, seed=seed, threads=threads
        )
        lead = c_constant_leading(idx)
        rows.append(
            ConvergenceRow(
                k=int(k),
                numeric=value,
                stderr=stderr,
                leading=lead,
                ratio=value / lead,
                ratio_stderr=stderr / lead,
            )
        )
    return rows


@dataclass(frozen=True)
class CrossRow:
    k: int
    exact_ns: float
    asymptotic_ns: float
    max_rel_err: float

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "exact_ns": self.exact_ns,
            "asymptotic_ns": self.asymptotic_ns,
            "max_rel_err": self.max_rel_err,
        }


@dataclass(frozen=True)
class CrossoverReport:
    """Per-degree timings plus the recommended switch-over degree."""

    n: int
    window: AngleWindow
    error_budget: float
    rows: tuple[CrossRow, ...]
    k_star: int | None

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "C": self.window.c,
            "delta": self.window.delta,
            "error_budget": self.error_budget,
            "rows": [r.as_dict() for r in self.rows],
            "k_star": self.k_star,
        }


def _median_ns_per_eval(fn, batch: int, reps: int) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        times.append((time.perf_counter_ns() - t0) / batch)
    return float(np.median(times))


def crossover_benchmark(
    n: int,
    ks,
    window: AngleWindow | None = None,
    error_budget: float = 1e-2,
    batch: int = 1 << 17,
    reps: int = 5,
) -> CrossoverReport:
    """Time the recurrence against the leading form on large angle batches.

    Each degree is timed on >= batch evaluations per repetition (median of
    reps wall-clock readings divided by the batch size, reported in ns per
    evaluation).  The recurrence cost grows linearly with the degree while
    the leading form is degree-independent, so the report recommends the
    smallest sampled degree at which the leading form is both faster and
    inside the error budget.
    """
    window = window or AngleWindow()
    if batch < 100_000:
        raise ValueError(f"crossover_benchmark: batch must be >= 100000, got {batch}")
    if error_budget <= 0.0:
        raise ValueError("crossover_benchmark: error_budget must be positive")
    rows = []
    for k in sorted(int(k) for k in ks):
        idx = ZonalIndex(n=n, k=k)
        thetas = window.grid(k, batch)
        coss = np.cos(thetas)
        exact_ns = _median_ns_per_eval(lambda: legendre_normalized(idx, coss), batch, reps)
        asym_ns = _median_ns_per_eval(lambda: legendre_leading(idx, thetas), batch, reps)
        exact = legendre_normalized(idx, coss)
        lead = legendre_leading(idx, thetas)
        err = float((np.abs(exact - lead.value) / lead.amplitude).max())
        rows.append(CrossRow(k=k, exact_ns=exact_ns, asymptotic_ns=asym_ns, max_rel_err=err))
    k_star = next(
        (r.k for r in rows if r.asymptotic_ns < r.exact_ns and r.max_rel_err <= error_budget),
        None,
    )
    return CrossoverReport(
        n=n, window=window, error_budget=error_budget, rows=tuple(rows), k_star=k_star
    )


def _unit_vector(gen: np.random.Generator, d: int) -> np.ndarray:
    while True:
        v = gen.normal(size=d)
        norm = float(np.linalg.norm(v))
        if norm > 1e-12:
            return v / norm


def geometric_oracle(
    n: int, ks, samples: int, pairs: int, seed: int, threads: int | None = None
) -> dict:
    """Cross-checks of the geometric chain on Monte Carlo bases, per degree.

    For every degree: builds the cone basis, evaluates the fiber
    push-forward of the kernel at `pairs` random sphere pairs plus the
    diagonal, and compares against the numeric push-forward constant squared
    times the sphere projector.  Residuals are normalized by the diagonal
    scale C^2 N / vol(S^n).  A decay section reuses the bases at one
    separated probe pair.  Everything is driven by counter-based substreams
    of `seed`, so the result is independent of the thread count.
    """
    ks = sorted(int(k) for k in ks)
    if not ks:
        raise ValueError("geometric_oracle: need at least one degree")
    if pairs < 1:
        raise ValueError(f"geometric_oracle: pairs must be >= 1, got {pairs}")
    bases = []
    degrees = []
    for k in ks:
        idx = ZonalIndex(n=n, k=k)
        basis = quadric.build_cone_basis(n, k, samples, seed, threads)
        bases.append(basis)
        ev = quadric.SzegoEvaluator(basis=basis, radius=math.sqrt(2.0))
        c_num, c_se = quadric.c_constant_numeric(
            idx, ev, samples=samples, seed=seed, threads=threads
        )
        lead = c_constant_leading(idx)
        scale = c_num**2 * dim_eigenspace(idx) / vol_sphere(n)
        gen = rng.substream(seed, rng.PAIR_DRAW, k)
        rows = []
        for _ in range(pairs):
            q0 = _unit_vector(gen, n + 1)
            q1 = _unit_vector(gen, n + 1)
            push = quadric.pushforward_kernel(ev, q0, q1)
            t = float(np.dot(q0, q1))
            pred = c_num**2 * float(projector_kernel(idx, t))
            rows.append(
                {
                    "dot": t,
                    "pushforward": push,
                    "predicted": pred,
                    "residual": abs(push - pred) / scale,
                }
            )
        q_diag = _unit_vector(gen, n + 1)
        diag = quadric.pushforward_kernel(ev, q_diag, q_diag)
        residuals = [row["residual"] for row in rows]
        degrees.append(
            {
                "k": k,
                "gram_stderr": float(basis.gram_stderr),
                "c_numeric": c_num,
                "c_stderr": c_se,
                "c_leading": lead,
                "c_ratio": c_num / lead,
                "pairs": rows,
                "max_residual": max(residuals),
                "mean_residual": sum(residuals) / len(residuals),
                "diagonal_residual": abs(diag - scale) / scale,
            }
        )
    x, x_prime = quadric.probe_pair(n, seed)
    report = quadric.offdiagonal_decay_probe(bases, x, x_prime)
    decay = {
        "distance": report.distance,
        "ks": list(report.ks),
        "values": list(report.values),
        "below_floor": list(report.below_floor),
        "decay_rate": None if math.isnan(report.decay_rate) else report.decay_rate,
        "monotone_until_floor": report.monotone_until_floor,
        "superpolynomial": report.superpolynomial,
    }
    return {"n": n, "samples": samples, "pairs": pairs, "degrees": degrees, "decay": decay}


def format_float(x) -> str:
    """Shortest decimal string that round-trips to the same float."""
    return repr(float(x))


def compare_rows(idx: ZonalIndex, window: AngleWindow, grid_size: int = GRID_SIZE):
    """CSV-schema rows comparing exact and leading values over the window."""
    thetas, exact, lead, rel = bracket_errors_on_grid(idx, window, grid_size)
    asym = np.broadcast_to(np.asarray(lead.value), thetas.shape)
    rows = []
    for i, theta in enumerate(thetas):
        rows.append(
            {
                "n": idx.n,
                "k": idx.k,
                "delta": window.delta,
                "C": window.c,
                "theta": float(theta),
                "exact": float(exact[i]),
                "asymptotic": float(asym[i]),
                "abs_err": abs(float(exact[i]) - float(asym[i])),
                "rel_err": float(rel[i]),
            }
        )
    return rows


def write_csv(rows, stream=None) -> str:
    """Serialize schema rows; returns the CSV text (and writes it if given a stream)."""
    buf = io.StringIO()
    buf.write(",".join(CSV_HEADER) + "\n")
    for row in rows:
        cells = []
        for name in CSV_HEADER:
            value = row[name]
            if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
                cells.append(str(int(value)))
            else:
                cells.append(format_float(value))
        buf.write(",".join(cells) + "\n")
    text = buf.getvalue()
    if stream is not None:
        stream.write(text)
    return text


def json_summary(kind: str, config: dict, payload: dict) -> str:
    """Stable JSON document: schema_version 1, config echo, sorted keys."""
    doc = {"schema_version": 1, "kind": kind, "config": config}
    doc.update(payload)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
