"""Geometry of the null quadric and its circle-bundle slices.

The complex cone {z : z.z = 0} in C^(n+1) meets the sphere of radius r in a
circle bundle X_r over projective quadric points; at radius sqrt(2) the
slice is exactly the set q + ip of orthonormal pairs (q, p) in R^(n+1).
This module samples those slices, builds L2-orthonormal bases of the
degree-k holomorphic sections by Monte Carlo, evaluates the associated
reproducing kernel, and pushes it forward along fibers to recover the
sphere eigenspace projector.  All randomness flows through counter-based
substreams so results depend only on (seed, sample count).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from itertools import combinations_with_replacement

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from . import rng
from .quadrature import fiber_degree, fiber_rule, sphere_rule
from .special import ZonalIndex, vol_sphere

__all__ = [
    "FramePoint",
    "ConeBasis",
    "SzegoEvaluator",
    "DecayReport",
    "frame_volume",
    "cone_slice_mass",
    "sample_frame",
    "sphere_point",
    "monomial_basis",
    "build_cone_basis",
    "szego_eval",
    "pushforward_kernel",
    "c_constant_numeric",
    "geodesic_lift",
    "s_plus_minus",
    "fubini_study_distance",
    "hlc_offset",
    "offdiagonal_decay_probe",
]

FRAME_TOL = 1e-12
POINT_TOL = 1e-9
# relative floor for Cholesky pivots of the estimated Gram
PIVOT_FLOOR = 1e-8


def frame_volume(n: int) -> float:
    """Volume of the orthonormal 2-frame manifold, vol(S^n) vol(S^(n-1))."""
    return vol_sphere(n) * vol_sphere(n - 1)


def cone_slice_mass(n: int, r: float = 1.0) -> float:
    """Total mass of the radius-r cone slice under the normalized volume form.

    The radius-sqrt(2) slice is the orthonormal 2-frame manifold embedded in
    R^(2n+2); its Euclidean-induced Riemannian volume is sqrt(2) times the
    product of the base and fiber sphere volumes (the base direction moving
    along the fiber circle carries metric factor sqrt(2), as a direct
    computation at n=1 confirms: two circles of circumference 2 pi sqrt(2)).
    The form scales with degree 2n-1 in r and one global 1/(2 pi) normalizes
    the circle direction:

        mass(r) = r^(2n-1) 2^(-(n-1)) vol(S^n) vol(S^(n-1)) / (2 pi).

    Cross-check: the trace of the degree-k reproducing kernel forces the
    diagonal value N / mass(sqrt(2)), whose large-k form is
    (sqrt(2)/2^n) (k/pi)^(n-1) exactly when this mass is used.
    """
    if r <= 0.0:
        raise ValueError(f"cone_slice_mass: expected radius > 0, got {r!r}")
    return float(r) ** (2 * n - 1) * 2.0 ** (-(n - 1)) * frame_volume(n) / (2.0 * math.pi)


@dataclass(frozen=True)
class FramePoint:
    """Orthonormal pair (q, p) in R^(n+1): a sphere point and a tangent."""

    q: np.ndarray
    p: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        p = np.asarray(self.p, dtype=float)
        if q.shape != p.shape or q.ndim != 1 or q.shape[0] < 2:
            raise ValueError("FramePoint: q and p must be equal-length vectors in R^(n+1), n >= 1")
        if abs(np.dot(q, q) - 1.0) > FRAME_TOL or abs(np.dot(p, p) - 1.0) > FRAME_TOL:
            raise ValueError("FramePoint: q and p must be unit vectors (tol 1e-12)")
        if abs(np.dot(q, p)) > FRAME_TOL:
            raise ValueError("FramePoint: q and p must be orthogonal (tol 1e-12)")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return self.q.shape[0] - 1

    def lift(self) -> np.ndarray:
        """Complex point q + ip on the radius-sqrt(2) slice."""
        return self.q + 1j * self.p


def _frame_block(n: int, count: int, gen: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """count Haar frames as arrays Q, P of shape (count, n+1)."""
    g1 = gen.standard_normal((count, n + 1))
    g2 = gen.standard_normal((count, n + 1))
    while True:
        nq = np.linalg.norm(g1, axis=1)
        proj = np.einsum("ij,ij->i", g1, g2) / nq**2
        w = g2 - proj[:, None] * g1
        nw = np.linalg.norm(w, axis=1)
        bad = (nq < 1e-12) | (nw < 1e-8 * np.linalg.norm(g2, axis=1))
        if not np.any(bad):
            break
        # measure-zero event; redrawing inside the block keeps determinism
        g1[bad] = gen.standard_normal((int(bad.sum()), n + 1))
        g2[bad] = gen.standard_normal((int(bad.sum()), n + 1))
    return g1 / nq[:, None], w / nw[:, None]


def sample_frame(n: int, gen: np.random.Generator) -> FramePoint:
    """One Haar-distributed orthonormal 2-frame in R^(n+1)."""
    if n < 1:
        raise ValueError(f"sample_frame: expected n >= 1, got {n!r}")
    q, p = _frame_block(n, 1, gen)
    return FramePoint(q=q[0], p=p[0])


def sphere_point(n: int, gen: np.random.Generator) -> np.ndarray:
    """One uniform point on S^n."""
    g = gen.standard_normal(n + 1)
    return g / np.linalg.norm(g)


def monomial_basis(n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Exponent tuples spanning degree k modulo the cone relation.

    The relation rewrites the squared first coordinate in terms of the rest,
    so tuples with first exponent 0 or 1 form a basis of the quotient; their
    count equals dim_eigenspace.  Tuples are returned in ascending
    lexicographic order.
    """
    if n < 1 or k < 0:
        raise ValueError(f"monomial_basis: expected n >= 1 and k >= 0, got {(n, k)!r}")
    out = []
    for first in (0, 1):
        rest = k - first
        if rest < 0:
            continue
        # multisets of n slots of total degree rest
        for combo in combinations_with_replacement(range(n), rest):
            expo = [0] * n
            for slot in combo:
                expo[slot] += 1
            out.append((first, *expo))
    return tuple(sorted(out))


def _monomial_matrix(z: np.ndarray, exponents) -> np.ndarray:
    """Raw monomial values, shape (M, len(exponents)) for z of shape (M, n+1)."""
    m, ncoord = z.shape
    maxe = [max(e[j] for e in exponents) for j in range(ncoord)]
    pows = []
    for j in range(ncoord):
        tbl = np.empty((maxe[j] + 1, m), dtype=complex)
        tbl[0] = 1.0
        for e in range(1, maxe[j] + 1):
            tbl[e] = tbl[e - 1] * z[:, j]
        pows.append(tbl)
    out = np.empty((m, len(exponents)), dtype=complex)
    for i, expo in enumerate(exponents):
        acc = pows[0][expo[0]].copy()
        for j in range(1, ncoord):
            if expo[j]:
                acc = acc * pows[j][expo[j]]
        out[:, i] = acc
    return out


@dataclass(frozen=True)
class ConeBasis:
    """Monte Carlo orthonormal basis of degree-k sections on the unit slice.

    coeff is lower triangular; row a of coeff gives section a as a
    combination of the raw monomials, orthonormal for the normalized volume
    of the radius-1 slice at the recorded sample count and seed.
    gram_stderr is the largest entrywise standard error of the
    orthonormalized family's empirical Gram at that sample count.
    """

    n: int
    k: int
    exponents: tuple[tuple[int, ...], ...]
    coeff: np.ndarray
    samples: int
    seed: int
    gram_stderr: float

    @property
    def size(self) -> int:
        return len(self.exponents)

    def evaluate(self, z: np.ndarray) -> np.ndarray:
        """Orthonormal section values, shape (M, size) for z of shape (M, n+1)."""
        z = np.atleast_2d(np.asarray(z, dtype=complex))
        return _monomial_matrix(z, self.exponents) @ self.coeff.T

    def to_json(self) -> str:
        doc = {
            "schema_version": 1,
            "kind": "cone_basis",
            "n": self.n,
            "k": self.k,
            "exponents": [list(e) for e in self.exponents],
            "coeff": [[[float(v.real), float(v.imag)] for v in row] for row in self.coeff],
            "samples": self.samples,
            "seed": self.seed,
            "gram_stderr": float(self.gram_stderr),
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConeBasis":
        doc = json.loads(text)
        if doc.get("kind") != "cone_basis" or doc.get("schema_version") != 1:
            raise ValueError("ConeBasis.from_json: not a schema-version-1 cone_basis document")
        coeff = np.array(
            [[complex(re, im) for re, im in row] for row in doc["coeff"]], dtype=complex
        )
        return cls(
            n=int(doc["n"]),
            k=int(doc["k"]),
            exponents=tuple(tuple(int(v) for v in e) for e in doc["exponents"]),
            coeff=coeff,
            samples=int(doc["samples"]),
            seed=int(doc["seed"]),
            gram_stderr=float(doc["gram_stderr"]),
        )


def _block_sizes(samples: int) -> list[int]:
    full, tail = divmod(samples, rng.BLOCK)
    sizes = [rng.BLOCK] * full
    if tail:
        sizes.append(tail)
    return sizes


def build_cone_basis(
    n: int, k: int, samples: int, seed: int, threads: int | None = None
) -> ConeBasis:
    """Estimate the Gram of the monomial basis on the unit slice and invert it.

    Draws Haar frames block by block (one substream per block), scales the
    lifts down to radius 1, accumulates the Gram of the coset monomials under
    the normalized slice volume, Hermitizes, and Cholesky-factorizes with a
    relative pivot floor of 1e-8.  Raises if the estimated Gram is not
    safely positive definite, which is the too-few-samples signature.
    """
    exponents = monomial_basis(n, k)
    nbasis = len(exponents)
    if samples < 10 * nbasis:
        raise ValueError(
            f"build_cone_basis: samples={samples} is below 10x basis size ({10 * nbasis}); increase samples"
        )
    sizes = _block_sizes(samples)
    mass = cone_slice_mass(n, 1.0)
    scale = 1.0 / math.sqrt(2.0)

    def one_block(b: int) -> np.ndarray:
        gen = rng.substream(seed, rng.GRAM, b)
        q, p = _frame_block(n, sizes[b], gen)
        a = _monomial_matrix(scale * (q + 1j * p), exponents)
        return a.conj().T @ a

    partials = rng.map_blocks(one_block, len(sizes), threads)
    gram = np.zeros((nbasis, nbasis), dtype=complex)
    for part in partials:
        gram += part
    gram *= mass / samples
    gram = 0.5 * (gram + gram.conj().T)

    try:
        low = cholesky(gram, lower=True)
    except LinAlgError as exc:
        raise ValueError(
            f"build_cone_basis: Gram at samples={samples} is not positive definite; increase samples"
        ) from exc
    pivots = np.diag(low).real ** 2
    if pivots.min() < PIVOT_FLOOR * pivots.max():
        raise ValueError(
            f"build_cone_basis: Gram pivot ratio below {PIVOT_FLOOR:g} at samples={samples}; increase samples"
        )
    coeff = solve_triangular(low, np.eye(nbasis), lower=True)

    basis = ConeBasis(
        n=n,
        k=k,
        exponents=exponents,
        coeff=coeff,
        samples=samples,
        seed=seed,
        gram_stderr=0.0,
    )
    return replace(basis, gram_stderr=_gram_stderr(basis, mass))


def _gram_stderr(basis: ConeBasis, mass: float, check_samples: int = 1 << 17) -> float:
    """Largest entrywise stderr of the orthonormalized empirical Gram.

    Estimates the population variance of the section products on a fresh
    substream and scales it to the build's sample count.
    """
    count = min(basis.samples, check_samples)
    gen = rng.substream(basis.seed, rng.GRAM_CHECK, 0)
    q, p = _frame_block(basis.n, count, gen)
    s = basis.evaluate((q + 1j * p) / math.sqrt(2.0))
    mean = mass * (s.conj().T @ s) / count
    sq = np.abs(s) ** 2
    second = mass**2 * (sq.T @ sq) / count
    var = np.clip(second - np.abs(mean) ** 2, 0.0, None)
    return float(np.sqrt(var / basis.samples).max())


def _require_on_slice(z: np.ndarray, r: float, label: str) -> None:
    norms2 = np.sum(np.abs(z) ** 2, axis=-1)
    cone = np.abs(np.sum(z * z, axis=-1))
    if np.any(cone > POINT_TOL * np.maximum(1.0, norms2)):
        raise ValueError(f"{label}: point is not on the null cone (tol 1e-9)")
    if np.any(np.abs(np.sqrt(norms2) - r) > POINT_TOL):
        raise ValueError(f"{label}: point is not on the radius-{r:g} slice (tol 1e-9)")


@dataclass(frozen=True)
class SzegoEvaluator:
    """Reproducing kernel of the degree-k section space at a chosen radius.

    kernel(x, y) = r^-(2k+2n-1) sum_j s_j(x) conj(s_j(y)) with s_j the
    orthonormal sections of the underlying unit-slice basis.
    """

    basis: ConeBasis
    radius: float

    def __post_init__(self):
        if not (self.radius > 0.0):
            raise ValueError(f"SzegoEvaluator.radius: expected > 0, got {self.radius!r}")

    @property
    def prefactor(self) -> float:
        return float(self.radius) ** -(2 * self.basis.k + 2 * self.basis.n - 1)

    def kernel(self, x, y, validate: bool = True):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        single = x.ndim == 1 and y.ndim == 1
        xs = np.atleast_2d(x)
        ys = np.atleast_2d(y)
        if validate:
            _require_on_slice(xs, self.radius, "szego_eval x")
            _require_on_slice(ys, self.radius, "szego_eval y")
        sx = self.basis.evaluate(xs)
        sy = self.basis.evaluate(ys)
        vals = self.prefactor * np.sum(sx * sy.conj(), axis=-1)
        return complex(vals[0]) if single else vals


def szego_eval(ev: SzegoEvaluator, x, y):
    """Kernel value at a pair of points on the evaluator's slice."""
    return ev.kernel(x, y)


def _pushforward_raw(
    ev: SzegoEvaluator, q0: np.ndarray, q1: np.ndarray
) -> tuple[complex, float]:
    """Complex double fiber integral plus its imaginary-noise allowance."""
    basis = ev.basis
    n, k = basis.n, basis.k
    if n not in (2, 3):
        raise ValueError(f"pushforward_kernel: supported n is 2 or 3, got {n}")
    if abs(ev.radius - math.sqrt(2.0)) > 1e-12:
        raise ValueError("pushforward_kernel: evaluator must sit at radius sqrt(2)")
    q0 = np.asarray(q0, dtype=float)
    q1 = np.asarray(q1, dtype=float)
    for label, q in (("q0", q0), ("q1", q1)):
        if q.shape != (n + 1,) or abs(np.linalg.norm(q) - 1.0) > POINT_TOL:
            raise ValueError(f"pushforward_kernel: {label} must be a unit vector in R^{n + 1}")

    deg = fiber_degree(n, k)
    fibers = []
    for q in (q0, q1):
        nodes, w = fiber_rule(q, deg)
        s = basis.evaluate(q[None, :] + 1j * nodes)
        fibers.append(w @ s)
    raw = ev.prefactor * complex(np.sum(fibers[0] * fibers[1].conj()))
    # a Monte Carlo Gram leaves imaginary noise of order gram_stderr times
    # the fiber-integral magnitudes; only an excess beyond that is a bug
    scale = ev.prefactor * float(np.linalg.norm(fibers[0]) * np.linalg.norm(fibers[1]))
    allowance = 1e-8 * (1.0 + abs(raw.real)) + 10.0 * basis.size * basis.gram_stderr * scale
    return raw, allowance


def pushforward_kernel(ev: SzegoEvaluator, q0: np.ndarray, q1: np.ndarray) -> float:
    """Fiber-integrated kernel over the two cospheres above q0 and q1.

    Integrates kernel(q0 + ip, q1 + ip') over p in the unit sphere of
    q0-perp and p' in the unit sphere of q1-perp with polynomial-exact
    product rules.  The result equals the sphere projector kernel at
    q0 . q1 times the squared push-forward norm constant.  Returns the real
    part; the imaginary part must vanish up to the basis Gram noise
    (exactly, for a quadrature-exact basis) or the call raises.
    """
    raw, allowance = _pushforward_raw(ev, q0, q1)
    if abs(raw.imag) > allowance:
        raise RuntimeError(
            f"pushforward_kernel: imaginary residue {raw.imag:.3e} exceeds noise allowance"
        )
    return raw.real


# canonical null direction used by the section-norm estimate
def _null_direction(n: int) -> np.ndarray:
    a = np.zeros(n + 1, dtype=complex)
    a[0] = 1.0
    a[1] = 1j
    return a


def c_constant_numeric(
    idx: ZonalIndex,
    ev: SzegoEvaluator | None = None,
    *,
    samples: int,
    seed: int,
    threads: int | None = None,
    null_vector: np.ndarray | None = None,
) -> tuple[float, float]:
    """Norm ratio of the fiber push-forward on a null power section.

    The section is s(z) = (a . z)^k with a null (a . a = 0), by default
    a = e0 + i e1.  The push-forward norm over the sphere is evaluated with
    polynomial-exact quadrature; the section norm over the radius-sqrt(2)
    slice (normalized volume) is a Monte Carlo mean over Haar frames.
    Returns (value, stderr) where the stderr propagates the Monte Carlo
    variance of the denominator.  The ratio does not depend on the choice
    of a: rotations act transitively on null directions and the section
    scale cancels.
    """
    n, k = idx.n, idx.k
    if n not in (2, 3):
        raise ValueError(f"c_constant_numeric: supported n is 2 or 3, got {n}")
    if ev is not None:
        if (ev.basis.n, ev.basis.k) != (n, k):
            raise ValueError("c_constant_numeric: evaluator index does not match idx")
        if abs(ev.radius - math.sqrt(2.0)) > 1e-12:
            raise ValueError("c_constant_numeric: evaluator must sit at radius sqrt(2)")
    if samples < 1000:
        raise ValueError(f"c_constant_numeric: samples={samples} below floor 1000")

    if null_vector is None:
        a = _null_direction(n)
    else:
        a = np.asarray(null_vector, dtype=complex)
        if a.shape != (n + 1,):
            raise ValueError(f"c_constant_numeric: null_vector must have length {n + 1}")
        norm2 = float(np.linalg.norm(a)) ** 2
        if norm2 == 0.0 or abs(complex(np.sum(a * a))) > 1e-10 * norm2:
            raise ValueError("c_constant_numeric: null_vector must satisfy a . a = 0")

    # quadrature side: || fiber integral of s ||^2 over the sphere
    nodes, weights = sphere_rule(n, 2 * k + 6)
    deg = fiber_degree(n, k)
    total = 0.0
    for q, w in zip(nodes, weights):
        pnodes, pw = fiber_rule(q, deg)
        vals = (np.dot(a, q) + 1j * (pnodes @ a)) ** k
        total += w * abs(np.dot(pw, vals)) ** 2

    # Monte Carlo side: section norm on the radius-sqrt(2) slice
    sizes = _block_sizes(samples)

    def one_block(b: int) -> tuple[float, float]:
        gen = rng.substream(seed, rng.SECTION_NORM, b)
        q, p = _frame_block(n, sizes[b], gen)
        w = q @ a + 1j * (p @ a)
        mod2 = w.real**2 + w.imag**2
        vals = mod2**k
        return float(vals.sum()), float((vals**2).sum())

    parts = rng.map_blocks(one_block, len(sizes), threads)
    s1 = 0.0
    s2 = 0.0
    for part in parts:
        s1 += part[0]
        s2 += part[1]
    mass = cone_slice_mass(n, math.sqrt(2.0))
    mean = s1 / samples
    var = max(s2 / samples - mean * mean, 0.0) / samples
    denom = mass * mean
    denom_stderr = mass * math.sqrt(var)

    value = math.sqrt(total / denom)
    stderr = 0.5 * value * denom_stderr / denom
    return value, stderr


def geodesic_lift(frame: FramePoint, theta: float) -> np.ndarray:
    """Horizontal geodesic lift exp(-i theta) (q + ip) on the sqrt(2) slice."""
    return complex(np.exp(-1j * float(theta))) * frame.lift()


def s_plus_minus(v: np.ndarray) -> tuple[float, float]:
    """Both sheet heights -1 +- sqrt(1 - |v|^2) over an in-disk tangent v."""
    v = np.asarray(v, dtype=float)
    norm2 = float(np.dot(v.ravel(), v.ravel()))
    if norm2 > 1.0 + 1e-12:
        raise ValueError(f"s_plus_minus: |v| must be <= 1, got |v|^2 = {norm2!r}")
    root = math.sqrt(max(1.0 - norm2, 0.0))
    return -1.0 + root, -1.0 - root


def fubini_study_distance(z0: np.ndarray, z1: np.ndarray) -> float:
    """Projective distance between circle fibers through two slice points.

    For z0, z1 on the radius-sqrt(2) slice this is the minimum over phases
    of |exp(-i g) z0 - z1| / sqrt(2), which closes to sqrt(2 - |<z0, z1>|).
    """
    z0 = np.asarray(z0, dtype=complex)
    z1 = np.asarray(z1, dtype=complex)
    _require_on_slice(z0[None, :], math.sqrt(2.0), "fubini_study_distance z0")
    _require_on_slice(z1[None, :], math.sqrt(2.0), "fubini_study_distance z1")
    return math.sqrt(max(2.0 - abs(complex(np.vdot(z0, z1))), 0.0))


def hlc_offset(z: np.ndarray, theta: float, dp: np.ndarray) -> tuple[np.ndarray, float]:
    """Hermitian-orthogonal decomposition offset for a fiber perturbation.

    For z on the unit slice and a real tangent step dp with
    z + i exp(i theta) dp back on the unit slice, returns (h, beta) with
    beta = 1 - |dp|^2 / 2 and h = (z + i exp(i theta) dp) / beta - z.
    h is Hermitian-orthogonal to z and equals i exp(i theta) dp up to a
    second-order correction in |dp|.
    """
    z = np.asarray(z, dtype=complex)
    dp = np.asarray(dp, dtype=float)
    if z.shape != dp.shape:
        raise ValueError("hlc_offset: z and dp must have the same shape")
    _require_on_slice(z[None, :], 1.0, "hlc_offset z")
    target = z + 1j * complex(np.exp(1j * float(theta))) * dp
    _require_on_slice(target[None, :], 1.0, "hlc_offset z + i exp(i theta) dp")
    beta = 1.0 - 0.5 * float(np.dot(dp, dp))
    if beta <= 0.0:
        raise ValueError(f"hlc_offset: beta = {beta!r} is not positive; dp too large")
    return target / beta - z, beta


def probe_pair(n: int, seed: int, angle: float = 0.9) -> tuple[np.ndarray, np.ndarray]:
    """Separated unit-slice pair sharing a fiber direction, for decay probes.

    Draws a Haar frame (q, p) and a unit extension e orthogonal to both,
    then returns x = (q + ip)/sqrt(2) and x' = (cos(angle) q + sin(angle) e
    + ip)/sqrt(2).  The projective distance between the pair is
    sqrt(2) sin(angle / 2), about 0.615 at the default angle.
    """
    if n < 2:
        raise ValueError(f"probe_pair: extension direction needs n >= 2, got {n}")
    if not 0.0 < angle < math.pi:
        raise ValueError(f"probe_pair: angle must lie in (0, pi), got {angle!r}")
    gen = rng.substream(seed, rng.PROBE, 0)
    q, p = _frame_block(n, 1, gen)
    q, p = q[0], p[0]
    while True:
        v = gen.normal(size=n + 1)
        v -= np.dot(v, q) * q + np.dot(v, p) * p
        norm = float(np.linalg.norm(v))
        if norm > FRAME_TOL:
            e = v / norm
            break
    scale = 1.0 / math.sqrt(2.0)
    x = scale * (q + 1j * p)
    x_prime = scale * (math.cos(angle) * q + math.sin(angle) * e + 1j * p)
    return x, x_prime


@dataclass(frozen=True)
class DecayReport:
    """Off-diagonal kernel decay across degrees at one fixed pair."""

    n: int
    distance: float
    ks: tuple[int, ...]
    values: tuple[float, ...]
    below_floor: tuple[bool, ...]
    decay_rate: float
    monotone_until_floor: bool
    superpolynomial: bool | None


def offdiagonal_decay_probe(
    bases: list[ConeBasis], x: np.ndarray, x_prime: np.ndarray, min_dist: float = 0.5
) -> DecayReport:
    """Normalized kernel magnitude at a fixed separated pair, per degree.

    For each degree-k basis (unit-slice evaluators), computes
    |K(x, x')| / sqrt(K(x, x) K(x', x')) and flags values below ten times
    the basis gram_stderr as noise-floor entries.  Reports the fitted
    exponential decay rate over the clean prefix, whether the clean prefix
    is strictly decreasing, and whether successive ratios shrink.
    """
    if not bases:
        raise ValueError("offdiagonal_decay_probe: need at least one basis")
    n = bases[0].n
    if any(b.n != n for b in bases):
        raise ValueError("offdiagonal_decay_probe: bases mix sphere dimensions")
    bases = sorted(bases, key=lambda b: b.k)
    x = np.asarray(x, dtype=complex)
    xp = np.asarray(x_prime, dtype=complex)
    _require_on_slice(x[None, :], 1.0, "offdiagonal_decay_probe x")
    _require_on_slice(xp[None, :], 1.0, "offdiagonal_decay_probe x_prime")
    # distance between the projective classes, via the sqrt(2)-scaled lifts
    dist = math.sqrt(max(2.0 - 2.0 * abs(complex(np.vdot(x, xp))), 0.0))
    if dist < min_dist:
        raise ValueError(
            f"offdiagonal_decay_probe: pair distance {dist:.3f} below minimum {min_dist:g}"
        )

    ks, values, flags = [], [], []
    for basis in bases:
        ev = SzegoEvaluator(basis=basis, radius=1.0)
        off = abs(ev.kernel(x, xp))
        d0 = ev.kernel(x, x).real
        d1 = ev.kernel(xp, xp).real
        normalized = off / math.sqrt(d0 * d1)
        ks.append(basis.k)
        values.append(normalized)
        flags.append(normalized < 10.0 * basis.gram_stderr)

    first_floor = next((i for i, f in enumerate(flags) if f), len(flags))
    clean = values[:first_floor]
    monotone = all(b < a for a, b in zip(clean, clean[1:]))
    if len(clean) >= 2:
        fit = np.polyfit(np.array(ks[:first_floor], dtype=float), np.log(clean), 1)
        rate = float(fit[0])
    else:
        rate = math.nan
    if len(clean) >= 3:
        ratios = [b / a for a, b in zip(clean, clean[1:])]
        superpoly = all(r2 < r1 for r1, r2 in zip(ratios, ratios[1:]))
    else:
        superpoly = None
    return DecayReport(
        n=n,
        distance=dist,
        ks=tuple(ks),
        values=tuple(values),
        below_floor=tuple(flags),
        decay_rate=rate,
        monotone_until_floor=monotone,
        superpolynomial=superpoly,
    )
