"""Zonal kernels on the n-sphere in the value-one normalization.

The central object is the degree-k zonal polynomial normalized to 1 at
argument 1, evaluated by a three-term recurrence written directly in that
normalization.  Everything else in the package (asymptotic brackets, the
projector kernel, the geometric cross-checks) is expressed against it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ZonalIndex",
    "legendre_normalized",
    "legendre_sweep",
    "gegenbauer_norm_constant",
    "gegenbauer_jacobi",
    "dim_eigenspace",
    "vol_sphere",
    "projector_kernel",
]

# arguments this far outside [-1, 1] are clamped, beyond is a domain error
ARG_SLACK = 1e-12


@dataclass(frozen=True)
class ZonalIndex:
    """Sphere dimension n >= 1 and polynomial degree k >= 0."""

    n: int
    k: int

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise ValueError(f"ZonalIndex.n: expected integer >= 1, got {self.n!r}")
        if not isinstance(self.k, (int, np.integer)) or self.k < 0:
            raise ValueError(f"ZonalIndex.k: expected integer >= 0, got {self.k!r}")


def _clamped(t):
    arr = np.asarray(t, dtype=float)
    bad = np.abs(arr) > 1.0 + ARG_SLACK
    if np.any(bad):
        worst = float(arr[np.unravel_index(np.argmax(np.abs(arr)), arr.shape)]) if arr.ndim else float(arr)
        raise ValueError(f"legendre argument outside [-1, 1] beyond clamp tolerance: {worst!r}")
    return np.clip(arr, -1.0, 1.0)


def legendre_normalized(idx: ZonalIndex, t):
    """Degree-k zonal polynomial on S^n at cos-angle t, normalized to 1 at t=1.

    Parameters
    ----------
    idx : ZonalIndex
        Sphere dimension and degree.
    t : array_like
        Points in [-1, 1]; values within 1e-12 outside are clamped.

    Returns
    -------
    float or ndarray
        Values in [-1, 1].  For n=1 this is the Chebyshev value cos(k acos t),
        for n=2 the classical Legendre polynomial.

    Notes
    -----
    Uses the ultraspherical recurrence with parameter (n-1)/2 rewritten for
    the value-one normalization,

        P_k(t) = (2(k + L - 1) t P_{k-1}(t) - (k - 1) P_{k-2}(t)) / (k + 2L - 1),

    with L = (n-1)/2.  Iterates stay inside [-1, 1], so there is no overflow
    for any degree this package targets (k up to 1e6).  The n=1 case reduces
    to the Chebyshev recurrence with no special handling.
    """
    arr = _clamped(t)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = _recurrence_final(idx.n, idx.k, arr)
    # endpoint values are pinned exactly: the recurrence only reaches them
    # through rounded coefficients
    out[arr == 1.0] = 1.0
    out[arr == -1.0] = 1.0 if idx.k % 2 == 0 else -1.0
    return float(out[0]) if scalar else out


def _recurrence_final(n: int, k: int, t: np.ndarray) -> np.ndarray:
    lam = 0.5 * (n - 1)
    prev = np.ones_like(t)
    if k == 0:
        return prev
    cur = t.copy()
    for j in range(2, k + 1):
        denom = j + 2.0 * lam - 1.0
        nxt = (2.0 * (j + lam - 1.0) * t * cur - (j - 1.0) * prev) / denom
        prev, cur = cur, nxt
    return cur


def legendre_sweep(n: int, kmax: int, t) -> np.ndarray:
    """All normalized zonal values for degrees 0..kmax in one recurrence pass.

    Returns an array of shape (kmax + 1,) + shape(t).  One sweep costs the
    same as a single degree-kmax evaluation, which is what batch comparisons
    over many degrees want.
    """
    if kmax < 0:
        raise ValueError(f"kmax: expected >= 0, got {kmax!r}")
    arr = np.atleast_1d(_clamped(t))
    lam = 0.5 * (n - 1)
    out = np.empty((kmax + 1,) + arr.shape, dtype=float)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = arr
    for j in range(2, kmax + 1):
        denom = j + 2.0 * lam - 1.0
        out[j] = (2.0 * (j + lam - 1.0) * arr * out[j - 1] - (j - 1.0) * out[j - 2]) / denom
    hi = arr == 1.0
    lo = arr == -1.0
    for j in range(kmax + 1):
        out[j][hi] = 1.0
        out[j][lo] = 1.0 if j % 2 == 0 else -1.0
    return out


def gegenbauer_norm_constant(idx: ZonalIndex) -> float:
    """Ratio tying the Jacobi-normalized polynomial to the value-one one.

    Equals Gamma(k + n/2) / (k! Gamma(n/2)), computed in log space so large
    degrees neither overflow nor lose the leading digits.  For n=2 it is
    exactly 1 for every k.
    """
    n, k = idx.n, idx.k
    return math.exp(math.lgamma(k + 0.5 * n) - math.lgamma(k + 1.0) - math.lgamma(0.5 * n))


def gegenbauer_jacobi(idx: ZonalIndex, t):
    """Jacobi-normalized ultraspherical value P_k^{(n/2-1, n/2-1)}(t).

    Evaluated as gegenbauer_norm_constant(idx) * legendre_normalized(idx, t);
    the two normalizations differ only by that degree-dependent constant.
    """
    return gegenbauer_norm_constant(idx) * legendre_normalized(idx, t)


def dim_eigenspace(idx: ZonalIndex) -> int:
    """Dimension of the degree-k spherical-harmonic eigenspace on S^n.

    Exact integer binom(k+n, n) - binom(k+n-2, n); the subtracted term is
    zero for k < 2.  Grows like 2 k^(n-1) / (n-1)!.
    """
    n, k = idx.n, idx.k
    lead = math.comb(k + n, n)
    tail = math.comb(k + n - 2, n) if k + n - 2 >= 0 else 0
    return lead - tail


def vol_sphere(m: int) -> float:
    """Riemannian volume of the unit m-sphere, 2 pi^((m+1)/2) / Gamma((m+1)/2)."""
    if not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"vol_sphere: expected integer dimension >= 0, got {m!r}")
    half = 0.5 * (m + 1)
    if m <= 300:
        # direct form keeps small dimensions exact (vol(S^0) == 2.0 bitwise)
        return 2.0 * math.pi**half / math.gamma(half)
    return math.exp(math.log(2.0) + half * math.log(math.pi) - math.lgamma(half))


def projector_kernel(idx: ZonalIndex, t):
    """Two-point kernel of the orthogonal projector onto the degree-k eigenspace.

    Value at cos-angle t is (N / vol(S^n)) * legendre_normalized(idx, t) with
    N the eigenspace dimension, so the diagonal t=1 equals N / vol(S^n).
    """
    scale = dim_eigenspace(idx) / vol_sphere(idx.n)
    return scale * legendre_normalized(idx, t)
