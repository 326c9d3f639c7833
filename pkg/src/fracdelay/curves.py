"""Stability boundary in the complex multiplier plane and its real-axis sections.

The boundary is the image of the unit circle ``z = exp(it)`` under the
characteristic relation solved for ``a``:

    beta(t) = 1 + (1 - e^{-it})^alpha (e^{it} - b e^{i(1 - tau) t}),  t in [0, 2 pi].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError
from .fraccoef import check_alpha

DEFAULT_SAMPLES = 20000


def _check_tau(tau) -> int:
    if int(tau) != tau or tau < 1:
        raise DomainError(f"tau must be a positive integer, got {tau!r}")
    return int(tau)


def beta(t, alpha: float, b: float, tau: int) -> np.ndarray:
    """Evaluate the boundary curve at parameter values ``t`` in [0, 2 pi]."""
    t = np.asarray(t, dtype=float)
    s = np.sin(0.5 * t)
    # sin(t/2) >= 0 on [0, 2pi]; the endpoints are zero by continuity
    s = np.where((t <= 0.0) | (t >= 2 * np.pi), 0.0, np.clip(s, 0.0, None))
    with np.errstate(divide="ignore"):
        amp = np.where(s > 0.0, np.exp(alpha * np.log(np.where(s > 0.0, s, 1.0))), 0.0)
    amp = 2.0**alpha * amp
    th1 = 0.5 * alpha * np.pi + t * (1.0 - 0.5 * alpha)
    th2 = 0.5 * alpha * np.pi + t * (1.0 - tau - 0.5 * alpha)
    re = amp * (np.cos(th1) - b * np.cos(th2)) + 1.0
    im = amp * (np.sin(th1) - b * np.sin(th2))
    return re + 1j * im


def beta_prime(t, alpha: float, b: float, tau: int) -> np.ndarray:
    """Analytic derivative of the boundary curve for ``t`` in (0, 2 pi)."""
    w = np.exp(1j * np.asarray(t, dtype=float))
    bracket = (w - 1.0 + alpha) - b * w ** (-tau) * (alpha + (1.0 - tau) * (w - 1.0))
    return 1j * (1.0 - 1.0 / w) ** (alpha - 1.0) * bracket


@dataclass(frozen=True)
class BoundaryCurve:
    alpha: float
    b: float
    tau: int
    ts: np.ndarray
    points: np.ndarray

    @property
    def signed_area(self) -> float:
        """Shoelace area; positive for an anticlockwise traversal."""
        x, y = self.points.real, self.points.imag
        return 0.5 * float(np.sum(x[:-1] * y[1:] - x[1:] * y[:-1]))


def boundary_curve(alpha: float, b: float, tau: int, N: int = DEFAULT_SAMPLES) -> BoundaryCurve:
    """Sample ``N + 1`` points ``beta(2 pi k / N)``, closed at both ends."""
    alpha = check_alpha(alpha)
    tau = _check_tau(tau)
    if N < 16:
        raise DomainError(f"need at least 16 samples, got {N}")
    ts = 2.0 * np.pi * np.arange(N + 1) / N
    ts[-1] = 2.0 * np.pi
    points = beta(ts, alpha, float(b), tau)
    return BoundaryCurve(alpha, float(b), tau, ts, points)


def self_intersections(curve: BoundaryCurve, tol: float = 1e-9) -> np.ndarray:
    """Crossing points of the closed polyline with itself.

    Pairs of segments are tested exactly.  Adjacent segments and hits within
    ``tol`` of a segment endpoint (in segment parameter) are ignored.
    """
    from scipy.spatial import cKDTree

    p = curve.points
    a, d = p[:-1], np.diff(p)
    n = len(a)
    length = np.abs(d)
    if n < 3:
        return np.empty(0, dtype=complex)
    cutoff = 4.0 * float(np.median(length)) + 1e-300
    long_idx = np.flatnonzero(length > cutoff)
    mid = a + 0.5 * d
    tree = cKDTree(np.column_stack([mid.real, mid.imag]))
    pairs = tree.query_pairs(cutoff, output_type="ndarray")
    extra = [np.column_stack([np.full(n, k), np.arange(n)]) for k in long_idx]
    if extra:
        pairs = np.vstack([pairs] + extra)
    i, j = np.minimum(pairs[:, 0], pairs[:, 1]), np.maximum(pairs[:, 0], pairs[:, 1])
    keep = (j - i > 1) & ~((i == 0) & (j == n - 1))
    pairs = np.unique(np.column_stack([i[keep], j[keep]]), axis=0)
    if pairs.size == 0:
        return np.empty(0, dtype=complex)
    i, j = pairs[:, 0], pairs[:, 1]
    di, dj, r = d[i], d[j], a[j] - a[i]
    cross = lambda u, v: u.real * v.imag - u.imag * v.real  # noqa: E731
    den = cross(di, dj)
    ok = den != 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        s = cross(r, dj) / den
        u = cross(r, di) / den
    hit = ok & (s > tol) & (s < 1 - tol) & (u > tol) & (u < 1 - tol)
    return a[i[hit]] + s[hit] * di[hit]


def real_axis_crossings(curve: BoundaryCurve, return_t: bool = False):
    """Real values of ``a`` where the curve meets the real axis.

    Includes ``t = 0`` and ``t = pi`` (where the imaginary part vanishes
    identically), plus every sign change of ``Im beta`` refined by root
    bracketing on the analytic curve.  Ordered by ``t``.
    """
    alpha, b, tau = curve.alpha, curve.b, curve.tau
    ts = curve.ts
    im = curve.points.imag
    found = {0.0, math.pi}

    def f(t):
        return float(beta(t, alpha, b, tau).imag)

    for lo, hi in ((0.0, math.pi), (math.pi, 2 * math.pi)):
        sel = np.flatnonzero((ts > lo) & (ts < hi))
        if sel.size < 2:
            continue
        y = im[sel]
        flips = np.flatnonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)
        for k in flips:
            found.add(brentq(f, ts[sel[k]], ts[sel[k + 1]], xtol=1e-15))
        for k in np.flatnonzero(y == 0.0):
            found.add(float(ts[sel[k]]))
    t_sorted = np.array(sorted(found))
    values = beta(t_sorted, alpha, b, tau).real
    if return_t:
        return values, t_sorted
    return values


@dataclass(frozen=True)
class BaRegion:
    """Real-multiplier stability region in the (b, a) plane.

    ``parametric`` holds rows ``(t, b(t), a(t))``; the bounding lines are
    ``a = 1`` and ``a = 1 - 2^alpha (1 - b (-1)^tau)`` sampled on ``line_b``.
    """

    alpha: float
    tau: int
    parametric: np.ndarray
    line_b: np.ndarray
    line_upper: np.ndarray
    line_lower: np.ndarray


def lower_line(alpha: float, tau: int, b):
    """Value of ``beta(pi)``: the lower bounding line of the (b, a) region."""
    return 1.0 - 2.0**alpha * (1.0 - np.asarray(b, dtype=float) * (-1.0) ** tau)


def ba_region(alpha: float, tau: int, N: int = 2000, b_range=(-5.0, 5.0)) -> BaRegion:
    alpha = check_alpha(alpha)
    tau = _check_tau(tau)
    if N < 100:
        raise DomainError(f"need at least 100 samples, got {N}")
    t = 2.0 * np.pi * np.arange(N + 1) / N
    th1 = 0.5 * alpha * np.pi + t * (1.0 - 0.5 * alpha)
    th2 = 0.5 * alpha * np.pi + t * (1.0 - tau - 0.5 * alpha)
    den = np.sin(th2)
    keep = np.abs(den) >= 1e-12
    t, th1, th2, den = t[keep], th1[keep], th2[keep], den[keep]
    b_t = np.sin(th1) / den
    amp = 2.0**alpha * np.clip(np.sin(0.5 * t), 0.0, None) ** alpha
    a_t = amp * (np.cos(th1) - b_t * np.cos(th2)) + 1.0
    line_b = np.linspace(b_range[0], b_range[1], N + 1)
    return BaRegion(
        alpha, tau,
        parametric=np.column_stack([t, b_t, a_t]),
        line_b=line_b,
        line_upper=np.ones_like(line_b),
        line_lower=lower_line(alpha, tau, line_b),
    )


def asymptotic_region(alpha: float, b: float) -> tuple[float, float]:
    """Large-delay stable interval ``(1 + 2^alpha (|b| - 1), 1)`` of real ``a``.

    For ``|b| >= 1`` the band is empty and both ends equal 1.
    """
    alpha = check_alpha(alpha)
    if abs(b) >= 1.0:
        return (1.0, 1.0)
    return (1.0 + 2.0**alpha * (abs(b) - 1.0), 1.0)
