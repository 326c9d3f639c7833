"""Bifurcation curves in the (b, alpha) plane for delays 1 and 2.

The boundary curve has a cusp at ``t0`` when both coordinate derivatives
vanish.  Writing ``w = exp(i t0)``, that happens exactly when

    (w - 1 + alpha) = b w^-tau (alpha + (1 - tau)(w - 1)).

Equating moduli fixes ``t0`` as a function of ``(b, alpha)``.  Substituting
it into one derivative component gives an implicit function ``g(b, alpha)``
whose zeros in ``b`` are the bifurcation branches.  The touching lines
``b = -1`` (tau = 1) and ``b = -1`` (tau = 2), where the curve passes through
``a = 1`` twice, are added as constant branches.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .errors import DomainError
from .fraccoef import check_alpha

_EDGE_SLACK = 1e-9
_CUSP_CHECK = 1e-6


def _as_output(x):
    return float(x) if np.ndim(x) == 0 else x


# ---------------------------------------------------------------- delay 1

def _half_angle(sin2, cos2):
    """``2 atan2(sqrt(sin2), sqrt(cos2))`` for ``sin2 + cos2 = 1``; NaN off the real domain.

    Accurate at both ends of [0, pi], where ``arccos`` and ``arcsin`` lose
    half their digits.
    """
    sin2 = np.asarray(sin2, dtype=float)
    cos2 = np.asarray(cos2, dtype=float)
    ok = (sin2 >= -_EDGE_SLACK) & (cos2 >= -_EDGE_SLACK)
    t = 2.0 * np.arctan2(np.sqrt(np.clip(sin2, 0.0, None)), np.sqrt(np.clip(cos2, 0.0, None)))
    return np.where(ok, t, np.nan)


def cusp_time_tau1(b, alpha: float):
    """Cusp parameter ``t0`` in [0, pi] for delay 1, NaN when no real value exists.

    From ``|w - 1 + alpha| = |alpha b|``:
    ``sin^2(t0 / 2) = alpha^2 (b^2 - 1) / (4 (1 - alpha))``.
    """
    alpha = check_alpha(alpha)
    b = np.asarray(b, dtype=float)
    if alpha == 1.0:
        return _as_output(np.full(b.shape, np.nan))
    den = 4.0 * (1.0 - alpha)
    sin2 = alpha * alpha * (b * b - 1.0) / den
    cos2 = ((2.0 - alpha) ** 2 - (alpha * b) ** 2) / den
    return _as_output(_half_angle(sin2, cos2))


def _g1_at(b, alpha, A):
    return (
        b * alpha * np.cos(0.5 * (1 + alpha) * (np.pi - A))
        - (alpha - 1) * np.cos(0.5 * (np.pi * (1 + alpha) - (alpha - 1) * A))
        + np.sin(0.5 * (np.pi * alpha - (alpha - 3) * A))
    )


def _g_tau1(b, alpha):
    b = np.asarray(b, dtype=float)
    return _g1_at(b, alpha, np.asarray(cusp_time_tau1(b, alpha)))


def g_tau1(b, alpha: float):
    """Implicit bifurcation function for delay 1.

    The vertical derivative of the boundary curve (up to a positive factor)
    evaluated at the cusp time ``cusp_time_tau1(b, alpha)``.  NaN where the
    cusp time has no real value.
    """
    alpha = check_alpha(alpha)
    if np.any(np.asarray(b) == 0.0):
        raise DomainError("b = 0 has no feedback term and no cusp condition")
    return _as_output(_g_tau1(b, alpha))


def g_tau1_printed(b: float, alpha: float) -> float:
    """Delay-1 function with the literal ``arctan(R / S)`` substitution.

    Kept for comparison with ``g_tau1``.  The radicand inside ``S`` is
    negative for every tested ``(b, alpha)``, so this returns NaN there.
    """
    alpha = check_alpha(alpha)
    if b == 0:
        raise DomainError("b = 0 divides the R and S terms")
    a = alpha
    rad_r = (1 + b * a) ** 2 * (1 - 2 * a + 4 * b * a + a * a)
    rad_s = (1 + b * a * a) * (1 - 2 * a + 4 * b * a + a * a)
    if rad_r < 0 or rad_s < 0:
        return float("nan")
    R = (-1 + a + b * a - b * a * a - math.sqrt(rad_r)) / (b * a)
    inner = -(
        1 + 2 * (-1 + b) * b * b * a**3 + b * b * a**4 + a * a - 3 * b * b * a * a
        - 2 * a + 2 * b * a + (1 - a - b * a + b * a * a) * math.sqrt(rad_s)
    )
    if inner < 0:
        return float("nan")
    S = -math.sqrt(2) / (b * a) * math.sqrt(inner)
    return float(_g1_at(b, a, math.atan(R / S)))


# ---------------------------------------------------------------- delay 2

def cusp_time_tau2(b, alpha: float):
    """Cusp parameter ``t0`` in [0, pi] for delay 2, NaN outside the arccos domain.

    ``t0 = arccos(N / D)`` with ``N = 2(alpha - 1) - alpha^2 + b^2 (alpha^2 + 2 alpha + 2)``
    and ``D = 2 (b^2 (1 + alpha) + alpha - 1)``, evaluated through the exact
    half-angle forms ``D - N = alpha^2 (1 - b^2)`` and
    ``D + N = b^2 (2 + alpha)^2 - (2 - alpha)^2``.
    """
    alpha = check_alpha(alpha)
    b = np.asarray(b, dtype=float)
    b2 = b * b
    den = 2 * (b2 * (1 + alpha) + alpha - 1)
    safe = np.where(den != 0.0, den, 1.0)
    sin2 = np.where(den != 0.0, alpha**2 * (1 - b2) / safe, np.nan)
    cos2 = np.where(den != 0.0, (b2 * (2 + alpha) ** 2 - (2 - alpha) ** 2) / safe, np.nan)
    return _as_output(_half_angle(sin2, cos2))


def g_tau2(b, alpha: float):
    """Implicit bifurcation function for delay 2 (horizontal derivative at the cusp time)."""
    alpha = check_alpha(alpha)
    b = np.asarray(b, dtype=float)
    K = np.asarray(cusp_time_tau2(b, alpha))
    a = alpha
    g = (
        np.cos(0.5 * (np.pi * a - (a - 3) * K))
        - b * (1 + a) * np.cos(0.5 * (np.pi * a - (3 + a) * K))
        + b * np.sin(0.5 * (1 + a) * (np.pi - K))
        + (a - 1) * np.sin(0.5 * (np.pi * (1 + a) - (a - 1) * K))
    )
    return _as_output(g)


# ---------------------------------------------------------------- shared

_G = {1: _g_tau1, 2: lambda b, a: np.asarray(g_tau2(b, a))}
_T0 = {1: cusp_time_tau1, 2: cusp_time_tau2}
_LINES = {1: (-1.0,), 2: (-1.0,)}
_COUNT = {1: 4, 2: 5}


def _domain_edges(tau: int, alpha: float) -> list[tuple[float, float]]:
    """Ends of the cusp-time domain as ``(b, t0)`` pairs with exact ``t0``."""
    if tau == 1:
        ends = [(1.0, 0.0)] if alpha == 1.0 else [(1.0, 0.0), ((2.0 - alpha) / alpha, math.pi)]
    else:
        ends = [(1.0, 0.0), ((2.0 - alpha) / (2.0 + alpha), math.pi)]
    return [(s * e, t) for e, t in ends for s in (1.0, -1.0)]


def cusp_residual(b: float, alpha: float, tau: int, t0: Optional[float] = None) -> float:
    """Normalised modulus of the complex cusp condition at the cusp time.

    Zero exactly at genuine cusps; used to reject roots of ``g`` where only
    one derivative component vanishes.  ``t0`` defaults to the cusp time
    formula for ``tau``.
    """
    alpha = check_alpha(alpha)
    if t0 is None:
        t0 = float(_T0[tau](b, alpha))
    if math.isnan(t0):
        return float("nan")
    w = complex(math.cos(t0), math.sin(t0))
    lhs = w - 1 + alpha
    rhs = b * w ** (-tau) * (alpha + (1 - tau) * (w - 1))
    scale = abs(lhs) + abs(rhs)
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def cusp_roots(tau: int, alpha: float, b_range=(-30.0, 30.0), db: float = 0.01, tol: float = 1e-9) -> list[float]:
    """All cusp values of ``b`` at one ``alpha``: sign changes of ``g`` plus roots at domain edges."""
    if tau not in _G:
        raise DomainError(f"bifurcation curves are available for tau in (1, 2), got {tau}")
    alpha = check_alpha(alpha)
    g = _G[tau]
    lo, hi = b_range
    bs = np.arange(lo, hi + 0.5 * db, db)
    # roots can sit within a fraction of db of a domain end, where g is
    # finite only on one side, so the grid is refined geometrically there
    near = np.logspace(-12, np.log10(db), 60)
    ends = [e for e, _ in _domain_edges(tau, alpha)]
    extra = [e + s * near for e in ends for s in (1.0, -1.0)]
    bs = np.unique(np.concatenate([bs] + extra))
    bs = bs[(bs >= lo) & (bs <= hi)]
    vals = g(bs, alpha)
    # arccos and arcsin lose half their digits at the domain ends, so edge
    # candidates are checked directly at their exact cusp time
    edges = [e for e, t in _domain_edges(tau, alpha)
             if lo <= e <= hi and cusp_residual(e, alpha, tau, t) < tol]
    cands = []
    finite = np.isfinite(vals)
    flips = np.flatnonzero(finite[:-1] & finite[1:] & (np.sign(vals[:-1]) * np.sign(vals[1:]) < 0))
    exact = np.flatnonzero(finite & (vals == 0.0))
    cands.extend(float(bs[k]) for k in exact)
    f = lambda x: float(g(np.array(x), alpha))  # noqa: E731
    for k in flips:
        root = bisect(f, bs[k], bs[k + 1], xtol=1e-14, rtol=1e-15)
        if abs(f(root)) < tol:
            cands.append(root)
    cands = [r for r in cands if cusp_residual(r, alpha, tau) <= _CUSP_CHECK] + edges
    roots = []
    for r in sorted(cands):
        if roots and abs(r - roots[-1]) < 1e-6:
            continue
        roots.append(float(r))
    return roots


@dataclass(frozen=True)
class BifurcationBranch:
    tau: int
    index: int
    alphas: np.ndarray
    bs: np.ndarray
    constant: bool = False

    @property
    def name(self) -> str:
        return f"g{self.index}"

    @property
    def missing(self) -> np.ndarray:
        return np.isnan(self.bs)


def _solve_one(args):
    tau, alpha, b_range, db, tol = args
    return sorted(cusp_roots(tau, alpha, b_range, db, tol) + list(_LINES[tau]), reverse=True)


def solve_branches(
    tau: int,
    alpha_grid: Sequence[float],
    b_range=(-30.0, 30.0),
    tol: float = 1e-9,
    db: float = 0.01,
    jobs: int = 1,
) -> list[BifurcationBranch]:
    """Solve every branch on an alpha grid, labelled ``g1 > g2 > ...``.

    When a value is missing at some alpha (for example, a branch leaves
    ``b_range``), the values found there are matched to the previous alpha's
    branches by proximity, and the unmatched slots stay NaN.
    """
    if tau not in _G:
        raise DomainError(f"bifurcation curves are available for tau in (1, 2), got {tau}")
    alphas = np.array([check_alpha(a) for a in alpha_grid], dtype=float)
    tasks = [(tau, a, b_range, db, tol) for a in alphas]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            found = list(pool.map(_solve_one, tasks))
    else:
        found = [_solve_one(t) for t in tasks]
    n = _COUNT[tau]
    table = np.full((len(alphas), n), np.nan)
    prev = None
    for i, vals in enumerate(found):
        if len(vals) == n:
            table[i] = vals
            prev = table[i]
        elif prev is not None:
            for v in vals:
                order = np.argsort(np.abs(prev - v))
                for j in order:
                    if np.isnan(table[i, j]):
                        table[i, j] = v
                        break
            prev = np.where(np.isnan(table[i]), prev, table[i])
    lines = set(_LINES[tau])
    return [
        BifurcationBranch(
            tau, j + 1, alphas, table[:, j],
            constant=bool(np.all(np.isin(table[:, j][~np.isnan(table[:, j])], list(lines))))
            and not np.all(np.isnan(table[:, j])),
        )
        for j in range(n)
    ]


class RegionLabel(str, enum.Enum):
    ABOVE_G1 = "AboveG1"
    G1_TO_G2 = "G1toG2"
    G2_TO_G3 = "G2toG3"
    G3_TO_G4 = "G3toG4"
    BELOW_G4 = "BelowG4"
    A = "A"
    B = "B"
    C = "C"
    D = "D"
    E = "E"
    F = "F"
    ON_G1 = "OnG1"
    ON_G2 = "OnG2"
    ON_G3 = "OnG3"
    ON_G4 = "OnG4"
    ON_G5 = "OnG5"


_INTERVALS = {
    1: [RegionLabel.ABOVE_G1, RegionLabel.G1_TO_G2, RegionLabel.G2_TO_G3, RegionLabel.G3_TO_G4, RegionLabel.BELOW_G4],
    2: [RegionLabel.A, RegionLabel.B, RegionLabel.C, RegionLabel.D, RegionLabel.E, RegionLabel.F],
}
_ON = [RegionLabel.ON_G1, RegionLabel.ON_G2, RegionLabel.ON_G3, RegionLabel.ON_G4, RegionLabel.ON_G5]


def label_region(
    tau: int,
    b: float,
    alpha: float,
    branches: Optional[list[BifurcationBranch]] = None,
    tol: float = 1e-9,
) -> RegionLabel:
    """Name the parameter region of ``(b, alpha)``.

    ``branches`` must contain ``alpha`` in its grid; without it the branches
    are solved at this single ``alpha`` over a range wide enough to hold ``b``.
    """
    alpha = check_alpha(alpha)
    if branches is None:
        span = max(30.0, 2.0 * abs(b) + 1.0)
        branches = solve_branches(tau, [alpha], b_range=(-span, span))
        k = 0
    else:
        hits = np.flatnonzero(np.isclose(branches[0].alphas, alpha, rtol=0, atol=1e-12))
        if hits.size == 0:
            raise DomainError(f"alpha = {alpha} is not on the solved grid")
        k = int(hits[0])
    values = [br.bs[k] for br in branches]
    if any(np.isnan(v) for v in values):
        raise DomainError(f"branches are incomplete at alpha = {alpha}")
    for j, v in enumerate(values):
        if abs(b - v) <= tol:
            return _ON[j]
    above = sum(1 for v in values if b < v)
    return _INTERVALS[tau][above]
