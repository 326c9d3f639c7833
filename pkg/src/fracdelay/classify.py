"""Point classification by the signed winding number of the boundary curve.

A multiplier ``a`` is stable when the boundary winds around it exactly once
anticlockwise.  Clockwise loops (winding <= 0) and multiply wound pockets
(winding >= 2) are unstable.  Points closer than ``eps_boundary`` to the
sampled curve are reported as NearBoundary, because their integer winding
is not trustworthy.
"""
from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curves import DEFAULT_SAMPLES, BoundaryCurve, boundary_curve
from .errors import DomainError
from .simulate import DELTA, SystemParams, Verdict, simulate_linear

EPS_BOUNDARY = 1e-3


class RegionClass(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    NEAR_BOUNDARY = "NearBoundary"


@dataclass(frozen=True)
class RegionVerdict:
    value: RegionClass
    winding: int
    min_dist: float


def _winding_and_distance(points: np.ndarray, a: np.ndarray, chunk: int = 64):
    """Signed winding and polyline distance for every entry of ``a``."""
    a = np.atleast_1d(np.asarray(a, dtype=complex))
    p0, seg = points[:-1], np.diff(points)
    seg_len2 = np.abs(seg) ** 2
    safe_len2 = np.where(seg_len2 > 0, seg_len2, 1.0)
    wind = np.empty(a.shape, dtype=float)
    dist = np.empty(a.shape, dtype=float)
    flat_a = a.ravel()
    flat_w, flat_d = wind.ravel(), dist.ravel()
    for start in range(0, flat_a.size, chunk):
        aa = flat_a[start:start + chunk, None]
        rel = points[None, :] - aa
        with np.errstate(invalid="ignore", divide="ignore"):
            steps = np.angle(rel[:, 1:] / rel[:, :-1])
        flat_w[start:start + chunk] = np.nansum(steps, axis=1) / (2 * np.pi)
        u = np.real(np.conj(seg)[None, :] * (aa - p0[None, :])) / safe_len2[None, :]
        u = np.clip(np.where(seg_len2[None, :] > 0, u, 0.0), 0.0, 1.0)
        flat_d[start:start + chunk] = np.min(np.abs(p0[None, :] + u * seg[None, :] - aa), axis=1)
    return wind, dist


def winding_number(curve: BoundaryCurve, a: complex) -> int:
    """Signed number of turns of the sampled curve around ``a``."""
    w, _ = _winding_and_distance(curve.points, a)
    return int(np.rint(w[0]))


def distance_to_curve(curve: BoundaryCurve, a: complex) -> float:
    _, d = _winding_and_distance(curve.points, a)
    return float(d[0])


def _verdict(winding: int, dist: float, eps: float) -> RegionVerdict:
    if not dist >= eps:
        value = RegionClass.NEAR_BOUNDARY
    elif winding == 1:
        value = RegionClass.STABLE
    else:
        value = RegionClass.UNSTABLE
    return RegionVerdict(value, int(winding), float(dist))


def classify_curve_point(curve: BoundaryCurve, a: complex, eps: float = EPS_BOUNDARY) -> RegionVerdict:
    w, d = _winding_and_distance(curve.points, a)
    return _verdict(int(np.rint(w[0])), float(d[0]), eps)


def classify_point(
    alpha: float,
    b: float,
    tau: int,
    a: complex,
    N: int = DEFAULT_SAMPLES,
    eps: float = EPS_BOUNDARY,
) -> RegionVerdict:
    return classify_curve_point(boundary_curve(alpha, b, tau, N), a, eps)


@dataclass
class ScanResult:
    """Classification of a rectangular grid; arrays are indexed ``[im, re]``."""

    alpha: float
    b: float
    tau: int
    re: np.ndarray
    im: np.ndarray
    verdicts: np.ndarray
    winding: np.ndarray
    min_dist: np.ndarray
    simulated: Optional[np.ndarray] = None
    steps: Optional[int] = None
    agreement: dict = field(default_factory=dict)

    @property
    def points(self) -> np.ndarray:
        return self.re[None, :] + 1j * self.im[:, None]

    def stable_mask(self) -> np.ndarray:
        return self.verdicts == RegionClass.STABLE.value


def _simulate_row(args):
    alpha, b, tau, row, T, x0, delta = args
    return [
        simulate_linear(SystemParams(alpha, a=complex(a), b=b, tau=tau, x0=x0), T, delta=delta).verdict.value
        for a in row
    ]


def agreement_summary(verdicts: np.ndarray, simulated: np.ndarray) -> dict:
    """Confusion counts and the fraction of matching verdicts off the boundary band."""
    matrix = {}
    for c in RegionClass:
        for s in Verdict:
            matrix[f"{c.value}/{s.value}"] = int(np.sum((verdicts == c.value) & (simulated == s.value)))
    off = verdicts != RegionClass.NEAR_BOUNDARY.value
    n = int(np.sum(off))
    hits = int(np.sum(off & (verdicts == simulated)))
    return {
        "matrix": matrix,
        "compared": n,
        "agreeing": hits,
        "fraction": hits / n if n else float("nan"),
        "near_boundary": int(np.sum(~off)),
    }


def region_scan(
    alpha: float,
    b: float,
    tau: int,
    re_range=(-2.0, 2.0),
    im_range=(-2.0, 2.0),
    shape=(50, 50),
    validate: bool = False,
    T: int = 2000,
    x0: complex = 0.3,
    delta: float = DELTA,
    N: int = DEFAULT_SAMPLES,
    eps: float = EPS_BOUNDARY,
    jobs: int = 1,
) -> ScanResult:
    """Classify a ``shape = (n_re, n_im)`` grid, optionally checking each point by simulation.

    Results do not depend on ``jobs``; rows are always returned in grid order.
    """
    n_re, n_im = shape
    if n_re < 2 or n_im < 2:
        raise DomainError("a scan needs at least 2 points per axis")
    curve = boundary_curve(alpha, b, tau, N)
    re = np.linspace(re_range[0], re_range[1], n_re)
    im = np.linspace(im_range[0], im_range[1], n_im)
    grid = re[None, :] + 1j * im[:, None]
    w, d = _winding_and_distance(curve.points, grid)
    wind = np.rint(w).astype(int)
    verdicts = np.empty(grid.shape, dtype=object)
    for idx in np.ndindex(grid.shape):
        verdicts[idx] = _verdict(wind[idx], d[idx], eps).value.value
    verdicts = verdicts.astype(str)
    result = ScanResult(curve.alpha, curve.b, curve.tau, re, im, verdicts, wind, d)
    if validate:
        tasks = [(curve.alpha, curve.b, curve.tau, list(row), T, x0, delta) for row in grid]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_simulate_row, tasks))
        else:
            rows = [_simulate_row(t) for t in tasks]
        result.simulated = np.array(rows, dtype=str)
        result.steps = T
        result.agreement = agreement_summary(verdicts, result.simulated)
    return result
