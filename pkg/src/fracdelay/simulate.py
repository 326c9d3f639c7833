"""Iteration of the delayed fractional difference equation and its nonlinear variant.

The linear system is

    x(t) = b x(t - tau) + x0 + (a - 1) sum_{j<t} phi(t - 1 - j) x(j),

and the nonlinear map replaces ``(a - 1) x(j)`` by ``f(x(j)) - x(j)``.  Both
share one driver: every step needs the full history convolution
``c(t) = sum_{j<t} phi(t - 1 - j) g(j)`` with ``g`` the per-sample increment.

Two evaluation strategies give the same sums:

* ``"direct"``: one dot product per step, O(T^2).
* ``"fft"``: divide-and-conquer online convolution, where the left half of
  every block feeds the right half through one FFT convolution.  This is
  O(T log^2 T) and needs no memory truncation.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.signal import fftconvolve

from .errors import DomainError
from .fraccoef import check_alpha, phi_kernel

X_MAX = 1e10
DELTA = 1e-5

_LEAF = 64
_AUTO_FFT_STEPS = 8192


class Verdict(str, enum.Enum):
    STABLE = "Stable"
    UNSTABLE = "Unstable"
    INCONCLUSIVE = "Inconclusive"


class Prehistory(str, enum.Enum):
    CONSTANT_X0 = "ConstantX0"
    ZERO = "Zero"


@dataclass(frozen=True)
class MapSpec:
    """Right-hand side ``f`` of the nonlinear map, with ``f(0) = 0``.

    Use the constructors ``linear``, ``logistic``, ``cubic`` and ``custom``.
    ``slope`` is ``f'(0)``, the multiplier of the linearised system.
    """

    kind: str
    param: complex
    slope: complex
    f: Callable = field(compare=False, repr=False)

    @classmethod
    def linear(cls, a: complex) -> "MapSpec":
        a = complex(a) if isinstance(a, complex) else float(a)
        return cls("linear", a, a, lambda x: a * x)

    @classmethod
    def logistic(cls, lam: float) -> "MapSpec":
        lam = float(lam)
        return cls("logistic", lam, lam, lambda x: lam * x * (1.0 - x))

    @classmethod
    def cubic(cls, beta: float) -> "MapSpec":
        beta = float(beta)
        return cls("cubic", beta, 1.0 - beta, lambda x: beta * x**3 + (1.0 - beta) * x)

    @classmethod
    def custom(cls, f: Callable[[float], float], slope: float) -> "MapSpec":
        if f(0.0) != 0.0:
            raise DomainError("custom maps must satisfy f(0) = 0")
        return cls("custom", float("nan"), float(slope), f)

    @property
    def is_real(self) -> bool:
        return self.kind != "linear" or not isinstance(self.param, complex)


@dataclass(frozen=True)
class SystemParams:
    alpha: float
    a: complex = 0.0
    b: float = 0.0
    tau: int = 1
    x0: complex = 0.3
    prehistory: Prehistory = Prehistory.CONSTANT_X0

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        if isinstance(self.b, complex) or not math.isfinite(float(self.b)):
            raise DomainError(f"b must be a finite real number, got {self.b!r}")
        object.__setattr__(self, "b", float(self.b))
        if int(self.tau) != self.tau or self.tau < 1:
            raise DomainError(f"tau must be a positive integer, got {self.tau!r}")
        object.__setattr__(self, "tau", int(self.tau))
        object.__setattr__(self, "prehistory", Prehistory(self.prehistory))


@dataclass
class Trajectory:
    samples: np.ndarray
    verdict: Verdict
    t_escape: Optional[int]
    tail_max: float
    params: SystemParams
    map: Optional[MapSpec] = None
    decay_exponent: float = float("nan")

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.samples))

    @property
    def tail_spread(self) -> float:
        """Peak-to-peak range of the final window; small when the orbit has settled."""
        w = _window_length(len(self.samples), None)
        tail = self.samples[-w:]
        if np.iscomplexobj(tail):
            return float(np.max(np.abs(tail - tail[-1])))
        return float(np.ptp(tail))


def _window_length(n: int, window: Optional[int]) -> int:
    if window is None:
        return max(1, n // 10)
    return int(window)


def _escape_index(mags: np.ndarray, x_max: float) -> Optional[int]:
    over = np.flatnonzero(~(mags <= x_max))
    return int(over[0]) if over.size else None


def decay_exponent(samples: Sequence[complex], window: Optional[int] = None) -> float:
    """Log-log slope of the windowed peak ``max|x|`` between the last two windows.

    The peaks are placed at the times where they occur, so an algebraic tail
    ``t^-p`` gives ``p``.  Positive for decaying tails.  Returns NaN when the
    samples are too short for two windows.
    """
    mags = np.abs(np.asarray(samples))
    n = len(mags)
    w = _window_length(n, window)
    if 2 * w > n or n - 2 * w < 1:
        return float("nan")
    i1 = n - w + int(np.argmax(mags[-w:]))
    i0 = n - 2 * w + int(np.argmax(mags[-2 * w:-w]))
    last, prev = mags[i1], mags[i0]
    if prev == 0.0:
        return 0.0 if last == 0.0 else -math.inf
    if last == 0.0:
        return math.inf
    return -math.log(last / prev) / math.log(i1 / i0)


def verdict_of(
    samples: Sequence[complex],
    delta: float = DELTA,
    window: Optional[int] = None,
    x_max: float = X_MAX,
    rate: Optional[float] = None,
) -> Verdict:
    """Classify a finite orbit of the zero equilibrium.

    Unstable if any ``|x| > x_max``.  Stable if the final ``window`` samples
    stay below ``delta``.  Fractional orbits approach zero only algebraically
    (like ``t^-alpha``), so when ``rate`` is given the tail trend decides as
    well: a decay exponent of at least ``rate / 2`` is Stable and growth at
    that rate is Unstable.  Anything else is Inconclusive.
    """
    mags = np.abs(np.asarray(samples))
    w = _window_length(len(mags), window)
    if w > len(mags) or w < 1:
        raise DomainError(f"window {w} does not fit {len(mags)} samples")
    if _escape_index(mags, x_max) is not None:
        return Verdict.UNSTABLE
    if mags[-w:].max() < delta:
        return Verdict.STABLE
    if rate is not None:
        p = decay_exponent(mags, w)
        if p >= 0.5 * rate:
            return Verdict.STABLE
        if p <= -0.5 * rate:
            return Verdict.UNSTABLE
    return Verdict.INCONCLUSIVE


class _Escape(Exception):
    def __init__(self, t: int):
        self.t = t


def _iterate(alpha, b, tau, x0, T, increment, dtype, prehistory, x_max, method):
    """Run ``T`` steps; returns the samples (truncated at escape) and the escape index."""
    phi = phi_kernel(alpha, max(T, 1)).coeffs
    phi_rev = np.ascontiguousarray(phi[::-1])
    x = np.zeros(T + 1, dtype=dtype)
    g = np.zeros(T + 1, dtype=dtype)
    c = np.zeros(T + 1, dtype=dtype)
    x[0] = x0
    g[0] = increment(x[0])
    before = x[0] if prehistory is Prehistory.CONSTANT_X0 else 0.0

    def advance(t):
        delayed = x[t - tau] if t >= tau else before
        xt = x0 + b * delayed + c[t]
        x[t] = xt
        if not abs(xt) <= x_max:
            raise _Escape(t)
        g[t] = increment(xt)

    def solve(lo, hi):
        if hi - lo <= _LEAF:
            for p in range(max(lo, 1), hi):
                if p > lo:
                    c[p] += g[lo:p] @ phi_rev[T - (p - lo):]
                advance(p)
            return
        mid = (lo + hi) // 2
        solve(lo, mid)
        c[mid:hi] += fftconvolve(g[lo:mid], phi[: hi - lo])[mid - 1 - lo: hi - 1 - lo]
        solve(mid, hi)

    if method == "auto":
        method = "fft" if T > _AUTO_FFT_STEPS else "direct"
    try:
        if method == "direct":
            for t in range(1, T + 1):
                c[t] = g[:t] @ phi_rev[T - t:]
                advance(t)
        elif method == "fft":
            solve(0, T + 1)
        else:
            raise DomainError(f"unknown method {method!r}")
    except _Escape as esc:
        return x[: esc.t + 1].copy(), esc.t
    return x, None


def _finish(samples, t_escape, params, spec, delta, window, x_max):
    w = _window_length(len(samples), window)
    w = min(w, len(samples))
    if t_escape is not None:
        verdict = Verdict.UNSTABLE
    else:
        verdict = verdict_of(samples, delta, w, x_max, rate=params.alpha)
    return Trajectory(
        samples=samples,
        verdict=verdict,
        t_escape=t_escape,
        tail_max=float(np.max(np.abs(samples[-w:]))),
        params=params,
        map=spec,
        decay_exponent=decay_exponent(samples, w),
    )


def simulate_linear(
    params: SystemParams,
    T: int,
    delta: float = DELTA,
    window: Optional[int] = None,
    x_max: float = X_MAX,
    method: str = "auto",
) -> Trajectory:
    """Iterate the linear delayed system for ``T`` steps in complex arithmetic."""
    if T < 1:
        raise DomainError(f"T must be positive, got {T}")
    am1 = complex(params.a) - 1.0
    samples, t_escape = _iterate(
        params.alpha, params.b, params.tau, complex(params.x0), T,
        lambda v: am1 * v, complex, params.prehistory, x_max, method,
    )
    return _finish(samples, t_escape, params, MapSpec.linear(params.a), delta, window, x_max)


def simulate_nonlinear(
    spec: MapSpec,
    params: SystemParams,
    T: int,
    delta: float = DELTA,
    window: Optional[int] = None,
    x_max: float = X_MAX,
    method: str = "auto",
) -> Trajectory:
    """Iterate ``x(t) = x0 + b x(t-tau) + sum phi(t-j) [f(x(j-1)) - x(j-1)]``.

    ``params.a`` is ignored; the map supplies ``f``.  Real maps run in real
    arithmetic.
    """
    if T < 1:
        raise DomainError(f"T must be positive, got {T}")
    f = spec.f
    if spec.is_real:
        if isinstance(params.x0, complex) and params.x0.imag != 0.0:
            raise DomainError("real maps need a real initial condition")
        dtype, x0 = float, float(np.real(params.x0))
    else:
        dtype, x0 = complex, complex(params.x0)
    samples, t_escape = _iterate(
        params.alpha, params.b, params.tau, x0, T,
        lambda v: f(v) - v, dtype, params.prehistory, x_max, method,
    )
    return _finish(samples, t_escape, params, spec, delta, window, x_max)


@dataclass
class BifurcationSweep:
    kind: str
    values: np.ndarray
    tails: list
    alpha: float
    b: float
    tau: int

    def fixed_point_mask(self, tol: float = 1e-4) -> np.ndarray:
        """True where the retained tail has settled on a single finite value."""
        out = []
        for tail in self.tails:
            out.append(bool(len(tail)) and bool(np.all(np.isfinite(tail))) and float(np.ptp(tail)) < tol)
        return np.array(out)


def bifurcation_sweep(
    kind: str,
    values: Sequence[float],
    alpha: float,
    b: float,
    tau: int,
    x0: float = 0.2,
    steps: int = 2000,
    keep: int = 100,
    method: str = "auto",
) -> BifurcationSweep:
    """Post-transient samples of a logistic or cubic map over a parameter sweep.

    Orbits that escape contribute an empty tail.
    """
    makers = {"logistic": MapSpec.logistic, "cubic": MapSpec.cubic}
    if kind not in makers:
        raise DomainError(f"bifurcation sweeps support {sorted(makers)}, got {kind!r}")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DomainError("empty parameter sweep")
    if keep > steps:
        raise DomainError("keep must not exceed steps")
    params = SystemParams(alpha, b=b, tau=tau, x0=x0)
    tails = []
    for v in values:
        traj = simulate_nonlinear(makers[kind](v), params, steps, method=method)
        tails.append(np.array([]) if traj.t_escape is not None else traj.samples[-keep:].copy())
    return BifurcationSweep(kind, values, tails, params.alpha, params.b, params.tau)
