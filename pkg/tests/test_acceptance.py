"""Acceptance criteria, one block per criterion.

Each check records its outcome; ``pytest`` prints one PASS/FAIL line per
criterion in the terminal summary, and running this file directly prints the
same table.
"""
from __future__ import annotations

import math
import os
import subprocess
import sys
import time
from collections import OrderedDict

import numpy as np
import pytest

from fracdelay import (
    MapSpec, SystemParams, Verdict, beta, boundary_curve, char_det, char_fn,
    classify_curve_point, classify_point, g_tau1, g_tau2, phi_kernel, region_scan,
    simulate_linear, simulate_nonlinear, solve_branches, winding_number, zt_residual,
)
from fracdelay.curves import DEFAULT_SAMPLES, asymptotic_region
from fracdelay.simulate import DELTA

TITLES = {
    1: "worked-example verdict table (delay 1)",
    2: "large negative multiplier control",
    3: "uncontrolled real range",
    4: "boundary characteristic residual",
    5: "bifurcation branch anchors",
    6: "determinant equivalence",
    7: "classifier vs simulation scan",
    8: "nonlinear linearisation",
    9: "large-delay band",
    10: "property suites",
}

_RESULTS: "OrderedDict[int, list]" = OrderedDict()


def _record(n: int, name: str, ok: bool, detail: str) -> None:
    _RESULTS.setdefault(n, []).append((name, bool(ok), detail))


def summary_lines() -> list[str]:
    lines = []
    for n in sorted(_RESULTS):
        subs = _RESULTS[n]
        failed = [s for s in subs if not s[1]]
        status = "PASS" if not failed else "FAIL"
        if failed:
            detail = "; ".join(f"{name}: {d}" for name, _, d in failed)
        else:
            detail = "; ".join(d for _, _, d in subs if d)
        lines.append(f"CRITERION {n:>2} [{status}] {TITLES[n]}: {detail}")
    return lines


def _check(n: int, name: str, ok: bool, detail: str) -> None:
    _record(n, name, ok, detail)
    assert ok, detail


def _short(v) -> str:
    return v.value if hasattr(v, "value") else str(v)


# ---------------------------------------------------------------- 1

EXAMPLES = [
    (0.5, 2.0, -1.2, "Stable"), (0.5, 2.0, 0.2, "Unstable"),
    (0.2, -3.0, 4 + 1.3j, "Stable"), (0.2, -3.0, 4 - 1.3j, "Stable"), (0.2, -3.0, 2.0, "Unstable"),
    (0.5, -2.2, 1.5, "Unstable"), (0.5, -2.2, 2.8, "Unstable"),
    (0.7, -1.0, 1.1 + 0.5j, "Stable"), (0.7, -1.0, 1.3 - 0.8j, "Stable"),
    (0.4, 1.0, 0.5, "Stable"), (0.4, 1.0, -0.7j, "Unstable"),
    (0.3, 0.1, -0.3, "Stable"), (0.3, 0.1, -0.4, "Unstable"),
    (0.1, 18.3, -2.0, "Unstable"), (0.1, 18.3, 0.4 + 0.4j, "Unstable"),
]


def test_c1_worked_examples():
    t0 = time.perf_counter()
    bad = []
    for alpha, b, a, expected in EXAMPLES:
        c = classify_point(alpha, b, 1, a).value.value
        s = simulate_linear(SystemParams(alpha, a=a, b=b, tau=1, x0=0.3), 2000, delta=DELTA).verdict.value
        if c != expected or s != expected:
            bad.append(f"(alpha={alpha}, b={b}, a={a}) classifier {c}, simulation {s}, expected {expected}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    _check(1, "table", ok, "; ".join(bad) or f"{len(EXAMPLES)} points agree, {dt:.1f} s")
    if dt >= 10:
        _check(1, "runtime", False, f"{dt:.1f} s exceeds 10 s")


# ---------------------------------------------------------------- 2

def test_c2_large_negative_multiplier():
    t0 = time.perf_counter()
    cases = [(0.25, 1, -7.0, 0.0, "Unstable"), (0.25, 1, -7.0, 6.0, "Stable"),
             (0.5, 2, -1.1, 0.0, "Unstable"), (0.5, 2, -1.1, -0.6, "Stable")]
    bad = []
    for alpha, tau, a, b, expected in cases:
        c = classify_point(alpha, b, tau, a).value.value
        s = simulate_linear(SystemParams(alpha, a=a, b=b, tau=tau, x0=0.3), 500).verdict.value
        if c != expected or s != expected:
            bad.append(f"(alpha={alpha}, tau={tau}, b={b}) classifier {c}, simulation {s}")
    dt = time.perf_counter() - t0
    _check(2, "control", not bad and dt < 5, "; ".join(bad) or f"4 cases agree, {dt:.1f} s")


# ---------------------------------------------------------------- 3

def test_c3_uncontrolled_range():
    bad = []
    for alpha in (0.25, 0.5, 0.75):
        lo = 1 - 2**alpha
        for a, expected in ((lo + 0.02, "Stable"), (lo - 0.02, "Unstable"), (0.98, "Stable"), (1.02, "Unstable")):
            got = classify_point(alpha, 0.0, 1, a).value.value
            if got != expected:
                bad.append(f"alpha={alpha} a={a:.4f}: {got}")
    _check(3, "range", not bad, "; ".join(bad) or "12 points exact")


# ---------------------------------------------------------------- 4

def test_c4_boundary_residual():
    rng = np.random.default_rng(2024)
    ts = np.linspace(0.0, 2 * np.pi, 2002)[1:-1]
    z = np.exp(1j * ts)
    worst = 0.0
    for k in range(20):
        alpha = float(rng.uniform(0.05, 1.0))
        b = float(rng.uniform(-5.0, 5.0))
        tau = int((1, 2, 5, 21)[k % 4])
        a = beta(ts, alpha, b, tau)
        res = max(abs(char_fn(zi, alpha, ai, b, tau)) for zi, ai in zip(z, a))
        worst = max(worst, res)
    _check(4, "residual", worst < 1e-10, f"max residual {worst:.2e}")


# ---------------------------------------------------------------- 5

ANCHOR_ALPHAS = (0.2, 0.5, 0.8)
GRID50 = np.linspace(0.1, 0.9, 50)


@pytest.fixture(scope="module")
def branch_sets():
    return {tau: solve_branches(tau, GRID50) for tau in (1, 2)}


def _branch(branches, j):
    return [br for br in branches if br.index == j][0]


def _value_at(tau, j, alpha):
    """Branch ``g_j`` solved at one alpha (0.2 and 0.5 are not on the 50-point grid)."""
    return float(_branch(solve_branches(tau, [alpha]), j).bs[0])


def test_c5_g_tau1_at_one():
    vals = [abs(g_tau1(1.0, a)) for a in ANCHOR_ALPHAS]
    _check(5, "g_tau1(1, alpha) = 0", max(vals) < 1e-9, f"max |g_tau1(1)| {max(vals):.1e}")


def test_c5_g_tau2_at_one():
    vals = [abs(g_tau2(1.0, a)) for a in ANCHOR_ALPHAS]
    _check(5, "g_tau2(1, alpha) = 0", max(vals) < 1e-9, f"max |g_tau2(1)| {max(vals):.1e}")


def test_c5_g_tau2_at_minus_one():
    vals = [abs(g_tau2(-1.0, a)) for a in ANCHOR_ALPHAS]
    _check(5, "g_tau2(-1, alpha) = 0", max(vals) < 1e-9,
           f"|g_tau2(-1, alpha)| = {', '.join(f'{v:.3f}' for v in vals)}; b = -1 is a touching line, not a cusp")


def test_c5_orderings(branch_sets):
    g = np.array([br.bs for br in branch_sets[1]])
    ok1 = (not np.isnan(g).any() and np.all(g[3] < g[2]) and np.all(g[2] == -1)
           and np.all(g[2] < g[1]) and np.allclose(g[1], 1.0) and np.all(g[1] < g[0]))
    g = np.array([br.bs for br in branch_sets[2]])
    ok2 = (not np.isnan(g).any() and np.all(g[4] == -1) and np.all(np.diff(g, axis=0) < 0)
           and np.allclose(g[0], 1.0))
    _check(5, "orderings", ok1 and ok2, f"delay 1 {'ok' if ok1 else 'violated'}, delay 2 {'ok' if ok2 else 'violated'}")


def test_c5_placement_g1_at_0_1():
    g1 = _value_at(1, 1, 0.1)
    _check(5, "18.3 > g1(0.1)", 18.3 > g1, f"g1(0.1) = {g1:.6f}")


def test_c5_placement_g4_at_0_2():
    g4 = _value_at(1, 4, 0.2)
    _check(5, "g4(0.2) < -3", g4 < -3, f"g4(0.2) = {g4:.6f}")


def test_c5_placement_g4_at_0_5():
    g4 = _value_at(1, 4, 0.5)
    _check(5, "-2.2 < g4(0.5)", -2.2 < g4, f"g4(0.5) = {g4:.6f}")


# ---------------------------------------------------------------- 6

def test_c6_determinant():
    rng = np.random.default_rng(6)
    worst = 0.0
    for tau in (1, 2, 3, 4):
        z = rng.uniform(0.1, 3.0, 100) * np.exp(1j * rng.uniform(-np.pi, np.pi, 100))
        for zi in z:
            alpha, a, b = 0.45, complex(rng.normal(), rng.normal()), float(rng.uniform(-3, 3))
            ref = zi**tau * char_fn(zi, alpha, a, b, tau)
            worst = max(worst, abs(char_det(zi, alpha, a, b, tau) - ref) / abs(ref))
    _check(6, "det", worst < 1e-10, f"max relative error {worst:.1e}")


# ---------------------------------------------------------------- 7

def test_c7_scan():
    t0 = time.perf_counter()
    jobs = max(1, min(4, os.cpu_count() or 1))
    r = region_scan(0.5, 2.0, 1, (-2.0, 1.5), (-1.5, 1.5), (40, 40), validate=True, T=2000, jobs=jobs)
    dt = time.perf_counter() - t0
    ag = r.agreement
    ok = ag["fraction"] >= 0.95 and dt < 300
    _check(7, "scan", ok, f"agreement {ag['agreeing']}/{ag['compared']} = {ag['fraction']:.3f}, "
                         f"{ag['near_boundary']} near boundary, {dt:.0f} s")


# ---------------------------------------------------------------- 8

def _linearisation_grid(tau, bs, lams, T, delta, N):
    curves = {}

    def stable(b, lam):
        key = round(b, 12)
        if key not in curves:
            curves[key] = boundary_curve(0.5, b, tau, N)
        return classify_curve_point(curves[key], lam, eps=0.0).winding == 1

    compared = agree = 0
    mismatches = []
    for b in bs:
        for lam in lams:
            c = stable(b, lam)
            if any(stable(b + db, lam + dl) != c for db in (-0.05, 0, 0.05) for dl in (-0.05, 0, 0.05)):
                continue
            traj = simulate_nonlinear(MapSpec.logistic(lam), SystemParams(0.5, b=b, tau=tau, x0=1e-3), T, delta=delta)
            sim_stable = traj.verdict == Verdict.STABLE
            compared += 1
            if sim_stable == c:
                agree += 1
            else:
                mismatches.append(f"(b={b:.3f}, lambda={lam:.3f})")
    return compared, agree, mismatches


def test_c8_logistic_delay1():
    bs = np.linspace(-2.5, 3.5, 15)
    lams = np.linspace(-5.0, 1.5, 15)
    n, k, bad = _linearisation_grid(1, bs, lams, 20_000, 1e-5, DEFAULT_SAMPLES)
    _check(8, "delay 1", n > 0 and k == n, f"delay 1: {k}/{n} off-band points agree" + (f", mismatches {bad}" if bad else ""))


@pytest.mark.long
def test_c8_logistic_delay2_long():
    bs = np.linspace(-1.2, 1.2, 8)
    lams = np.linspace(-2.5, 1.5, 8)
    n, k, bad = _linearisation_grid(2, bs, lams, 100_000, 1e-9, DEFAULT_SAMPLES)
    _check(8, "delay 2", n > 0 and k == n, f"delay 2: {k}/{n} off-band points agree" + (f", mismatches {bad}" if bad else ""))


# ---------------------------------------------------------------- 9

def test_c9_large_delay_band():
    bad, notes = [], []
    for b in (0.5, -0.5):
        edge = asymptotic_region(0.2, b)[0]
        inner = simulate_linear(SystemParams(0.2, a=edge + 0.05, b=b, tau=41), 2000).verdict
        outer = simulate_linear(SystemParams(0.2, a=edge - 0.05, b=b, tau=41), 2000).verdict
        notes.append(f"b={b}: inner {_short(inner)}, outer {_short(outer)}")
        if inner != Verdict.STABLE or outer != Verdict.UNSTABLE:
            bad.append(notes[-1])
    _check(9, "band", not bad, "; ".join(bad) or f"edge {edge:.4f}; " + "; ".join(notes))


# ---------------------------------------------------------------- 10

def test_c10_property_suites(tmp_path):
    from scipy.special import gammaln

    t0 = time.perf_counter()
    failures = []
    for alpha in (0.1, 0.25, 0.5, 0.75, 1.0):
        n = np.arange(31)
        ref = np.exp(gammaln(n + alpha) - gammaln(alpha) - gammaln(n + 1))
        if np.max(np.abs(phi_kernel(alpha, 31).coeffs / ref - 1)) > 1e-12:
            failures.append(f"gamma ratio alpha={alpha}")
    for r in (1.5, 2.0, 5.0):
        for th in (0.0, math.pi / 3, math.pi):
            z = r * complex(math.cos(th), math.sin(th))
            res = [zt_residual(0.4, z, N) for N in (10, 40, 160, 640)]
            if not (all(b <= a + 1e-15 for a, b in zip(res, res[1:])) and res[-1] < 1e-12):
                failures.append(f"z-transform |z|={r} arg={th:.2f}")
    rng = np.random.default_rng(10)
    for _ in range(50):
        alpha, b, tau = rng.uniform(0.05, 1), rng.uniform(-5, 5), int(rng.integers(1, 30))
        t = rng.uniform(0.01, 2 * np.pi - 0.01)
        if abs(beta(2 * np.pi - t, alpha, b, tau) - np.conj(beta(t, alpha, b, tau))) > 1e-12:
            failures.append(f"conjugate symmetry {alpha:.3f},{b:.3f},{tau}")
    for _ in range(20):
        alpha, b, tau = rng.uniform(0.05, 1), rng.uniform(-5, 5), int(rng.integers(1, 5))
        c = boundary_curve(alpha, b, tau, 2000)
        far = (2 * np.max(np.abs(c.points)) + 1) * np.exp(1j * rng.uniform(0, 2 * np.pi))
        if winding_number(c, far) != 0:
            failures.append(f"far-field winding {alpha:.3f},{b:.3f},{tau}")
    outs = []
    for k in range(2):
        out = tmp_path / f"scan{k}.json"
        subprocess.run([sys.executable, "-m", "fracdelay", "scan", "--alpha", "0.5", "--b", "2", "--shape", "5x4",
                        "--validate", "--n", "2000", "--out", str(out)], check=True, capture_output=True)
        outs.append(out.read_bytes())
    if outs[0] != outs[1]:
        failures.append("CLI output differs between identical runs")
    dt = time.perf_counter() - t0
    _check(10, "properties", not failures and dt < 60,
           "; ".join(failures) or f"all properties hold, {dt:.1f} s")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", *sys.argv[1:]]))
