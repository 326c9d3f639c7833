"""
Stabilising the fractional logistic map
=======================================

The logistic map ``f(x) = lambda x (1 - x)`` with memory is chaotic at
``lambda = 3.3``.  Delayed feedback with ``b = 1.1`` pulls it onto the fixed
point ``1 - 1/lambda``.
"""
import numpy as np

from fracdelay import MapSpec, SystemParams, bifurcation_sweep, simulate_nonlinear

lam = 3.3
for b in (0.0, 1.1):
    orbit = simulate_nonlinear(MapSpec.logistic(lam), SystemParams(0.5, b=b, x0=0.2), 20000)
    tail = orbit.samples[-200:]
    print(f"b = {b}: last samples range [{tail.min():.4f}, {tail.max():.4f}]")
print(f"fixed point 1 - 1/lambda = {1 - 1 / lam:.4f}")

# Count how many lambda values settle on a fixed point, with and without control
lams = np.arange(2.5, 3.61, 0.05)
for b in (0.0, 1.1):
    sweep = bifurcation_sweep("logistic", lams, 0.5, b, 1, steps=3000)
    settled = lams[sweep.fixed_point_mask()]
    span = f"{settled.min():.2f} .. {settled.max():.2f}" if settled.size else "none"
    print(f"b = {b}: fixed point for {settled.size}/{lams.size} values of lambda ({span})")

# Delay 2 with b = -0.58
sweep = bifurcation_sweep("logistic", lams, 0.5, -0.58, 2, steps=3000)
print(f"delay 2, b = -0.58: fixed point for {int(sweep.fixed_point_mask().sum())}/{lams.size} values")
