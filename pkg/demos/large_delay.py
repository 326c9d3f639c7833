"""
Large delays
============

For long delays the stable real interval approaches
``(1 + 2^alpha (|b| - 1), 1)``, whatever the sign of ``b``.
"""
from fracdelay import SystemParams, asymptotic_region, boundary_curve, real_axis_crossings, simulate_linear

alpha = 0.2
for b in (0.5, -0.5):
    lo, hi = asymptotic_region(alpha, b)
    print(f"b = {b}: limiting interval ({lo:.4f}, {hi})")
    for tau in (20, 21, 40, 41):
        crossings = real_axis_crossings(boundary_curve(alpha, b, tau))
        inner = crossings[(crossings < 1) & (crossings > lo - 0.2)]
        print(f"  tau = {tau}: nearest real crossing below 1 at {inner.max() if inner.size else float('nan'):.4f}")
    for a in (lo + 0.05, lo - 0.05):
        v = simulate_linear(SystemParams(alpha, a=a, b=b, tau=41), 2000).verdict.value
        print(f"  tau = 41, a = {a:.4f}: {v}")
