"""
Stability regions of the delayed fractional system
==================================================

The boundary curve maps the unit circle into the plane of the multiplier
``a``.  Points the curve winds around once anticlockwise are stable.  Here we
classify a few multipliers that way and confirm each verdict by iterating
the system itself.
"""
import numpy as np

from fracdelay import SystemParams, boundary_curve, classify_point, self_intersections, simulate_linear

# alpha = 0.5 with feedback b = 2: the curve crosses itself and splits the
# plane into a stable pocket and a clockwise (unstable) loop
curve = boundary_curve(0.5, 2.0, 1)
print("self-intersections:", np.round(self_intersections(curve), 4))

for a in (-1.2, 0.2, -0.5 + 0.3j):
    region = classify_point(0.5, 2.0, 1, a)
    orbit = simulate_linear(SystemParams(0.5, a=a, b=2.0, tau=1), 2000)
    print(f"a = {a!s:>12}  winding {region.winding:+d}  {region.value.value:<9}"
          f"  simulated {orbit.verdict.value:<9} tail max {orbit.tail_max:.2e}")

# Without feedback the stable real interval is (1 - 2^alpha, 1)
for alpha in (0.25, 0.5, 0.75):
    lo = 1 - 2**alpha
    inside = classify_point(alpha, 0.0, 1, lo + 0.02).value.value
    outside = classify_point(alpha, 0.0, 1, lo - 0.02).value.value
    print(f"alpha = {alpha}: lower end {lo:.4f}, just inside {inside}, just outside {outside}")

# Feedback moves that interval: a = -7 is unstable alone but stable with b = 6
for b in (0.0, 6.0):
    v = simulate_linear(SystemParams(0.25, a=-7.0, b=b), 500).verdict.value
    print(f"alpha = 0.25, a = -7, b = {b}: {v}")
