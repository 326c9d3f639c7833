"""
Bifurcation branches in the (b, alpha) plane
============================================

The branches are the values of ``b`` where the boundary curve develops a
cusp or touches itself.  Between consecutive branches the shape of the
stable region stays the same.
"""
import numpy as np

from fracdelay import label_region, solve_branches

alphas = np.array([0.1, 0.3, 0.5, 0.7, 0.9])

for tau in (1, 2):
    print(f"delay {tau}")
    for br in solve_branches(tau, alphas):
        kind = "touching line" if br.constant else "cusp branch"
        print(f"  g{br.index} ({kind:13s})", np.round(br.bs, 4))

# For delay 1, three branches have closed forms: g1 = (2 - alpha)/alpha,
# g2 = 1 and g4 = -1/alpha
print("(2 - alpha)/alpha:", np.round((2 - alphas) / alphas, 4))
print("-1/alpha:         ", np.round(-1 / alphas, 4))

for tau, b, a in [(1, 2.0, 0.5), (1, -3.0, 0.2), (1, 18.3, 0.1), (2, 0.0, 0.5), (2, -0.65, 0.5), (2, -0.8, 0.5)]:
    print(f"delay {tau}, b = {b}, alpha = {a}: region {label_region(tau, b, a).value}")
