"""Fractional-order difference equations with delayed feedback.

Simulation, stability boundary curves, winding-number region classification
and bifurcation branches in the complex multiplier plane.
"""
from .bifurcation import (
    BifurcationBranch,
    RegionLabel,
    cusp_residual,
    cusp_roots,
    cusp_time_tau1,
    cusp_time_tau2,
    g_tau1,
    g_tau1_printed,
    g_tau2,
    label_region,
    solve_branches,
)
from .charfn import boundary_residual, char_det, char_fn, char_matrix
from .classify import (
    RegionClass,
    RegionVerdict,
    ScanResult,
    agreement_summary,
    classify_curve_point,
    classify_point,
    distance_to_curve,
    region_scan,
    winding_number,
)
from .curves import (
    BaRegion,
    BoundaryCurve,
    asymptotic_region,
    ba_region,
    beta,
    beta_prime,
    boundary_curve,
    lower_line,
    real_axis_crossings,
    self_intersections,
)
from .errors import DomainError
from .fraccoef import PhiKernel, check_alpha, phi_kernel, phi_tilde, zt_residual
from .simulate import (
    BifurcationSweep,
    MapSpec,
    Prehistory,
    SystemParams,
    Trajectory,
    Verdict,
    bifurcation_sweep,
    decay_exponent,
    simulate_linear,
    simulate_nonlinear,
    verdict_of,
)

__version__ = "0.1.0"
