"""Characteristic function of the delayed system and its determinant form.

Both are residual oracles; no roots are solved for here.
"""
from __future__ import annotations

import numpy as np

from .curves import beta
from .errors import DomainError
from .fraccoef import check_alpha


def _frac_factor(z: complex, alpha: float) -> complex:
    if z == 0 or z == 1:
        raise DomainError(f"characteristic function undefined at z = {z}")
    return complex(z) * (1.0 - 1.0 / complex(z)) ** alpha


def char_fn(z: complex, alpha: float, a: complex, b: float, tau: int) -> complex:
    """``z (1 - 1/z)^alpha - b (1 - 1/z)^alpha z^(1 - tau) - (a - 1)``, principal powers."""
    alpha = check_alpha(alpha)
    z = complex(z)
    p = _frac_factor(z, alpha)
    return p - b * p * z ** (-tau) - (complex(a) - 1.0)


def char_matrix(z: complex, alpha: float, a: complex, b: float, tau: int) -> np.ndarray:
    """The ``(tau + 1) x (tau + 1)`` companion-style matrix of the delay chain."""
    alpha = check_alpha(alpha)
    if int(tau) != tau or tau < 1:
        raise DomainError(f"tau must be a positive integer, got {tau!r}")
    z = complex(z)
    p = _frac_factor(z, alpha)
    m = np.zeros((tau + 1, tau + 1), dtype=complex)
    m[0, 0] = p - (complex(a) - 1.0)
    m[0, tau] = -b * p
    for k in range(1, tau + 1):
        m[k, k - 1] = -1.0
        m[k, k] = z
    return m


def char_det(z: complex, alpha: float, a: complex, b: float, tau: int) -> complex:
    """Determinant of ``char_matrix`` by LU factorisation; equals ``z^tau char_fn(z)``."""
    return complex(np.linalg.det(char_matrix(z, alpha, a, b, tau)))


def boundary_residual(alpha: float, b: float, tau: int, ts) -> np.ndarray:
    """``|char_fn(e^{it}, alpha, beta(t), b, tau)|`` for each ``t`` in (0, 2 pi).

    Vanishes identically: the boundary curve is the characteristic relation
    solved for ``a`` on the unit circle.
    """
    alpha = check_alpha(alpha)
    ts = np.asarray(ts, dtype=float)
    if np.any((ts <= 0) | (ts >= 2 * np.pi)):
        raise DomainError("residual sweep needs t strictly inside (0, 2 pi)")
    z = np.exp(1j * ts)
    a = beta(ts, alpha, b, tau)
    p = z * (1.0 - 1.0 / z) ** alpha
    return np.abs(p - b * p * z ** (-tau) - (a - 1.0))
