"""Fractional binomial kernel ``phi_alpha(n) = binom(n + alpha - 1, n)``.

The kernel weights the history sum of a fractional difference equation of
order ``alpha``.  Coefficients are built with the multiplicative recurrence

    phi(0) = 1,    phi(n) = phi(n - 1) * (n + alpha - 1) / n,

which is exact to roundoff and never evaluates Gamma at large arguments.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


def check_alpha(alpha: float) -> float:
    """Return ``alpha`` as a float, rejecting values outside (0, 1]."""
    try:
        value = float(alpha)
    except (TypeError, ValueError) as exc:
        raise DomainError(f"alpha must be a real number, got {alpha!r}") from exc
    if not (0.0 < value <= 1.0):
        raise DomainError(f"alpha must lie in (0, 1], got {value}")
    return value


@dataclass(frozen=True)
class PhiKernel:
    alpha: float
    coeffs: np.ndarray

    def __len__(self) -> int:
        return len(self.coeffs)


def phi_tilde(alpha: float, n: int) -> float:
    """Single kernel coefficient ``Gamma(n + alpha) / (Gamma(alpha) Gamma(n + 1))``."""
    alpha = check_alpha(alpha)
    if n < 0:
        raise DomainError(f"n must be non-negative, got {n}")
    value = 1.0
    for k in range(1, n + 1):
        value *= (k + alpha - 1.0) / k
    return value


def phi_kernel(alpha: float, N: int) -> PhiKernel:
    """First ``N`` kernel coefficients as a read-only array."""
    alpha = check_alpha(alpha)
    if N < 1:
        raise DomainError(f"N must be positive, got {N}")
    n = np.arange(1, N, dtype=float)
    coeffs = np.empty(N)
    coeffs[0] = 1.0
    coeffs[1:] = np.cumprod((n + alpha - 1.0) / n)
    coeffs.flags.writeable = False
    return PhiKernel(alpha, coeffs)


def zt_residual(alpha: float, z: complex, N: int) -> float:
    """Distance between the truncated Z-transform of the kernel and its closed form.

    Compares ``sum_{n<N} phi(n) z^-n`` with ``(1 - 1/z)^(-alpha)`` (principal
    branch).  The series converges only for ``|z| > 1``.
    """
    z = complex(z)
    if abs(z) <= 1.0:
        raise DomainError(f"|z| must exceed 1 for convergence, got |z| = {abs(z)}")
    coeffs = phi_kernel(alpha, N).coeffs
    powers = z ** -np.arange(N, dtype=float)
    partial = np.sum(coeffs * powers)
    closed = cmath.exp(-alpha * cmath.log(1.0 - 1.0 / z))
    return float(abs(partial - closed))
