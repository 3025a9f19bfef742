"""
Numerical evaluation of symmetric functions.

Complete homogeneous functions come from the generating-function
recurrence, Schur functions from the Jacobi–Trudi determinant, and two
closed products cover the specialisations used by the boundary formulas:
the Weyl dimension formula for ``s_λ(1, ..., 1)`` and the staircase
product ``∏ (x_i^M - x_j^M)/(x_i - x_j)``.
"""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from .partitions import Partition, part

logger = logging.getLogger(__name__)

# Jacobi–Trudi matrices above this dimension get a conditioning warning.
JT_WARN_DIM = 25
COINCIDENT_RTOL = 1e-12


def complete_homogeneous_table(rmax: int, xs: Sequence[float]) -> np.ndarray:
    """Return ``[h_0, ..., h_rmax]`` evaluated at ``xs``.

    Adding one variable at a time uses ``h_r(x, y) = h_r(x) + y h_{r-1}(x, y)``.
    """
    table = np.zeros(max(rmax, 0) + 1)
    table[0] = 1.0
    for y in xs:
        for r in range(1, rmax + 1):
            table[r] += y * table[r - 1]
    return table


def complete_homogeneous(r: int, xs: Sequence[float]) -> float:
    if r < 0:
        return 0.0
    return float(complete_homogeneous_table(r, xs)[r])


def skew_schur(lam: Partition, mu: Partition, xs: Sequence[float]) -> float:
    """``s_{λ/μ}(xs) = det(h_{λ_i - μ_j - i + j})``; zero unless ``μ ⊆ λ``."""
    n = max(len(lam), len(mu))
    if any(part(mu, i) > part(lam, i) for i in range(1, n + 1)):
        return 0.0
    if n == 0:
        return 1.0
    if n > JT_WARN_DIM:
        logger.warning("Jacobi-Trudi matrix of dimension %d may be ill-conditioned", n)
    h = complete_homogeneous_table(part(lam, 1) + n, xs)
    mat = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            r = part(lam, i) - part(mu, j) - i + j
            mat[i - 1, j - 1] = h[r] if r >= 0 else 0.0
    return float(np.linalg.det(mat))


def schur(lam: Partition, xs: Sequence[float]) -> float:
    return skew_schur(lam, (), xs)


def schur_principal(lam: Partition, k: int) -> float:
    """``s_λ(1, ..., 1)`` with ``k`` ones (Weyl dimension formula)."""
    if len(lam) > k:
        raise ValueError(f"partition of length {len(lam)} needs at least that many variables, got k={k}")
    value = 1.0
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            value *= (part(lam, i) - part(lam, j) + j - i) / (j - i)
    return value


def staircase_schur(M: int, xs: Sequence[float]) -> float:
    """``∏_{i<j} (x_i^M - x_j^M)/(x_i - x_j)``, extended by continuity."""
    if M < 1:
        raise ValueError(f"M must be a positive integer, got {M}")
    value = 1.0
    for i, xi in enumerate(xs):
        for xj in xs[i + 1 :]:
            scale = max(abs(xi), abs(xj), 1.0)
            if abs(xi - xj) < COINCIDENT_RTOL * scale:
                value *= M * xi ** (M - 1)
            else:
                value *= (xi**M - xj**M) / (xi - xj)
    return value


def staircase_partition(M: int, N: int) -> Partition:
    """``((M-1)(N-1), ..., M-1, 0)`` with trailing zero stripped."""
    return tuple(v for v in ((M - 1) * (N - i) for i in range(1, N + 1)) if v > 0)
