"""
Rational functions with simple poles and polynomial root machinery.

Every function whose level sets are studied here (the staircase ``F``,
its affine parts in ``α_t``) is a constant plus finitely many simple
poles, so it is stored in that partial-fraction form. Level sets
``F(z) = w`` are solved by clearing denominators, taking companion-matrix
roots and polishing them by Newton's method on the unexpanded form.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Iterable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import linear_sum_assignment

from .errors import RootFindingError, SingularPointError

logger = logging.getLogger(__name__)

MERGE_TOL = 1e-13
RESIDUE_TOL = 1e-15
NEWTON_TOL = 1e-12


@dataclass(frozen=True)
class PoleSum:
    """``const + Σ_k residues[k] / (z - poles[k])``."""

    const: complex
    poles: np.ndarray
    residues: np.ndarray

    @classmethod
    def from_terms(cls, const: complex, terms: Iterable[Tuple[complex, complex]]) -> "PoleSum":
        """Merge coincident poles and drop vanishing residues."""
        merged: List[List[complex]] = []
        for pole, res in terms:
            for item in merged:
                if abs(item[0] - pole) <= MERGE_TOL * max(1.0, abs(pole)):
                    item[1] += res
                    break
            else:
                merged.append([pole, res])
        kept = [(p, r) for p, r in merged if abs(r) > RESIDUE_TOL]
        poles = np.array([p for p, _ in kept])
        residues = np.array([r for _, r in kept])
        if np.all(np.isreal(poles)) and np.all(np.isreal(residues)):
            poles, residues = poles.real.astype(float), residues.real.astype(float)
        return cls(const=const, poles=poles, residues=residues)

    @classmethod
    def zero(cls) -> "PoleSum":
        return cls(0.0, np.zeros(0), np.zeros(0))

    def __add__(self, other: "PoleSum") -> "PoleSum":
        return PoleSum.from_terms(
            self.const + other.const,
            list(zip(self.poles, self.residues)) + list(zip(other.poles, other.residues)),
        )

    def scaled(self, factor: float) -> "PoleSum":
        return PoleSum.from_terms(self.const * factor, [(p, r * factor) for p, r in zip(self.poles, self.residues)])

    def _check(self, z) -> None:
        if self.poles.size and np.any(np.abs(np.subtract.outer(np.atleast_1d(z), self.poles)) == 0):
            raise SingularPointError(f"evaluation at a pole: z={z}")

    def __call__(self, z):
        self._check(z)
        z = np.asarray(z)
        return self.const + np.sum(self.residues / (z[..., None] - self.poles), axis=-1)

    def derivative(self, z, order: int = 1):
        self._check(z)
        z = np.asarray(z)
        sign = (-1) ** order
        fact = float(np.prod(np.arange(1, order + 1)))
        return np.sum(sign * fact * self.residues / (z[..., None] - self.poles) ** (order + 1), axis=-1)

    def residue_at(self, pole: complex) -> complex:
        if not self.poles.size:
            return 0.0
        k = int(np.argmin(np.abs(self.poles - pole)))
        return self.residues[k] if abs(self.poles[k] - pole) <= MERGE_TOL * max(1.0, abs(pole)) else 0.0

    def numerator(self, w: complex = 0.0) -> np.ndarray:
        """Ascending coefficients of ``(F(z) - w) · ∏ (z - p_k)``."""
        poles = list(self.poles)
        coeffs = (self.const - w) * P.polyfromroots(poles) if poles else np.array([self.const - w])
        for k, (p, r) in enumerate(zip(self.poles, self.residues)):
            others = poles[:k] + poles[k + 1 :]
            coeffs = P.polyadd(coeffs, r * P.polyfromroots(others) if others else np.array([r]))
        return np.atleast_1d(coeffs)

    def solve(self, w: complex = 0.0) -> np.ndarray:
        """All roots of ``F(z) = w``, Newton polished."""
        roots = polynomial_roots(self.numerator(w))
        return polish_roots(lambda z: self(z) - w, self.derivative, roots)


def polynomial_roots(coeffs: np.ndarray) -> np.ndarray:
    """Roots of an ascending coefficient vector via the companion matrix."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    if coeffs.size <= 1:
        return np.zeros(0, dtype=complex)
    return np.roots(coeffs[::-1])


def polish_roots(
    f: Callable, df: Callable, roots: np.ndarray, tol: float = NEWTON_TOL, maxiter: int = 50
) -> np.ndarray:
    """Newton iterations from each root; roots that fail to improve are kept."""
    out = np.array(roots, dtype=complex)
    for k, z in enumerate(out):
        for _ in range(maxiter):
            try:
                fz, dz = complex(f(z)), complex(df(z))
            except SingularPointError:
                break
            if dz == 0:
                break
            step = fz / dz
            z = z - step
            if abs(step) <= tol * max(1.0, abs(z)):
                break
        out[k] = z
    return out


def match_roots(previous: np.ndarray, current: np.ndarray) -> np.ndarray:
    """Reorder ``current`` so that entry ``k`` continues ``previous[k]``."""
    if previous.size != current.size:
        raise RootFindingError(f"root count changed from {previous.size} to {current.size}")
    cost = np.abs(previous[:, None] - current[None, :])
    rows, cols = linear_sum_assignment(cost)
    out = np.empty_like(current)
    out[rows] = current[cols]
    return out


def track_roots(
    roots_at: Callable[[complex], np.ndarray], path: Sequence[complex], start: np.ndarray
) -> np.ndarray:
    """Continue a labelled root configuration along ``path``."""
    current = np.asarray(start, dtype=complex)
    for w in path:
        current = match_roots(current, roots_at(w))
    return current


def nonreal_pairs(roots: np.ndarray, tol: float = 1e-8) -> int:
    """Number of conjugate pairs among ``roots``."""
    return int(np.sum(np.abs(roots.imag) > tol * (1.0 + np.abs(roots))) // 2)


def descending_heights(top: float, bottom: float, steps: int) -> np.ndarray:
    return np.geomspace(top, bottom, steps)
