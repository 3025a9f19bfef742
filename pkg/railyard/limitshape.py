"""
Limit shapes for staircase left boundaries.

For an observation point ``(p_t, α_t)`` the moments of the limiting
counting measure are contour integrals of powers of

    F(z) = z [Q'(z) + W(z)],

a rational function that splits into slot contributions (``c`` is the
column fraction of the slot, ``x`` its weight):

    (L,-) right of t     c z/(z - x)                 in W
    (R,+) left of t      c zx/(1 + zx)               in Q'
    (L,+) left of t      c zx/(1 - zx)               in Q'
    (L,-) anywhere       c Σ_{ω^M=1, ω≠1} z/(z - ωx)   in Q' (staircase M)

Slots of segment ``p_t`` itself enter with the factor ``1 - α_t`` (on the
``(L,-)`` side) or ``α_t`` (on the ``+`` side), so ``F = A + α_t B`` with
``A`` and ``B`` independent of ``α_t``.

The density is recovered from the Stieltjes transform
``Σ_j log z_j(w)``, where ``z_j(w)`` is the root of ``F(z) = w`` that
stays next to the ``j``-th ``(L,-)`` pole as ``w → ∞``.
"""

from __future__ import annotations

import logging
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import RootFindingError, SingularPointError
from .model import AsymptoticModel, ObservationPoint
from .parallel import grid_map
from .rational import PoleSum, match_roots, nonreal_pairs, polish_roots, polynomial_roots

logger = logging.getLogger(__name__)

DEFAULT_NODES = 256
MAX_NODES = 1 << 14
QUADRATURE_TOL = 1e-9
TRACK_STEPS = 80


# -----------------------------------------------------------------------------
# Slot terms
# -----------------------------------------------------------------------------


def lminus_term(c: float, x: float) -> Tuple[float, List[Tuple[complex, complex]]]:
    if x == 0:
        return c, []
    return c, [(x, c * x)]


def rplus_term(c: float, x: float) -> Tuple[float, List[Tuple[complex, complex]]]:
    if x == 0:
        return 0.0, []
    return c, [(-1.0 / x, -c / x)]


def lplus_term(c: float, x: float) -> Tuple[float, List[Tuple[complex, complex]]]:
    if x == 0:
        return 0.0, []
    return -c, [(1.0 / x, -c / x)]


def staircase_term(c: float, x: float, M: int) -> Tuple[float, List[Tuple[complex, complex]]]:
    if M == 1:
        return 0.0, []
    roots = np.exp(2j * np.pi * np.arange(1, M) / M)
    if x == 0:
        return c * (M - 1), []
    if M == 2:
        return c, [(-x, -c * x)]
    return c * (M - 1), [(w * x, c * w * x) for w in roots]


def collect_terms(parts: Iterable[Tuple[float, List[Tuple[complex, complex]]]], sign: float = 1.0) -> PoleSum:
    const = 0.0
    terms: List[Tuple[complex, complex]] = []
    for k, ts in parts:
        const += sign * k
        terms.extend((p, sign * r) for p, r in ts)
    return PoleSum.from_terms(const, terms)


def f_parts(model: AsymptoticModel, p_t: int, M: int = 1) -> Tuple[PoleSum, PoleSum]:
    """``(A, B)`` with ``F = A + α_t B`` for observation points in segment ``p_t``."""
    if not 1 <= p_t <= model.m:
        raise ValueError(f"segment {p_t} outside [1, {model.m}]")
    if M < 1:
        raise ValueError(f"M must be a positive integer, got {M}")
    a_parts = []
    for x, c in model.weighted_slots("L-", range(p_t, model.m + 1)):
        a_parts.append(lminus_term(c, x))
    for x, c in model.weighted_slots("R+", range(1, p_t)):
        a_parts.append(rplus_term(c, x))
    for x, c in model.weighted_slots("L+", range(1, p_t)):
        a_parts.append(lplus_term(c, x))
    for x, c in model.weighted_slots("L-", range(1, model.m + 1)):
        a_parts.append(staircase_term(c, x, M))
    b_minus = [lminus_term(c, x) for x, c in model.weighted_slots("L-", [p_t])]
    b_plus = [rplus_term(c, x) for x, c in model.weighted_slots("R+", [p_t])]
    b_plus += [lplus_term(c, x) for x, c in model.weighted_slots("L+", [p_t])]
    return collect_terms(a_parts), collect_terms(b_minus, -1.0) + collect_terms(b_plus)


def f_function(model: AsymptoticModel, point: ObservationPoint, M: int = 1) -> PoleSum:
    A, B = f_parts(model, point.p, M)
    return A + B.scaled(point.alpha)


def f_eval(model: AsymptoticModel, point: ObservationPoint, M: int, z: complex) -> complex:
    return complex(f_function(model, point, M)(z))


def singularities(model: AsymptoticModel, point: ObservationPoint, M: int = 1) -> np.ndarray:
    return np.sort_complex(f_function(model, point, M).poles.astype(complex))


def w_eval(model: AsymptoticModel, point: ObservationPoint, u: complex) -> complex:
    """``W(u) = Σ c/(u - x)`` over ``(L,-)`` slots right of the observation column."""
    value = 0.0 + 0.0j
    for p in range(point.p, model.m + 1):
        scale = 1.0 - point.alpha if p == point.p else 1.0
        for x, c in model.weighted_slots("L-", [p]):
            if u == x:
                raise SingularPointError(f"W is singular at u={u}")
            value += scale * c / (u - x)
    return value


def q_prime(model: AsymptoticModel, point: ObservationPoint, M: int, u: complex) -> complex:
    """``Q'(u)`` from its four sum groups."""
    value = 0.0 + 0.0j
    for x, c in model.weighted_slots("L-", range(1, model.m + 1)):
        if u**M == x**M:
            raise SingularPointError(f"Q' is singular at u={u}")
        value += c * (M * u ** (M - 1) / (u**M - x**M) - 1.0 / (u - x))
    for p in range(1, point.p + 1):
        scale = point.alpha if p == point.p else 1.0
        for x, c in model.weighted_slots("R+", [p]):
            value += scale * c * x / (1.0 + u * x)
        for x, c in model.weighted_slots("L+", [p]):
            if u * x == 1.0:
                raise SingularPointError(f"Q' is singular at u={u}")
            value += scale * c * x / (1.0 - u * x)
    return value


# -----------------------------------------------------------------------------
# Moments
# -----------------------------------------------------------------------------


def measure_poles(model: AsymptoticModel, point: ObservationPoint, M: int = 1) -> np.ndarray:
    """Distinct ``(L,-)`` weights right of ``t`` at which ``F`` has a pole."""
    F = f_function(model, point, M)
    xs = sorted({x for x, _ in model.weighted_slots("L-", range(point.p, model.m + 1)) if x > 0})
    return np.array([x for x in xs if F.residue_at(x) != 0.0])


def total_mass(model: AsymptoticModel, point: ObservationPoint, M: int = 1) -> float:
    """Mass of the limiting counting measure, ``Σ residue/x`` over the measure poles."""
    F = f_function(model, point, M)
    return float(sum(np.real(F.residue_at(x)) / x for x in measure_poles(model, point, M)))


def _circle_integral(F: PoleSum, centre: float, radius: float, k: int, nodes: int) -> complex:
    theta = 2.0 * np.pi * np.arange(nodes) / nodes
    offset = radius * np.exp(1j * theta)
    z = centre + offset
    return np.mean(F(z) ** (k + 1) * offset / z) / (k + 1)


def moment(model: AsymptoticModel, point: ObservationPoint, M: int, k: int, nodes: int = DEFAULT_NODES) -> float:
    """``(1/(2(k+1)πi)) ∮ F(z)^{k+1} dz/z`` around the measure poles.

    Trapezoidal rule on one circle per pole; the node count doubles until
    two successive values agree to :data:`QUADRATURE_TOL`.
    """
    if k < 1:
        raise ValueError(f"moment order must be positive, got {k}")
    F = f_function(model, point, M)
    others = np.concatenate([F.poles.astype(complex), [0.0]])
    total = 0.0 + 0.0j
    for x in measure_poles(model, point, M):
        gaps = np.abs(others - x)
        gaps = gaps[gaps > 0]
        if gaps.size and gaps.min() < 1e-12:
            raise RootFindingError(f"contour cannot separate pole {x} from {others}")
        radius = 0.45 * gaps.min()
        n = nodes
        value = _circle_integral(F, x, radius, k, n)
        while True:
            n *= 2
            refined = _circle_integral(F, x, radius, k, n)
            if abs(refined - value) < QUADRATURE_TOL * max(1.0, abs(refined)):
                value = refined
                break
            if n >= MAX_NODES:
                logger.warning("moment quadrature around %g not converged at %d nodes", x, n)
                value = refined
                break
            value = refined
        total += value
    return float(total.real)


# -----------------------------------------------------------------------------
# Density
# -----------------------------------------------------------------------------


def _labelled_roots(F: PoleSum, w: complex) -> np.ndarray:
    """Roots of ``F = w`` labelled by the pole they approach as ``w → ∞``."""
    scale = 1.0 + float(np.max(np.abs(F.residues))) + abs(F.const)
    top = 1e4 * scale * (1.0 + abs(w.real))
    heights = np.geomspace(top, w.imag, TRACK_STEPS)
    current = np.asarray(F.poles, dtype=complex)
    for y in heights:
        roots = polynomial_roots(F.numerator(w.real + 1j * y))
        current = match_roots(current, roots)
    return polish_roots(lambda z: F(z) - w, F.derivative, current)


def _arg_sum(F: PoleSum, roots: np.ndarray, labels: np.ndarray) -> float:
    return float(-np.sum(np.angle(roots[labels])) / np.pi)


def density_from(F: PoleSum, centres: np.ndarray, kappa: float, delta: float | None = None) -> float:
    """``-(1/π) Σ Arg z_j(κ + iδ)`` over the roots attached to ``centres``.

    Evaluated at ``δ``, ``δ/2`` and ``δ/4`` and extrapolated to ``δ → 0``.
    """
    if not len(centres):
        return 0.0
    if delta is None:
        delta = 1e-6 * (1.0 + abs(kappa))
    labels = np.array([int(np.argmin(np.abs(F.poles - c))) for c in centres])
    roots = _labelled_roots(F, kappa + 1j * delta)
    values = [_arg_sum(F, roots, labels)]
    for d in (delta / 2, delta / 4):
        w = kappa + 1j * d
        roots = polish_roots(lambda z, w=w: F(z) - w, F.derivative, roots)
        values.append(_arg_sum(F, roots, labels))
    value = 2.0 * values[2] - values[1]
    return float(min(1.0, max(0.0, value)))


def density(model: AsymptoticModel, point: ObservationPoint, M: int, kappa: float) -> float:
    """Limiting particle density at ``κ`` on the vertical line through ``point``.

    Integrates over ``κ`` to :func:`total_mass` of the same point rather than
    to 1; the two coincide only when the measure poles carry unit total weight.
    """
    F = f_function(model, point, M)
    return density_from(F, measure_poles(model, point, M), kappa)


def density_grid(
    model: AsymptoticModel, point: ObservationPoint, M: int, kappas: Sequence[float], threads: int = 1
) -> np.ndarray:
    return np.array(grid_map(density, kappas, fixed=(model, point, M), threads=threads))


def support_interval(model: AsymptoticModel, point: ObservationPoint, M: int = 1) -> Tuple[float, float]:
    """Interval bounded by the real critical values of ``F``, ``F(0)`` and ``F(∞)``."""
    F = f_function(model, point, M)
    candidates = [0.0, float(np.real(F.const))]
    if F.poles.size:
        for z in polynomial_roots(_derivative_numerator(F)):
            if abs(z.imag) < 1e-9 * (1 + abs(z)) and np.min(np.abs(F.poles - z.real)) > 1e-9:
                candidates.append(float(np.real(F(z.real))))
    if not any(x == 0 for x in F.poles):
        candidates.append(float(np.real(F(0.0))))
    return min(candidates), max(candidates)


def _derivative_numerator(F: PoleSum) -> np.ndarray:
    """Ascending coefficients of ``F'(z) · ∏ (z - p_k)^2``."""
    poles = list(F.poles)
    total = np.zeros(1, dtype=complex)
    for k, (p, r) in enumerate(zip(F.poles, F.residues)):
        others = poles[:k] + poles[k + 1 :]
        base = P.polyfromroots(others) if others else np.array([1.0])
        total = P.polyadd(total, -r * P.polymul(base, base))
    return total


def root_census(model: AsymptoticModel, point: ObservationPoint, M: int, kappa: float) -> int:
    """Number of nonreal conjugate pairs among the roots of ``F(z) = κ``."""
    F = f_function(model, point, M)
    return nonreal_pairs(F.solve(kappa))
