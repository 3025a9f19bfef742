"""
Limit shapes for piecewise left boundaries.

The left boundary partition is a union of ``s`` blocks of equal parts.
In scaled coordinates block ``i`` (counted from the bottom) occupies
``[a_i, b_i]`` of the particle line, with ``Σ (b_i - a_i) = 1``. The
``(L,-)`` weights fall into groups of equal value, ordered from the
largest; group ``i`` owns the consecutive levels ``d_i .. d_{i+1} - 1``
(counted from the top) and sees a limit measure made of density-one bands

    [β_{i,k}, γ_{i,k}] = [(a_j - a_1)/θ_i, (b_j - a_1)/θ_i],   j = s - d_i - k + 1,

measured from the bottom of the lowest block.

Everything is expressed in the band variable ``t``, related to ``z`` by

    z = Φ_i(t) = Π_k (t - β_{i,k}) / (t - γ_{i,k}),

so that the group function becomes

    F^(i) = G(Φ_i(t)) + ρ θ_i t,
    G(z)  = (γ_i - ρθ_i) z/(z - 1) + η_i - ρ Σ_{g>i} θ_g + [i = 1] R(z),

where ``R`` collects the ``(R,+)`` and ``(L,+)`` interactions of the top
weight ``x_0``. ``G`` is affine in the observation fraction ``α``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.optimize import brentq

from .errors import BranchError, RootFindingError, SingularPointError, SpecError
from .frozen import CurveSample, ParametricCurve, refined_grid
from .limitshape import collect_terms, lplus_term, rplus_term
from .model import AsymptoticModel, ObservationPoint
from .partitions import Partition, make_partition
from .rational import PoleSum, match_roots, nonreal_pairs, polish_roots, polynomial_roots

logger = logging.getLogger(__name__)

GROUP_TOL = 1e-12
LEVEL_TOL = 1e-9
TRACK_STEPS = 80
BISECT_MAXITER = 200


# -----------------------------------------------------------------------------
# Boundary data
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewiseBoundary:
    """Scaled blocks ``[a_i, b_i]``, bottom block first."""

    a: Tuple[float, ...]
    b: Tuple[float, ...]

    def __post_init__(self):
        if len(self.a) != len(self.b) or not self.a:
            raise SpecError(f"need matching non-empty block ends, got {len(self.a)} and {len(self.b)}")
        ends = [v for pair in zip(self.a, self.b) for v in pair]
        if any(q <= p for p, q in zip(ends, ends[1:])):
            raise SpecError(f"blocks must satisfy a_1 < b_1 < a_2 < ... < b_s, got {ends}")
        if abs(sum(self.lengths) - 1.0) > LEVEL_TOL:
            raise SpecError(f"block lengths sum to {sum(self.lengths)}, expected 1")
        if self.a[0] < -1.0 - LEVEL_TOL:
            raise SpecError(f"a_1 = {self.a[0]} puts the bottom level below zero")

    @property
    def s(self) -> int:
        return len(self.a)

    @property
    def lengths(self) -> Tuple[float, ...]:
        return tuple(q - p for p, q in zip(self.a, self.b))

    def min_gap(self) -> float:
        """Smallest scaled gap between consecutive levels."""
        if self.s == 1:
            return float("inf")
        return min(a - b for a, b in zip(self.a[1:], self.b[:-1]))

    @classmethod
    def from_partition(cls, lam: Sequence[int], rows: int) -> "PiecewiseBoundary":
        """Blocks of a partition padded to ``rows`` parts."""
        lam = make_partition(lam)
        if len(lam) > rows:
            raise SpecError(f"partition has {len(lam)} parts, more than {rows} rows")
        parts = list(lam) + [0] * (rows - len(lam))
        positions = sorted(parts[j] - (j + 1) for j in range(rows))
        a, b = [], []
        start = positions[0]
        for prev, cur in zip(positions, positions[1:] + [None]):
            if cur is None or cur != prev + 1:
                a.append(start / rows)
                b.append((prev + 1) / rows)
                start = cur
        return cls(tuple(a), tuple(b))

    def partition(self, rows: int) -> Partition:
        """Integer realisation with ``rows`` parts (largest remainder rounding)."""
        raw = np.array(self.lengths) * rows
        sizes = np.floor(raw).astype(int)
        for k in np.argsort(sizes - raw)[: rows - int(sizes.sum())]:
            sizes[k] += 1
        positions: List[int] = []
        for a, k in zip(self.a, sizes):
            start = int(round(a * rows))
            if positions and start <= positions[-1] + 1:
                raise SpecError(f"blocks merge at {rows} rows; use more rows")
            positions.extend(range(start, start + int(k)))
        parts = [positions[rows - j] + j for j in range(1, rows + 1)]
        if parts[-1] < 0:
            raise SpecError("realised boundary has a negative part")
        return make_partition(parts)

    def to_dict(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}

    @classmethod
    def from_dict(cls, data: Mapping) -> "PiecewiseBoundary":
        return cls(tuple(float(v) for v in data["a"]), tuple(float(v) for v in data["b"]))


@dataclass(frozen=True)
class WeightGroups:
    values: Tuple[float, ...]
    psi: Mapping[Tuple[int, int], int]
    theta: Tuple[float, ...]
    rho: float
    d: Tuple[int, ...]

    @property
    def I(self) -> int:
        return len(self.values)

    @property
    def top(self) -> float:
        return self.values[0]

    def levels(self, i: int) -> range:
        return range(self.d[i - 1], self.d[i])

    def tail(self, i: int) -> float:
        return float(sum(self.theta[i:]))


def group_weights(
    model: AsymptoticModel, boundary: PiecewiseBoundary, min_gap: float | None = None
) -> WeightGroups:
    """Group ``(L,-)`` slots by weight and hand each group its boundary levels."""
    slots = []
    for p in range(1, model.m + 1):
        for j, (slot, c) in enumerate(model.slot_weights(p), 1):
            if slot.kind == "L-":
                slots.append(((p, j), slot.x, c))
    if not slots:
        raise SpecError("model has no (L,-) slots")
    values: List[float] = []
    for _, x, _ in sorted(slots, key=lambda s: -s[1]):
        if not values or abs(values[-1] - x) > GROUP_TOL * max(1.0, x):
            values.append(x)
    psi: Dict[Tuple[int, int], int] = {}
    mass = [0.0] * len(values)
    for key, x, c in slots:
        i = min(range(len(values)), key=lambda k: abs(values[k] - x))
        psi[key] = i + 1
        mass[i] += c
    rho = sum(mass)
    theta = tuple(m / rho for m in mass)
    if values[0] <= 0:
        raise SpecError("the largest (L,-) weight must be positive")

    # levels from the top, block s first
    lengths = boundary.lengths[::-1]
    d = [1]
    acc, level = 0.0, 0
    for th in theta:
        target = acc + th
        while level < boundary.s and acc + lengths[level] <= target + LEVEL_TOL:
            acc += lengths[level]
            level += 1
        if abs(acc - target) > LEVEL_TOL or level + 1 == d[-1]:
            raise SpecError(f"group masses {theta} do not split the boundary blocks {boundary.lengths}")
        d.append(level + 1)
    if min_gap is not None and boundary.min_gap() < min_gap:
        logger.info("boundary levels are closer (%g) than the separation %g", boundary.min_gap(), min_gap)
    return WeightGroups(tuple(values), psi, theta, rho, tuple(d))


@dataclass(frozen=True)
class BandMeasure:
    i: int
    beta: Tuple[float, ...]
    gamma: Tuple[float, ...]

    @property
    def support(self) -> Tuple[float, float]:
        return min(self.beta), max(self.gamma)

    @property
    def mass(self) -> float:
        return float(sum(g - b for b, g in zip(self.beta, self.gamma)))

    def moment(self, k: int) -> float:
        return float(sum((g ** (k + 1) - b ** (k + 1)) / (k + 1) for b, g in zip(self.beta, self.gamma)))

    @property
    def numerator(self) -> np.ndarray:
        return P.polyfromroots(self.beta)

    @property
    def denominator(self) -> np.ndarray:
        return P.polyfromroots(self.gamma)

    def __call__(self, t):
        t = np.asarray(t)
        if np.any(np.isin(t, self.gamma)):
            raise SingularPointError(f"Φ has a pole at t={t}")
        out = np.ones_like(t, dtype=np.result_type(t, float))
        for b, g in zip(self.beta, self.gamma):
            out = out * (t - b) / (t - g)
        return out

    def log_derivative(self, t):
        t = np.asarray(t)
        return sum(1.0 / (t - b) - 1.0 / (t - g) for b, g in zip(self.beta, self.gamma))

    def derivative(self, t):
        return self(t) * self.log_derivative(t)

    def stieltjes(self, t: complex) -> complex:
        """``∫ m(dy)/(t - y)``."""
        return complex(sum(np.log((t - b) / (t - g)) for b, g in zip(self.beta, self.gamma)))


def band_measure(boundary: PiecewiseBoundary, groups: WeightGroups, i: int) -> BandMeasure:
    if not 1 <= i <= groups.I:
        raise ValueError(f"group {i} outside [1, {groups.I}]")
    s, th = boundary.s, groups.theta[i - 1]
    base = boundary.a[0]
    di = groups.d[i - 1]
    beta, gamma = [], []
    for k in range(groups.d[i] - di):
        j = s - di - k  # 0-based block index
        beta.append((boundary.a[j] - base) / th)
        gamma.append((boundary.b[j] - base) / th)
    return BandMeasure(i, tuple(beta), tuple(gamma))


def phi(band: BandMeasure, t: complex) -> complex:
    return complex(band(t))


def _phi_minus(band: BandMeasure, z: complex) -> np.ndarray:
    return P.polysub(band.numerator, z * band.denominator)


def solve_t(band: BandMeasure, z: complex, branch: int | None = None) -> complex:
    """Solve ``Φ(t) = z``.

    ``branch=None`` follows the root that runs to infinity as ``z → 1``.
    An integer selects the real interval between consecutive poles
    (``0`` is left of every pole) and is solved by bracketing.
    """
    if z == 1:
        raise SingularPointError("Φ(t) = 1 is reached only at t = ∞ on the principal branch")
    if branch is not None:
        return _solve_real(band, float(np.real(z)), branch)
    path = 1.0 + np.geomspace(1e-8, 1.0, TRACK_STEPS) * (z - 1.0)
    w0 = path[0]
    roots = polynomial_roots(_phi_minus(band, w0))
    current = roots[np.argsort(-np.abs(roots))]
    for w in path[1:]:
        current = match_roots(current, polynomial_roots(_phi_minus(band, w)))
    t = polish_roots(lambda x: band(x) - z, band.derivative, current[:1])[0]
    return complex(t)


def _solve_real(band: BandMeasure, z: float, branch: int) -> complex:
    poles = sorted(band.gamma)
    edges = [-np.inf] + poles + [np.inf]
    if not 0 <= branch < len(edges) - 1:
        raise BranchError(f"branch {branch} outside [0, {len(edges) - 2}]")
    lo, hi = edges[branch], edges[branch + 1]
    span = max(1.0, max(abs(p) for p in poles))
    lo = lo + 1e-12 * span if np.isfinite(lo) else -1e8 * span
    hi = hi - 1e-12 * span if np.isfinite(hi) else 1e8 * span
    grid = np.linspace(lo, hi, 4097)
    grid = grid[~np.isin(grid, band.gamma)]
    values = np.real(band(grid)) - z
    sign = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    if not sign.size:
        raise BranchError(f"Φ(t) = {z} has no root on branch {branch}")
    k = int(sign[0])
    return complex(brentq(lambda x: float(band(x)) - z, grid[k], grid[k + 1], xtol=1e-14, maxiter=BISECT_MAXITER))


# -----------------------------------------------------------------------------
# Group functions
# -----------------------------------------------------------------------------


def _group_fractions(model: AsymptoticModel, groups: WeightGroups, p: int) -> Tuple[np.ndarray, np.ndarray]:
    """Per group: (L,-) column fraction in segments > p, and in segment p."""
    after = np.zeros(groups.I)
    within = np.zeros(groups.I)
    for q in range(p, model.m + 1):
        for j, (slot, c) in enumerate(model.slot_weights(q), 1):
            if slot.kind == "L-":
                g = groups.psi[(q, j)] - 1
                if q == p:
                    within[g] += c
                else:
                    after[g] += c
    return after, within


def occupancy(model: AsymptoticModel, point: ObservationPoint, groups: WeightGroups, i: int) -> Tuple[float, float]:
    """``(γ_i, η_i)``: group ``i`` and later groups right of the observation column."""
    after, within = _group_fractions(model, groups, point.p)
    right = after + (1.0 - point.alpha) * within
    return float(right[i - 1]), float(right[i:].sum())


def _r_parts(model: AsymptoticModel, groups: WeightGroups, p: int) -> Tuple[PoleSum, PoleSum]:
    x0 = groups.top
    a_parts = [rplus_term(c, x0 * x) for x, c in model.weighted_slots("R+", range(1, p))]
    a_parts += [lplus_term(c, x0 * x) for x, c in model.weighted_slots("L+", range(1, p))]
    b_parts = [rplus_term(c, x0 * x) for x, c in model.weighted_slots("R+", [p])]
    b_parts += [lplus_term(c, x0 * x) for x, c in model.weighted_slots("L+", [p])]
    return collect_terms(a_parts), collect_terms(b_parts)


def _occupancy_sum(coef: float, const: float) -> PoleSum:
    """``coef · z/(z - 1) + const``."""
    return PoleSum.from_terms(coef + const, [(1.0, coef)])


def g_parts(model: AsymptoticModel, groups: WeightGroups, p: int, i: int) -> Tuple[PoleSum, PoleSum]:
    """``(G_A, G_B)`` with ``G = G_A + α G_B`` for observation points in segment ``p``."""
    after, within = _group_fractions(model, groups, p)
    rt = groups.rho * groups.theta[i - 1]
    later = groups.rho * groups.tail(i)
    GA = _occupancy_sum(after[i - 1] + within[i - 1] - rt, float(after[i:].sum() + within[i:].sum()) - later)
    GB = _occupancy_sum(-within[i - 1], -float(within[i:].sum()))
    if i == 1:
        RA, RB = _r_parts(model, groups, p)
        GA, GB = GA + RA, GB + RB
    return GA, GB


def g_function(
    model: AsymptoticModel,
    point: ObservationPoint,
    groups: WeightGroups,
    i: int,
    occ: Tuple[float, float] | None = None,
) -> PoleSum:
    """``G`` at the observation point; ``occ`` overrides the computed ``(γ_i, η_i)``."""
    if occ is None:
        GA, GB = g_parts(model, groups, point.p, i)
        return GA + GB.scaled(point.alpha)
    gamma_i, eta_i = occ
    rt = groups.rho * groups.theta[i - 1]
    G = _occupancy_sum(gamma_i - rt, eta_i - groups.rho * groups.tail(i))
    if i == 1:
        RA, RB = _r_parts(model, groups, point.p)
        G = G + RA + RB.scaled(point.alpha)
    return G


def f_piecewise(
    model: AsymptoticModel,
    point: ObservationPoint,
    groups: WeightGroups,
    boundary: PiecewiseBoundary,
    i: int,
    z: complex,
    occ: Tuple[float, float] | None = None,
) -> complex:
    """``F^(i)(z)`` on the principal branch of ``Φ_i^{-1}``."""
    band = band_measure(boundary, groups, i)
    G = g_function(model, point, groups, i, occ)
    t = solve_t(band, z)
    return complex(G(z)) + groups.rho * groups.theta[i - 1] * t


def kappa_of_t(G: PoleSum, band: BandMeasure, rho_theta: float, t):
    return G(band(t)) + rho_theta * np.asarray(t)


def _kt_numerator(G: PoleSum, band: BandMeasure, rho_theta: float, w: complex) -> np.ndarray:
    """Ascending coefficients in ``t`` of ``G(Φ(t)) + ρθ t - w`` with denominators cleared."""
    Pn, Qd = band.numerator, band.denominator
    factors = [P.polysub(Pn, g * Qd) for g in G.poles]
    total = P.polymul(np.array([G.const - w, rho_theta], dtype=complex), _product(factors))
    for k, r in enumerate(G.residues):
        total = P.polyadd(total, r * P.polymul(Qd, _product(factors[:k] + factors[k + 1 :])))
    return total


def _product(polys: Sequence[np.ndarray]) -> np.ndarray:
    out = np.array([1.0 + 0j])
    for poly in polys:
        out = P.polymul(out, poly)
    return out


# -----------------------------------------------------------------------------
# Moments and density
# -----------------------------------------------------------------------------


def _groups_right(model: AsymptoticModel, point: ObservationPoint, groups: WeightGroups) -> List[int]:
    return [i for i in range(1, groups.I + 1) if occupancy(model, point, groups, i)[0] > 0]


def _t_singularities(G: PoleSum, band: BandMeasure) -> np.ndarray:
    pts = list(band.beta) + list(band.gamma)
    for g in G.poles:
        pts.extend(polynomial_roots(_phi_minus(band, g)))
    return np.array(pts, dtype=complex)


def moments_piecewise(
    model: AsymptoticModel,
    point: ObservationPoint,
    groups: WeightGroups,
    boundary: PiecewiseBoundary,
    k: int,
    nodes: int = 256,
) -> float:
    """Moment of order ``k`` of the limiting counting measure.

    Each group contributes ``(1/(2(k+1)πi)) ∮ F^(i)(z)^{k+1} dz/z`` around
    ``z = 1``; in the band variable this is the residue at ``t = ∞`` of
    ``F^(i)(Φ(t))^{k+1} Φ'(t)/Φ(t)``, taken on a circle enclosing every
    finite singularity.
    """
    if k < 1:
        raise ValueError(f"moment order must be positive, got {k}")
    total = 0.0
    for i in _groups_right(model, point, groups):
        band = band_measure(boundary, groups, i)
        G = g_function(model, point, groups, i)
        rt = groups.rho * groups.theta[i - 1]
        radius = 2.0 * (1.0 + float(np.max(np.abs(_t_singularities(G, band)))))

        def circle(n: int) -> float:
            t = radius * np.exp(2j * np.pi * np.arange(n) / n)
            h = kappa_of_t(G, band, rt, t) ** (k + 1) * band.log_derivative(t)
            return float(-np.mean(h * t).real / (k + 1))

        value, refined = circle(nodes), circle(2 * nodes)
        if abs(value - refined) > 1e-9 * max(1.0, abs(refined)):
            logger.warning("group %d moment %d: quadrature moved by %g on doubling", i, k, abs(value - refined))
        total += refined
    return total


def _principal_t(G: PoleSum, band: BandMeasure, rho_theta: float, w: complex) -> complex:
    scale = 1.0 + abs(G.const) + float(np.sum(np.abs(G.residues))) + max(abs(v) for v in band.gamma)
    top = 1e4 * scale * (1.0 + abs(w.real))
    roots = polynomial_roots(_kt_numerator(G, band, rho_theta, w.real + 1j * top))
    current = roots[np.argsort(-np.abs(roots))]
    for y in np.geomspace(top, w.imag, TRACK_STEPS)[1:]:
        current = match_roots(current, polynomial_roots(_kt_numerator(G, band, rho_theta, w.real + 1j * y)))
    return complex(current[0])


def density_piecewise(
    model: AsymptoticModel,
    point: ObservationPoint,
    groups: WeightGroups,
    boundary: PiecewiseBoundary,
    kappa: float,
    delta: float | None = None,
) -> float:
    """``-(1/π) Σ_i Arg z_i(κ + iδ)`` over the groups right of the column, extrapolated in δ."""
    if delta is None:
        delta = 1e-6 * (1.0 + abs(kappa))
    values = np.zeros(3)
    for i in _groups_right(model, point, groups):
        band = band_measure(boundary, groups, i)
        G = g_function(model, point, groups, i)
        rt = groups.rho * groups.theta[i - 1]
        t = _principal_t(G, band, rt, kappa + 1j * delta)
        for n, d in enumerate((delta, delta / 2, delta / 4)):
            w = kappa + 1j * d
            t = polish_roots(
                lambda x, w=w: kappa_of_t(G, band, rt, x) - w,
                lambda x: G.derivative(band(x)) * band.derivative(x) + rt,
                np.array([t]),
            )[0]
            values[n] += -np.angle(complex(band(t))) / np.pi
    value = 2.0 * values[2] - values[1]
    return float(min(1.0, max(0.0, value)))


def root_census(
    model: AsymptoticModel,
    point: ObservationPoint,
    groups: WeightGroups,
    boundary: PiecewiseBoundary,
    i: int,
    kappa: float,
) -> int:
    """Nonreal conjugate pairs among the roots of ``z = Φ_i((κ - G(z))/(ρθ_i))``.

    Denominators are cleared and the spurious root ``z = 1`` divided out.
    """
    band = band_measure(boundary, groups, i)
    G = g_function(model, point, groups, i)
    rt = groups.rho * groups.theta[i - 1]
    D = P.polyfromroots(G.poles) if G.poles.size else np.array([1.0])
    Nt = -G.numerator(kappa) / rt
    deg = len(band.beta)
    pn, qd = band.numerator, band.denominator
    lhs = np.zeros(1)
    rhs = np.zeros(1)
    for k in range(deg + 1):
        term = P.polymul(P.polypow(Nt, k), P.polypow(D, deg - k))
        lhs = P.polyadd(lhs, qd[k] * term)
        rhs = P.polyadd(rhs, pn[k] * term)
    poly = P.polysub(P.polymul([0.0, 1.0], lhs), rhs)
    if abs(P.polyval(1.0, poly)) <= 1e-9 * np.max(np.abs(poly)):
        poly, rem = P.polydiv(poly, [-1.0, 1.0])
        if np.max(np.abs(rem)) > 1e-6 * np.max(np.abs(poly)):
            raise RootFindingError(f"deflation at z = 1 left remainder {rem}")
    pairs = nonreal_pairs(polynomial_roots(poly), tol=1e-7)
    if pairs > 1:
        logger.warning("group %d at κ=%g: %d nonreal pairs", i, kappa, pairs)
    return pairs


# -----------------------------------------------------------------------------
# Frozen boundary components
# -----------------------------------------------------------------------------


def j_parts(model: AsymptoticModel, groups: WeightGroups, i: int) -> PoleSum:
    """``J_i`` as a function of ``z = Φ_i(t)`` for single-segment models."""
    if model.m != 1:
        raise SpecError(f"closed component forms need a single segment, model has {model.m}")
    rt = groups.rho * groups.theta[i - 1]
    J = _occupancy_sum(-rt, -groups.rho * groups.tail(i))
    if i == 1:
        _, RB = _r_parts(model, groups, 1)
        J = J + RB
    return J


def j_function(model: AsymptoticModel, groups: WeightGroups, band: BandMeasure, i: int, t) -> Tuple:
    """``(J_i(t), J_i'(t))``."""
    J = j_parts(model, groups, i)
    z = band(t)
    return J(z), J.derivative(z) * band.derivative(t)


def component_singularities(G_parts: Sequence[PoleSum], band: BandMeasure) -> np.ndarray:
    pts = set(band.beta) | set(band.gamma)
    for G in G_parts:
        for g in G.poles:
            for r in polynomial_roots(_phi_minus(band, g)):
                if abs(r.imag) < 1e-10 * (1 + abs(r)):
                    pts.add(float(r.real))
    return np.array(sorted(pts))


def _usable(t: np.ndarray, G_parts: Sequence[PoleSum], band: BandMeasure) -> np.ndarray:
    t = t[~np.isin(t, band.gamma)]
    z = band(t)
    keep = np.ones(t.shape, dtype=bool)
    for G in G_parts:
        for g in G.poles:
            keep &= np.abs(z - g) > 1e-12
    return t[keep]


def trace_component_closed(
    model: AsymptoticModel,
    groups: WeightGroups,
    boundary: PiecewiseBoundary,
    i: int,
    t_grid: Sequence[float] | None = None,
) -> ParametricCurve:
    """``χ = -ρθ_i/J_i'(t)``, ``κ = ρθ_i t - ρθ_i J_i(t)/J_i'(t)``."""
    band = band_measure(boundary, groups, i)
    J = j_parts(model, groups, i)
    sing = component_singularities([J], band)
    t = _usable(np.asarray(refined_grid(sing) if t_grid is None else t_grid, dtype=float), [J], band)
    rt = groups.rho * groups.theta[i - 1]
    Jt, dJ = j_function(model, groups, band, i, t)
    ok = dJ != 0
    t, Jt, dJ = t[ok], Jt[ok], dJ[ok]
    chi = -rt / dJ
    kappa = rt * t - rt * Jt / dJ
    keep = (chi >= -1e-9) & (chi <= 1.0 + 1e-9)
    samples = [CurveSample(float(a), float(b), float(c), i) for a, b, c in zip(t[keep], chi[keep], kappa[keep])]
    return ParametricCurve(samples, tuple(sing))


def trace_component(
    model: AsymptoticModel,
    groups: WeightGroups,
    boundary: PiecewiseBoundary,
    i: int,
    t_grid: Sequence[float] | None = None,
) -> ParametricCurve:
    """Component ``C_i`` from the double-root system in ``t``, all segments."""
    band = band_measure(boundary, groups, i)
    rt = groups.rho * groups.theta[i - 1]
    samples: List[CurveSample] = []
    singular: set = set()
    for p in range(1, model.m + 1):
        GA, GB = g_parts(model, groups, p, i)
        sing = component_singularities([GA, GB], band)
        singular.update(sing.tolist())
        grid = refined_grid(sing) if t_grid is None else np.asarray(t_grid, dtype=float)
        t = _usable(grid, [GA, GB], band)
        z, dz = band(t), band.derivative(t)
        dA = GA.derivative(z) * dz + rt
        dB = GB.derivative(z) * dz
        ok = dB != 0
        t, z, dA, dB = t[ok], z[ok], dA[ok], dB[ok]
        alpha = -dA / dB
        keep = (alpha >= -1e-9) & (alpha <= 1.0 + 1e-9)
        t, z, alpha = t[keep], z[keep], np.clip(alpha[keep], 0.0, 1.0)
        kappa = GA(z) + rt * t + alpha * GB(z)
        lo, hi = model.V[p - 1], model.V[p]
        chi = lo + alpha * (hi - lo)
        samples.extend(
            CurveSample(float(a), float(b), float(c), i, p) for a, b, c in zip(t, chi, kappa)
        )
    if not samples:
        raise BranchError(f"component {i} has no admissible samples")
    box = (min(s.kappa for s in samples), max(s.kappa for s in samples))
    logger.info("component %d: %d samples, κ in [%.6g, %.6g]", i, len(samples), *box)
    return ParametricCurve(samples, tuple(sorted(singular)))


def component_rank(model: AsymptoticModel, groups: WeightGroups, boundary: PiecewiseBoundary, i: int) -> Tuple[int, int]:
    """Predicted class of ``C_i`` and the number of distinct singular parameters.

    A parameter is singular when ``Φ_i(t)`` hits a pole of ``J_i``; the pole
    ``z = 1`` is also hit at ``t = ∞``.
    """
    band = band_measure(boundary, groups, i)
    J = j_parts(model, groups, i)
    xi = sorted({float(np.real(g)) for g in J.poles})
    levels = len(groups.levels(i))
    predicted = levels * len(xi) if i == 1 else levels
    found: List[complex] = []
    for g in xi:
        for r in polynomial_roots(_phi_minus(band, g)):
            if all(abs(r - f) > 1e-8 * (1 + abs(r)) for f in found):
                found.append(r)
    counted = len(found) + (1 if any(abs(g - 1.0) < 1e-12 for g in xi) else 0)
    return predicted, counted


def min_component_distance(curves: Sequence[ParametricCurve]) -> float:
    """Smallest distance between samples of different components."""
    best = np.inf
    pts = [np.column_stack(c.arrays()[1:3]) for c in curves]
    for k in range(len(pts)):
        for l in range(k + 1, len(pts)):
            if pts[k].size and pts[l].size:
                diff = pts[k][:, None, :] - pts[l][None, :, :]
                best = min(best, float(np.sqrt((diff**2).sum(axis=2)).min()))
    return float(best)
