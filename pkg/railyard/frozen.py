"""
Frozen boundaries of staircase models.

On the frozen boundary ``F(z) = κ`` has a real double root ``u``. For an
observation point in segment ``p`` we have ``F = A + α B`` with ``A`` and
``B`` independent of ``α``, so at fixed real ``u`` the double-root system
is linear:

    α(u) = -A'(u) / B'(u),      κ(u) = A(u) + α(u) B(u),

and ``χ(u) = V_{p-1} + α(u)(V_p - V_{p-1})``. Every segment contributes one
branch, restricted to ``α ∈ [0, 1]``.

For one segment and ``M = 1`` the curve is ``κ = χ U + (1 - χ) V`` with

    V(u) = Σ_{(L,-)} c u/(u - x),
    U(u) = Σ_{(R,+)} c ux/(1 + ux) + Σ_{(L,+)} c ux/(1 - ux),

whose dual is ``((U - V)/V, -1/V)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq

from .errors import BranchError, RootFindingError, SingularPointError, SpecError
from .limitshape import collect_terms, f_parts, lminus_term, lplus_term, rplus_term
from .model import AsymptoticModel
from .rational import PoleSum

logger = logging.getLogger(__name__)

ALPHA_TOL = 1e-9
RESIDUAL_TOL = 1e-8
POINTS_PER_INTERVAL = 2000
COMPLEX_STEP = 1e-20
TANGENCY_TOL = 1e-4


@dataclass(frozen=True)
class CurveSample:
    u: float
    chi: float
    kappa: float
    branch: int
    segment: int = 1


@dataclass
class ParametricCurve:
    """Samples of a frozen boundary, ordered by branch and then ``u``.

    ``singular`` lists parameter values the grid stepped over; a polyline
    is broken wherever one of them lies between two samples.
    """

    samples: List[CurveSample]
    singular: Tuple[float, ...] = ()

    def __len__(self) -> int:
        return len(self.samples)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        u = np.array([s.u for s in self.samples])
        chi = np.array([s.chi for s in self.samples])
        kappa = np.array([s.kappa for s in self.samples])
        branch = np.array([s.branch for s in self.samples], dtype=int)
        return u, chi, kappa, branch

    def branches(self) -> List[int]:
        return sorted({s.branch for s in self.samples})

    def pieces(self) -> Iterator[Tuple[int, List[CurveSample]]]:
        """Continuous runs of samples as ``(branch, samples)``."""
        cuts = np.array(sorted(self.singular))
        run: List[CurveSample] = []
        for s in self.samples:
            if run:
                prev = run[-1]
                crosses = np.any((cuts > min(prev.u, s.u)) & (cuts < max(prev.u, s.u)))
                if s.branch != prev.branch or s.segment != prev.segment or crosses:
                    yield run[0].branch, run
                    run = []
            run.append(s)
        if run:
            yield run[0].branch, run


@dataclass(frozen=True)
class DualPoint:
    chi: float
    kappa: float


@dataclass
class WindingReport:
    lines: int
    rank: int
    min_finite: int
    failures: List[Tuple[float, float, int]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


# -----------------------------------------------------------------------------
# Grids
# -----------------------------------------------------------------------------


def refined_grid(
    singularities: Sequence[float], points_per_interval: int = POINTS_PER_INTERVAL, eps: float = 1e-6
) -> np.ndarray:
    """Real grid accumulating geometrically at every singularity.

    Each gap between consecutive singularities gets ``points_per_interval``
    points, half clustered at either end; the two unbounded tails reach
    ``1e4`` times the scale of the singular set.
    """
    sing = np.unique(np.asarray(singularities, dtype=float))
    half = max(points_per_interval // 2, 2)
    if sing.size == 0:
        return np.linspace(-10.0, 10.0, points_per_interval)
    scale = 1.0 + float(np.max(np.abs(sing)))
    parts = [sing[0] - np.geomspace(1e4 * scale, eps * scale, half)]
    for a, b in zip(sing[:-1], sing[1:]):
        width = (b - a) / 2
        steps = np.geomspace(eps * width, width, half)
        parts.append(a + steps)
        parts.append(b - steps[::-1])
    parts.append(sing[-1] + np.geomspace(eps * scale, 1e4 * scale, half))
    grid = np.unique(np.concatenate(parts))
    return grid[~np.isin(grid, sing)]


# -----------------------------------------------------------------------------
# Single segment, M = 1
# -----------------------------------------------------------------------------


def _require_single(model: AsymptoticModel) -> None:
    if model.m != 1:
        raise SpecError(f"closed U/V forms need a single segment, model has {model.m}")


def uv_parts(model: AsymptoticModel) -> Tuple[PoleSum, PoleSum]:
    """``(U, V)`` as pole sums."""
    _require_single(model)
    V = collect_terms(lminus_term(c, x) for x, c in model.weighted_slots("L-", [1]))
    U = collect_terms(
        [rplus_term(c, x) for x, c in model.weighted_slots("R+", [1])]
        + [lplus_term(c, x) for x, c in model.weighted_slots("L+", [1])]
    )
    return U, V


def uv_functions(model: AsymptoticModel, u: float) -> Tuple[float, float]:
    U, V = uv_parts(model)
    return float(np.real(U(u))), float(np.real(V(u)))


def _uv_singular(U: PoleSum, V: PoleSum) -> np.ndarray:
    return np.unique(np.concatenate([U.poles, V.poles]).real)


def trace_m1(model: AsymptoticModel, u_grid: Sequence[float]) -> ParametricCurve:
    """``χ = V'/(V' - U')`` and ``κ = χU + (1 - χ)V`` along ``u_grid``."""
    U, V = uv_parts(model)
    sing = _uv_singular(U, V)
    u = np.asarray(u_grid, dtype=float)
    u = u[~np.isin(u, sing)]
    if u.size == 0:
        raise BranchError("no usable parameter values in the grid")
    dU, dV = U.derivative(u).real, V.derivative(u).real
    denom = dV - dU
    ok = denom != 0
    u, dU, dV, denom = u[ok], dU[ok], dV[ok], denom[ok]
    if u.size == 0:
        raise BranchError("V' - U' vanishes on every grid point")
    chi = dV / denom
    kappa = chi * U(u).real + (1.0 - chi) * V(u).real
    samples = [CurveSample(float(a), float(b), float(c), 1) for a, b, c in zip(u, chi, kappa)]
    return ParametricCurve(samples, tuple(sing))


def dual(model: AsymptoticModel, u: float) -> DualPoint:
    """Tangent line ``χ χ^∨ + κ κ^∨ + 1 = 0`` at parameter ``u``."""
    U, V = uv_parts(model)
    if V.poles.size and np.min(np.abs(V.poles - u)) == 0:
        return DualPoint(-1.0, 0.0)
    v = float(np.real(V(u)))
    if v == 0:
        raise SingularPointError(f"V({u}) = 0 has no dual point")
    return DualPoint((float(np.real(U(u))) - v) / v, -1.0 / v)


def dual_curve(model: AsymptoticModel, u_grid: Sequence[float]) -> List[Tuple[float, DualPoint]]:
    out = []
    for u in u_grid:
        try:
            out.append((float(u), dual(model, u)))
        except SingularPointError:
            logger.debug("dual curve skips u=%g", u)
    return out


def double_dual(model: AsymptoticModel, u: float, h: float = COMPLEX_STEP) -> Tuple[float, float]:
    """Dual of the dual curve at ``u``, from complex-step derivatives.

    Solves ``χ X + κ Y = -1`` and ``χ X' + κ Y' = 0`` with
    ``(X, Y) = ((U - V)/V, -1/V)``.
    """
    U, V = uv_parts(model)

    def xy(z):
        v = V(z)
        return (U(z) - v) / v, -1.0 / v

    X, Y = (float(np.real(c)) for c in xy(u))
    Xs, Ys = xy(u + 1j * h)
    dX, dY = float(np.imag(Xs)) / h, float(np.imag(Ys)) / h
    det = X * dY - Y * dX
    if det == 0:
        raise SingularPointError(f"dual curve is stationary at u={u}")
    return -dY / det, dX / det


def tangency_report(model: AsymptoticModel) -> Tuple[int, int, int]:
    """Tangency counts to ``χ = 0`` and ``χ = 1`` and the class of the curve."""
    _require_single(model)
    zero = {-1.0 / x for x, _ in model.weighted_slots("R+", [1]) if x > 0}
    zero |= {1.0 / x for x, _ in model.weighted_slots("L+", [1]) if x > 0}
    one = {x for x, _ in model.weighted_slots("L-", [1]) if x > 0}
    return len(zero), len(one), len(zero | one)


def curve_tangency(model: AsymptoticModel, offset: float = 1e-6) -> Tuple[int, int]:
    """Touch points of the traced curve with ``χ = 0`` and ``χ = 1``.

    The curve is sampled on both sides of every singular parameter; a
    singularity counts for a side of the strip when ``χ`` tends to it
    from both directions.
    """
    U, V = uv_parts(model)
    zero = one = 0
    for p in _uv_singular(U, V):
        h = offset * max(1.0, abs(p))
        _, chi, _, _ = trace_m1(model, [p - h, p + h]).arrays()
        if chi.size == 2 and np.all(np.abs(chi) < TANGENCY_TOL):
            zero += 1
        elif chi.size == 2 and np.all(np.abs(chi - 1.0) < TANGENCY_TOL):
            one += 1
    return zero, one


def line_function(model: AsymptoticModel, d: float) -> PoleSum:
    """``(d + 1) V - U``; its level sets are the line intersections with the dual curve.

    Only ``d + 1 > 0`` is accepted: then every residue is positive and the
    function decreases between consecutive poles.
    """
    if not d + 1.0 > 0.0:
        raise ValueError(f"line family needs d + 1 > 0, got d = {d}")
    U, V = uv_parts(model)
    g = V.scaled(d + 1.0) + U.scaled(-1.0)
    if np.any(g.residues.real <= 0):
        raise RootFindingError(f"(d+1)V - U has a non-positive residue at d = {d}")
    return g


def line_intersections(model: AsymptoticModel, c: float, d: float) -> np.ndarray:
    """Real ``u`` with ``(d + 1) V(u) - U(u) = c``, one per monotone interval.

    Between consecutive poles the function runs from ``+∞`` to ``-∞``. Right
    of the last pole it falls to ``ξ_∞``, and left of the first pole it falls
    from ``ξ_∞``, so ``c = ξ_∞`` loses the root at infinity.
    """
    g = line_function(model, d)
    poles = np.sort(g.poles.real)
    xi = float(np.real(g.const))

    def h(u):
        return float(np.real(g(u))) - c

    roots = [_monotone_root(h, lo, hi) for lo, hi in zip(poles[:-1], poles[1:])]
    if poles.size:
        span = 1.0 + float(poles[-1] - poles[0])
        if c > xi:
            roots.append(_monotone_root(h, poles[-1], None, span))
        elif c < xi:
            roots.insert(0, _monotone_root(h, None, poles[0], span))
    return np.array([r for r in roots if r is not None])


def _monotone_root(h, lo: float | None, hi: float | None, span: float = 1.0, steps: int = 40) -> float | None:
    """Root of a decreasing ``h`` on ``(lo, hi)``; a ``None`` end is infinite."""
    width = hi - lo if lo is not None and hi is not None else span
    a = b = None
    for j in range(steps):
        x = lo + width * 2.0 ** -(j + 1) if lo is not None else hi - width * 2.0**j
        if x == lo:
            break
        if h(x) > 0:
            a = x
            break
    for j in range(steps):
        x = hi - width * 2.0 ** -(j + 1) if hi is not None else lo + width * 2.0**j
        if x == hi:
            break
        if h(x) < 0:
            b = x
            break
    if a is None or b is None:
        return None
    return float(brentq(h, a, b))


def winding_check(model: AsymptoticModel, line_samples: int = 200, seed: int = 0) -> WindingReport:
    """Intersections of random lines ``χ^∨ = c κ^∨ + d`` with the dual curve.

    Each random ``d`` (with ``d + 1 > 0``) is tested twice: at a random
    ``c``, where ``n'`` finite intersections are expected, and at
    ``c = ξ_∞``, where one of them escapes to infinity and ``n' - 1`` remain.
    """
    _, _, rank = tangency_report(model)
    rng = np.random.default_rng(seed)
    report = WindingReport(lines=2 * line_samples, rank=rank, min_finite=-1)
    for _ in range(line_samples):
        d = float(np.exp(rng.normal())) - 1.0
        xi = float(np.real(line_function(model, d).const))
        for c, expected in ((float(rng.normal()), rank), (xi, rank - 1)):
            count = line_intersections(model, c, d).size
            report.min_finite = count if report.min_finite < 0 else min(report.min_finite, count)
            if count != expected:
                report.failures.append((c, d, count))
    logger.info("winding check: %d lines, rank %d, min %d finite roots", report.lines, rank, report.min_finite)
    return report


# -----------------------------------------------------------------------------
# General double-root tracing
# -----------------------------------------------------------------------------


def segment_singularities(model: AsymptoticModel, M: int = 1) -> np.ndarray:
    """Real singular parameters of ``F`` over all observation segments."""
    out = set()
    for p in range(1, model.m + 1):
        A, B = f_parts(model, p, M)
        for pole in np.concatenate([A.poles, B.poles]):
            if abs(np.imag(pole)) < 1e-12:
                out.add(float(np.real(pole)))
    return np.array(sorted(out))


def trace_segment(model: AsymptoticModel, p: int, u_grid: Sequence[float], M: int = 1) -> ParametricCurve:
    A, B = f_parts(model, p, M)
    sing = np.unique(np.concatenate([A.poles, B.poles]).real) if (A.poles.size or B.poles.size) else np.zeros(0)
    u = np.asarray(u_grid, dtype=float)
    if sing.size:
        u = u[np.min(np.abs(u[:, None] - sing[None, :]), axis=1) > 0]
    dA, dB = A.derivative(u).real, B.derivative(u).real
    ok = dB != 0
    u, dA, dB = u[ok], dA[ok], dB[ok]
    alpha = -dA / dB
    keep = (alpha >= -ALPHA_TOL) & (alpha <= 1.0 + ALPHA_TOL)
    u, alpha = u[keep], np.clip(alpha[keep], 0.0, 1.0)
    Au, Bu = A(u).real, B(u).real
    kappa = Au + alpha * Bu
    # the clipped α must still give a double root
    resid = np.abs(dA[keep] + alpha * dB[keep])
    good = resid <= RESIDUAL_TOL * (1.0 + np.abs(dA[keep]) + np.abs(dB[keep]))
    lo, hi = model.V[p - 1], model.V[p]
    chi = lo + alpha * (hi - lo)
    samples = [
        CurveSample(float(a), float(b), float(c), p, p)
        for a, b, c in zip(u[good], chi[good], kappa[good])
    ]
    return ParametricCurve(samples, tuple(sing))


def trace_segments(model: AsymptoticModel, u_grid: Sequence[float] | None = None, M: int = 1) -> Dict[int, ParametricCurve]:
    """One branch per segment, tagged with the segment index."""
    if M < 1:
        raise ValueError(f"M must be a positive integer, got {M}")
    if M > 2:
        logger.warning("tracing for M=%d is not checked against a tangency classification", M)
    if u_grid is None:
        u_grid = refined_grid(segment_singularities(model, M))
    return {p: trace_segment(model, p, u_grid, M) for p in range(1, model.m + 1)}


def trace_double_root(model: AsymptoticModel, u_grid: Sequence[float] | None = None, M: int = 1) -> ParametricCurve:
    branches = trace_segments(model, u_grid, M)
    samples: List[CurveSample] = []
    singular: set = set()
    for p, curve in branches.items():
        samples.extend(curve.samples)
        singular.update(curve.singular)
    if not samples:
        raise BranchError("no parameter value gives an admissible α on the grid")
    logger.info("traced %d frozen-boundary samples on %d branches", len(samples), len(branches))
    return ParametricCurve(samples, tuple(sorted(singular)))
