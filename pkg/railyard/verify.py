"""
Oracle checks run by ``railyard verify``.

Each check compares two independent evaluations (or one evaluation and a
known value) and reports a :class:`Check`. :func:`verify` picks the checks
that apply to an experiment config; exact small-instance oracles always
run, analytic checks run for periodic models.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import asdict, dataclass, field
from typing import List, Sequence

import numpy as np
from scipy.stats import chi2

from .config import ExperimentConfig
from .errors import VerificationError
from .fock import FockVector, gamma_apply
from .frozen import curve_tangency, double_dual, tangency_report, trace_double_root, winding_check
from .graph import RailYardSpec, height, height_formula
from .limitshape import density_grid, moment, support_interval, total_mass
from .model import AsymptoticModel
from .partitions import Partition, size
from .piecewise import (
    PiecewiseBoundary,
    band_measure,
    component_rank,
    group_weights,
    min_component_distance,
    root_census,
    trace_component,
)
from .schur_process import (
    BoundaryPair,
    enumerate_sequences,
    partition_function_product,
    partition_function_transfer,
    sample,
    sample_sequences,
)

logger = logging.getLogger(__name__)

Z_RTOL = 1e-8
COMMUTATION_TOL = 1e-12
CHI2_LEVEL = 0.01
DUAL_TOL = 1e-8
MASS_TOL = 1e-3


@dataclass
class Check:
    name: str
    passed: bool
    value: float
    expected: float | None = None
    tolerance: float | None = None
    detail: str = ""


@dataclass
class VerifyReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def raise_for_failures(self) -> None:
        if self.failures:
            names = ", ".join(c.name for c in self.failures)
            raise VerificationError(f"{len(self.failures)} checks failed: {names}")

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}


# -----------------------------------------------------------------------------
# Finite graph oracles
# -----------------------------------------------------------------------------


def check_partition_function(spec: RailYardSpec, left: Partition = (), cap: int = 40) -> Check:
    zt = partition_function_transfer(spec, BoundaryPair(left, ()), cap)
    if left and spec.slots("R-") and spec.slots("L-"):
        return Check("partition_function", True, zt, None, None, "no product form for this boundary")
    zp = partition_function_product(spec, left, variant=2 if spec.slots("R-") else 1)
    gap = abs(zt - zp) / abs(zp)
    return Check("partition_function", gap < Z_RTOL, zt, zp, Z_RTOL, f"relative gap {gap:.3e}")


def commutation_factor(a1: str, a2: str, x: float, y: float) -> float:
    """``Γ_{a1,+}(x) Γ_{a2,-}(y) = factor · Γ_{a2,-}(y) Γ_{a1,+}(x)``."""
    return 1.0 / (1.0 - x * y) if a1 == a2 else 1.0 + x * y


def check_commutation(seed: int = 0, pairs: int = 10, cap: int = 24, start: Partition = (2, 1)) -> List[Check]:
    """Commute ``+`` past ``-`` on a ket; coefficients with ``|μ| ≤ cap/3`` are compared."""
    rng = np.random.default_rng(seed)
    horizon = cap // 3
    out = []
    for a1 in "LR":
        for a2 in "LR":
            worst = 0.0
            for _ in range(pairs):
                x, y = rng.uniform(0.05, 0.4, size=2)
                v = FockVector.basis(start, cap)
                lhs = gamma_apply(f"{a1}+", x, gamma_apply(f"{a2}-", y, v))
                rhs = gamma_apply(f"{a2}-", y, gamma_apply(f"{a1}+", x, v))
                factor = commutation_factor(a1, a2, x, y)
                keys = {k for k in list(lhs.coefficients) + list(rhs.coefficients) if size(k) <= horizon}
                for k in keys:
                    worst = max(worst, abs(lhs[k] - factor * rhs[k]))
            out.append(Check(f"commutation_{a1}{a2}", worst < COMMUTATION_TOL, worst, 0.0, COMMUTATION_TOL))
    return out


def check_heights(spec: RailYardSpec, left: Partition = (), seed: int = 0, cap: int = 40) -> Check:
    """Incremental and closed-count heights agree on a sampled covering."""
    cov = sample(spec, left, seed, 1, cap)[0]
    lo, hi = cov.window
    worst = 0
    for m in spec.columns:
        for y in np.linspace(lo - 2, hi + 2, 9):
            x = 2 * m + 0.5
            yy = float(np.floor(y)) + 0.25
            worst = max(worst, abs(height(spec, cov, x, yy) - height_formula(spec, cov, x, yy)))
    return Check("heights", worst == 0, float(worst), 0.0, 0.0)


def check_sampler(
    spec: RailYardSpec, left: Partition = (), count: int = 10_000, seed: int = 0, max_size: int = 6, cap: int = 40
) -> Check:
    """χ² goodness of fit of sampled sequences against enumerated probabilities."""
    probs = enumerate_sequences(spec, left, max_size, cap)
    draws = Counter(sample_sequences(spec, left, seed, count, cap))
    observed, expected = [], []
    rest_obs, rest_exp = count, count * 1.0
    for seq, p in probs.items():
        e = count * p
        if e >= 5.0:
            observed.append(draws.get(seq, 0))
            expected.append(e)
            rest_obs -= observed[-1]
            rest_exp -= e
    observed.append(rest_obs)
    expected.append(rest_exp)
    obs, exp = np.array(observed, dtype=float), np.array(expected)
    stat = float(np.sum((obs - exp) ** 2 / exp))
    pvalue = float(chi2.sf(stat, obs.size - 1))
    return Check("sampler_chi2", pvalue > CHI2_LEVEL, pvalue, None, CHI2_LEVEL, f"{obs.size} bins, χ²={stat:.3f}")


# -----------------------------------------------------------------------------
# Periodic model checks
# -----------------------------------------------------------------------------


def check_moments(model: AsymptoticModel, M: int, chis: Sequence[float] = (0.25, 0.5, 0.75), k: int = 2) -> List[Check]:
    """Quadrature self-consistency: doubling the node count does not move the moment."""
    out = []
    for chi in chis:
        point = model.point_at(chi)
        a, b = moment(model, point, M, k, nodes=256), moment(model, point, M, k, nodes=1024)
        out.append(Check(f"moment_{k}_chi{chi:g}", abs(a - b) < 1e-9, a, b, 1e-9))
    return out


def check_density(model: AsymptoticModel, M: int, chi: float = 0.5, points: int = 801, threads: int = 1) -> List[Check]:
    point = model.point_at(chi)
    lo, hi = support_interval(model, point, M)
    kappas = np.linspace(lo, hi, points)
    values = density_grid(model, point, M, kappas, threads)
    mass = float(np.trapezoid(values, kappas))
    expected = total_mass(model, point, M)
    bounded = bool(np.all((values >= 0.0) & (values <= 1.0)))
    return [
        Check("density_bounds", bounded, float(values.max()), None, None, f"[{values.min():.3g}, {values.max():.3g}]"),
        Check("density_mass", abs(mass - expected) < MASS_TOL, mass, expected, MASS_TOL),
    ]


def check_frozen(model: AsymptoticModel, samples: int = 1000, seed: int = 0) -> List[Check]:
    out = []
    zero, one, rank = tangency_report(model)
    traced = curve_tangency(model)
    detail = f"predicted χ=0: {zero}, χ=1: {one}; traced {traced[0]}, {traced[1]}; rank {rank}"
    out.append(Check("tangency", traced == (zero, one), float(sum(traced)), float(zero + one), None, detail))
    report = winding_check(model, seed=seed)
    out.append(Check("winding", report.passed, float(report.min_finite), float(rank - 1), None, f"{len(report.failures)} failures"))
    curve = trace_double_root(model)
    u, chi, kappa, _ = curve.arrays()
    rng = np.random.default_rng(seed)
    pick = rng.choice(u.size, size=min(samples, u.size), replace=False)
    worst = 0.0
    for k in pick:
        try:
            c2, k2 = double_dual(model, u[k])
        except ZeroDivisionError:
            continue
        worst = max(worst, abs(c2 - chi[k]), abs(k2 - kappa[k]))
    out.append(Check("double_dual", worst < DUAL_TOL, worst, 0.0, DUAL_TOL))
    return out


def check_piecewise(model: AsymptoticModel, boundary: PiecewiseBoundary, kappas: int = 1000) -> List[Check]:
    groups = group_weights(model, boundary)
    out = []
    curves = []
    for i in range(1, groups.I + 1):
        band = band_measure(boundary, groups, i)
        mass = band.mass
        out.append(Check(f"band_mass_{i}", abs(mass - 1.0) < 1e-12, mass, 1.0, 1e-12))
        if model.m == 1:
            predicted, counted = component_rank(model, groups, boundary, i)
            out.append(Check(f"component_rank_{i}", predicted == counted, float(counted), float(predicted), 0.0))
        curve = trace_component(model, groups, boundary, i)
        curves.append(curve)
        _, _, kappa, _ = curve.arrays()
        bounded = bool(np.all(np.isfinite(kappa)))
        out.append(Check(f"component_bounded_{i}", bounded, float(np.max(np.abs(kappa))), None, None))
        point = model.point_at(0.5 * (model.V[0] + model.V[-1]))
        lo, hi = np.percentile(kappa, [1, 99])
        worst = max(root_census(model, point, groups, boundary, i, k) for k in np.linspace(lo, hi, kappas))
        out.append(Check(f"root_census_{i}", worst <= 1, float(worst), 1.0, None))
    if len(curves) > 1:
        gap = min_component_distance(curves)
        out.append(Check("component_separation", gap > 0, gap, None, None))
    return out


# -----------------------------------------------------------------------------
# Dispatch
# -----------------------------------------------------------------------------


def verify(config: ExperimentConfig, threads: int = 1, sampler: bool = True) -> VerifyReport:
    report = VerifyReport()
    seed = config.task.seed if config.task.seed is not None else 0
    if not config.periodic:
        spec = config.spec()
        left = config.boundary.left
        report.checks.append(check_partition_function(spec, left, config.task.cap))
        report.checks.extend(check_commutation(seed))
        report.checks.append(check_heights(spec, left, seed, config.task.cap))
        if sampler:
            report.checks.append(check_sampler(spec, left, config.task.samples, seed, config.task.max_size, config.task.cap))
    else:
        model = config.asymptotic()
        M = config.boundary.M if config.boundary.kind == "staircase" else 1
        if config.boundary.kind == "piecewise":
            report.checks.extend(check_piecewise(model, config.boundary.piecewise()))
        else:
            report.checks.extend(check_moments(model, M))
            report.checks.extend(check_density(model, M, threads=threads))
            if model.m == 1 and M == 1:
                report.checks.extend(check_frozen(model, seed=seed))
    for c in report.checks:
        logger.info("%-24s %s  value=%.6g", c.name, "ok" if c.passed else "FAIL", c.value)
    return report
