"""
Command line front end.

    railyard z --config configs/four_column.json
    railyard frozen --config configs/single_segment.json --out out --png

Every command reads one experiment document, writes its artefacts to the
output directory together with a copy of the document, and prints a short
summary. Exit status is 2 for an invalid document, 1 for a failed
verification and 0 otherwise.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Callable, Dict, List

import numpy as np

from . import limitshape, output, piecewise
from .config import ExperimentConfig, load_config
from .errors import ConfigError, RailYardError, VerificationError
from .frozen import ParametricCurve, tangency_report, trace_double_root
from .growth import column_moments
from .model import ObservationPoint
from .parallel import grid_map, resolve_threads
from .partitions import Partition
from .schur_process import BoundaryPair, partition_function_product, partition_function_transfer, sample_sequences
from .symfunc import staircase_partition
from .verify import verify

logger = logging.getLogger("railyard")

COMMANDS = ("z", "sample", "moments", "density", "frozen", "frozen-piecewise", "verify")


def _left_boundary(config: ExperimentConfig) -> Partition:
    b = config.boundary
    if b.kind == "staircase" and b.M > 1:
        spec = config.spec()
        return staircase_partition(b.M, len(spec.slots("L-")))
    if b.kind == "piecewise" and b.rows is not None:
        return b.piecewise().partition(b.rows)
    return b.left


def _point(config: ExperimentConfig) -> ObservationPoint:
    model = config.asymptotic()
    chi = config.task.chi if config.task.chi is not None else 0.5 * (model.V[0] + model.V[-1])
    return model.point_at(chi)


def _staircase_M(config: ExperimentConfig) -> int:
    return config.boundary.M if config.boundary.kind == "staircase" else 1


# -----------------------------------------------------------------------------
# Commands
# -----------------------------------------------------------------------------


def cmd_z(config: ExperimentConfig, threads: int) -> int:
    spec = config.spec()
    left = _left_boundary(config)
    zt = partition_function_transfer(spec, BoundaryPair(left, ()), config.task.cap)
    zp = partition_function_product(spec, left, variant=2 if spec.slots("R-") and not spec.slots("L-") else 1)
    gap = abs(zt - zp) / abs(zp)
    print(f"Z_transfer = {zt:.12g}")
    print(f"Z_product  = {zp:.12g}")
    print(f"rel. gap   = {gap:.3e}")
    output.write_json(
        config.output.path("z", "json"), {"Z_transfer": zt, "Z_product": zp, "relative_gap": gap, "cap": config.task.cap}
    )
    return 0


def cmd_sample(config: ExperimentConfig, threads: int) -> int:
    seed = config.task.require_seed()
    if config.periodic:
        config.require_empty_boundary("the growth sampler")
        point = _point(config)
        realization = config.model.realize()
        mean, se = column_moments(realization, point, config.task.orders, config.task.samples, seed, threads)
        rows = [(k, m, s) for k, m, s in zip(config.task.orders, mean, se)]
        output.write_csv(config.output.path("column_moments", "csv"), ("k", "mean", "stderr"), rows)
        for k, m, s in rows:
            print(f"k={k}: {m:.6f} ± {s:.6f}")
        return 0
    spec = config.spec()
    left = _left_boundary(config)
    seqs = sample_sequences(spec, left, seed, config.task.samples, config.task.cap, threads)
    rows = []
    for n, seq in enumerate(seqs):
        for m, lam in zip(range(spec.l, spec.r + 2), seq):
            rows.append((n, m, " ".join(str(v) for v in lam)))
    output.write_csv(config.output.path("samples", "csv"), ("sample", "column", "partition"), rows)
    sizes = np.array([[sum(lam) for lam in seq] for seq in seqs], dtype=float)
    means = sizes.mean(axis=0)
    output.write_csv(
        config.output.path("column_sizes", "csv"), ("column", "mean_size"), zip(range(spec.l, spec.r + 2), means)
    )
    print(f"{len(seqs)} coverings, mean |λ| per column: {np.round(means, 4).tolist()}")
    return 0


def cmd_moments(config: ExperimentConfig, threads: int) -> int:
    model = config.asymptotic()
    point = _point(config)
    if config.boundary.kind == "piecewise":
        boundary = config.boundary.piecewise()
        groups = piecewise.group_weights(model, boundary)
        values = [piecewise.moments_piecewise(model, point, groups, boundary, k) for k in config.task.orders]
    else:
        M = _staircase_M(config)
        values = [limitshape.moment(model, point, M, k) for k in config.task.orders]
    output.write_csv(config.output.path("moments", "csv"), ("k", "value"), zip(config.task.orders, values))
    for k, v in zip(config.task.orders, values):
        print(f"k={k}: {v:.12g}")
    return 0


def cmd_density(config: ExperimentConfig, threads: int) -> int:
    model = config.asymptotic()
    point = _point(config)
    kappas = config.task.kappa_grid()
    if config.boundary.kind == "piecewise":
        boundary = config.boundary.piecewise()
        groups = piecewise.group_weights(model, boundary)
        values = np.array(grid_map(piecewise.density_piecewise, kappas, (model, point, groups, boundary), threads))
    else:
        values = limitshape.density_grid(model, point, _staircase_M(config), kappas, threads)
    output.write_csv(config.output.path("density", "csv"), ("kappa", "density"), zip(kappas, values))
    if config.output.png:
        output.write_density_png(config.output.path("density", "png"), kappas, values, config.name)
    mass = float(np.trapezoid(values, kappas))
    print(f"density on {kappas.size} points, integral {mass:.6f}")
    return 0


def _write_curve(config: ExperimentConfig, name: str, curve) -> None:
    output.write_csv(config.output.path(name, "csv"), output.CURVE_HEADER, output.curve_rows(curve))
    lines = output.polylines(curve)
    V = config.asymptotic().V
    chi_range = (V[0], V[-1])
    output.write_svg(config.output.path(name, "svg"), lines, config.name, chi_range)
    if config.output.png:
        output.write_png(config.output.path(name, "png"), lines, config.name, chi_range)


def cmd_frozen(config: ExperimentConfig, threads: int) -> int:
    model = config.asymptotic()
    M = _staircase_M(config)
    curve = trace_double_root(model, M=M)
    _write_curve(config, "frozen", curve)
    summary: Dict[str, object] = {"samples": len(curve), "branches": curve.branches(), "M": M}
    if model.m == 1 and M == 1:
        zero, one, rank = tangency_report(model)
        summary["tangency"] = {"chi0": zero, "chi1": one, "rank": rank}
        print(f"tangency: {zero} points on χ=0, {one} on χ=1, rank {rank}")
    output.write_json(config.output.path("frozen", "json"), summary)
    print(f"{len(curve)} samples on branches {curve.branches()}")
    return 0


def cmd_frozen_piecewise(config: ExperimentConfig, threads: int) -> int:
    model = config.asymptotic()
    boundary = config.boundary.piecewise()
    groups = piecewise.group_weights(model, boundary)
    curves = [piecewise.trace_component(model, groups, boundary, i) for i in range(1, groups.I + 1)]
    merged = curves[0]
    for c in curves[1:]:
        merged = ParametricCurve(merged.samples + c.samples, tuple(sorted(set(merged.singular) | set(c.singular))))
    _write_curve(config, "frozen_piecewise", merged)
    summary: Dict[str, object] = {
        "components": groups.I,
        "samples": len(merged),
        "d": list(groups.d),
        "min_level_gap": boundary.min_gap(),
    }
    if groups.I > 1:
        summary["min_distance"] = piecewise.min_component_distance(curves)
    if model.m == 1:
        summary["rank"] = [list(piecewise.component_rank(model, groups, boundary, i)) for i in range(1, groups.I + 1)]
    output.write_json(config.output.path("frozen_piecewise", "json"), summary)
    for key, value in summary.items():
        print(f"{key}: {value}")
    return 0


def cmd_verify(config: ExperimentConfig, threads: int) -> int:
    report = verify(config, threads)
    output.write_json(config.output.path("verify", "json"), report.to_dict())
    for c in report.checks:
        print(f"{'ok  ' if c.passed else 'FAIL'} {c.name:28s} {c.value:.6g} {c.detail}")
    report.raise_for_failures()
    print(f"all {len(report.checks)} checks passed")
    return 0


HANDLERS: Dict[str, Callable[[ExperimentConfig, int], int]] = {
    "z": cmd_z,
    "sample": cmd_sample,
    "moments": cmd_moments,
    "density": cmd_density,
    "frozen": cmd_frozen,
    "frozen-piecewise": cmd_frozen_piecewise,
    "verify": cmd_verify,
}


# -----------------------------------------------------------------------------
# Entry point
# -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="railyard", description="Dimer models on rail-yard graphs.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", required=True, help="experiment JSON document")
    parser.add_argument("--out", help="output directory (overrides the document)")
    parser.add_argument("--seed", type=int, help="sampling seed (overrides the document)")
    parser.add_argument("--cap", type=int, help="Fock space truncation |λ| <= cap")
    parser.add_argument("--threads", type=int, help="worker processes (default: $RAILYARD_THREADS or 1)")
    parser.add_argument("--png", action="store_true", default=None, help="also write matplotlib figures")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")
    return parser


def main(argv: List[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config).with_overrides(args.seed, args.cap, args.out, args.png)
        threads = resolve_threads(args.threads)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    output.write_json(config.output.path("config", "json"), config.to_dict())
    try:
        return HANDLERS[args.command](config, threads)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except RailYardError as exc:
        logger.error("%s failed: %s", args.command, exc)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
