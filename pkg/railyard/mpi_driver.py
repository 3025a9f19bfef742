"""
Monte-Carlo column moments distributed over MPI ranks.

    mpiexec -n 4 python -m railyard.mpi_driver configs/single_segment.json --samples 10000

Batches of the growth sampler are dealt round-robin to the ranks. Batch
``b`` always draws from the stream of ``(seed, b)``, so the pooled sample
is the same for every rank count. Per-rank sums of the moments and of
their squares are reduced to rank 0, which prints the estimates.
"""

from __future__ import annotations

import argparse
import logging
from typing import List, Sequence, Tuple

import numpy as np
from mpi4py import MPI

from .config import load_config
from .growth import BATCH_SIZE, growth_batch
from .model import ObservationPoint, Realization, empirical_moments
from .parallel import chunked

logger = logging.getLogger(__name__)


def distributed_moments(
    realization: Realization,
    point: ObservationPoint,
    ks: Sequence[int],
    count: int,
    seed: int = 0,
    comm: MPI.Comm | None = None,
    batch_size: int = BATCH_SIZE,
) -> Tuple[np.ndarray, np.ndarray] | None:
    """``(mean, standard error)`` on rank 0, ``None`` elsewhere."""
    comm = MPI.COMM_WORLD.Clone() if comm is None else comm
    rank, size = comm.Get_rank(), comm.Get_size()
    batches = list(chunked(count, batch_size))
    t = realization.column(point)
    n = realization.lminus_after(t)

    # rows: sum, sum of squares
    local = np.zeros((2, len(ks)))
    local_count = 0
    for b in range(rank, len(batches), size):
        rows = growth_batch(realization.spec, seed, b, batches[b], (t + 1,))[t + 1]
        values = empirical_moments(rows, n, realization.N, ks)
        local[0] += values.sum(axis=0)
        local[1] += (values**2).sum(axis=0)
        local_count += values.shape[0]
    logger.debug("rank %d drew %d samples", rank, local_count)

    total = np.zeros_like(local) if rank == 0 else None
    comm.Reduce(local, total, op=MPI.SUM, root=0)
    drawn = comm.reduce(local_count, op=MPI.SUM, root=0)
    if rank != 0:
        return None
    mean = total[0] / drawn
    var = (total[1] - drawn * mean**2) / max(drawn - 1, 1)
    return mean, np.sqrt(np.maximum(var, 0.0) / drawn)


def main(argv: List[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="railyard-mpi")
    parser.add_argument("config")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--seed", type=int)
    args = parser.parse_args(argv)

    comm = MPI.COMM_WORLD.Clone()
    rank = comm.Get_rank()
    config = load_config(args.config).with_overrides(seed=args.seed)
    config.require_empty_boundary("the growth sampler")
    model = config.asymptotic()
    chi = config.task.chi if config.task.chi is not None else 0.5 * (model.V[0] + model.V[-1])
    point = model.point_at(chi)
    count = args.samples or config.task.samples

    t0 = MPI.Wtime()
    result = distributed_moments(
        config.model.realize(), point, config.task.orders, count, config.task.require_seed(), comm
    )
    if rank == 0:
        print(f"{count} samples on {comm.Get_size()} ranks in {MPI.Wtime() - t0:.3f}s")
        mean, se = result
        for k, m, s in zip(config.task.orders, mean, se):
            print(f"k={k}: {m:.6f} ± {s:.6f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
