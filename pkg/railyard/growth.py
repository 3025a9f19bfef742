"""
Exact batched sampling of pure coverings by operator swaps.

The ordered product ``Γ_l ... Γ_r`` is first rearranged so that every
``-`` operator stands left of every ``+`` operator; between empty
boundaries all partitions of that word are empty. The original word is
then rebuilt by adjacent swaps ``Γ_-(y) Γ_+(x) -> Γ_+(x) Γ_-(y)``. The
swap changes the measure only through the partition ``ν`` between the two
operators, whose law given its neighbours ``λ`` (left) and ``ρ`` (right)
is proportional to ``(xy)^{|ν|}`` on the set allowed by the two
interlacing rules. That set is a product of per-row intervals, so every
row is drawn independently:

    L, L    ν_i ∈ [max(λ_i, ρ_i), min(λ_{i-1}, ρ_{i-1})], truncated geometric
    R, R    the same on conjugates
    L+, R-  ν_i ∈ [λ_i, λ_{i-1}] ∩ [ρ_i, ρ_i + 1]
    R+, L-  ν_i ∈ [λ_i, λ_i + 1] ∩ [ρ_i, ρ_{i-1}]

Samples are stored as zero padded integer arrays of shape ``(S, W)`` and
all rows of a batch move together.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Sequence, Tuple

import numpy as np

from .errors import SpecError
from .graph import RailYardSpec
from .model import ObservationPoint, Realization, empirical_moments
from .parallel import chunked, pool_starmap
from .partitions import Partition, make_partition
from .schur_process import batch_rng

logger = logging.getLogger(__name__)

BATCH_SIZE = 256


def _pad(arr: np.ndarray, width: int) -> np.ndarray:
    if arr.shape[1] >= width:
        return arr
    out = np.zeros((arr.shape[0], width), dtype=arr.dtype)
    out[:, : arr.shape[1]] = arr
    return out


def _trim(arr: np.ndarray) -> np.ndarray:
    nonzero = np.flatnonzero(arr.any(axis=0))
    width = int(nonzero[-1]) + 1 if nonzero.size else 1
    return arr[:, :width]


def _shift_down(arr: np.ndarray) -> np.ndarray:
    """``λ_{i-1}`` per row with ``λ_0 = ∞``."""
    big = np.iinfo(arr.dtype).max // 4
    return np.concatenate([np.full((arr.shape[0], 1), big, dtype=arr.dtype), arr[:, :-1]], axis=1)


def conjugate_rows(arr: np.ndarray) -> np.ndarray:
    width = int(arr.max()) if arr.size else 0
    if width == 0:
        return np.zeros((arr.shape[0], 1), dtype=arr.dtype)
    j = np.arange(width)
    return (arr[:, :, None] > j[None, None, :]).sum(axis=1).astype(arr.dtype)


def truncated_geometric(lo: np.ndarray, hi: np.ndarray, q: float, rng: np.random.Generator) -> np.ndarray:
    """Draw ``k ∈ [lo, hi]`` with ``P(k) ∝ q^k`` elementwise."""
    if q <= 0.0:
        return lo.copy()
    span = (hi - lo).astype(float)
    u = rng.random(lo.shape)
    tail = q ** (span + 1.0)
    k = np.floor(np.log1p(-u * (1.0 - tail)) / np.log(q))
    k = np.minimum(k, span)
    return lo + k.astype(lo.dtype)


def _horizontal_pair(lam: np.ndarray, rho: np.ndarray, q: float, rng: np.random.Generator) -> np.ndarray:
    width = max(lam.shape[1], rho.shape[1]) + 1
    lam, rho = _pad(lam, width), _pad(rho, width)
    lo = np.maximum(lam, rho)
    if q <= 0.0:
        return _trim(lo)
    hi = np.minimum(_shift_down(lam), _shift_down(rho))
    nu = np.empty_like(lo)
    nu[:, 1:] = truncated_geometric(lo[:, 1:], hi[:, 1:], q, rng)
    # first row is bounded below only
    nu[:, 0] = _unbounded(lo[:, 0], q, rng)
    return _trim(nu)


def _unbounded(lo: np.ndarray, q: float, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(lo.shape)
    return lo + np.floor(np.log1p(-u) / np.log(q)).astype(lo.dtype)


def _mixed_pair(lam: np.ndarray, rho: np.ndarray, q: float, rng: np.random.Generator, plus_letter: str) -> np.ndarray:
    width = max(lam.shape[1], rho.shape[1]) + 1
    lam, rho = _pad(lam, width), _pad(rho, width)
    lo = np.maximum(lam, rho)
    if plus_letter == "L":
        hi = np.minimum(_shift_down(lam), rho + 1)
    else:
        hi = np.minimum(lam + 1, _shift_down(rho))
    if np.any(hi < lo):
        raise SpecError("empty conditional range in swap step")
    bump = (hi > lo) & (rng.random(lo.shape) < q / (1.0 + q))
    return _trim(lo + bump.astype(lo.dtype))


def resample_middle(
    plus_letter: str, minus_letter: str, q: float, lam: np.ndarray, rho: np.ndarray, rng: np.random.Generator
) -> np.ndarray:
    """Draw ``ν`` between ``Γ_{plus_letter,+}`` and ``Γ_{minus_letter,-}``."""
    if plus_letter == minus_letter == "L":
        return _horizontal_pair(lam, rho, q, rng)
    if plus_letter == minus_letter == "R":
        nu_conj = _horizontal_pair(conjugate_rows(lam), conjugate_rows(rho), q, rng)
        return _trim(conjugate_rows(nu_conj))
    return _mixed_pair(lam, rho, q, rng, plus_letter)


def growth_batch(spec: RailYardSpec, seed: int, batch: int, count: int, keep: Tuple[int, ...]) -> Dict[int, np.ndarray]:
    rng = batch_rng(seed, batch)
    n = spec.n_columns
    signs = spec.b
    order = [i for i in range(n) if signs[i] == "-"] + [i for i in range(n) if signs[i] == "+"]
    parts = [np.zeros((count, 1), dtype=np.int64) for _ in range(n + 1)]
    position = {op: k for k, op in enumerate(order)}
    for p in (i for i in range(n) if signs[i] == "+"):
        pos = position[p]
        while pos > 0 and signs[order[pos - 1]] == "-" and order[pos - 1] > p:
            mi = order[pos - 1]
            q = spec.x[p] * spec.x[mi]
            parts[pos] = resample_middle(spec.a[p], spec.a[mi], q, parts[pos - 1], parts[pos + 1], rng)
            order[pos - 1], order[pos] = p, mi
            position[p], position[mi] = pos - 1, pos
            pos -= 1
    return {m: parts[m - spec.l] for m in keep}


@dataclass
class GrowthSample:
    """Column partitions ``λ^(m)`` of ``S`` independent pure coverings."""

    spec: RailYardSpec
    columns: Dict[int, np.ndarray]

    @property
    def count(self) -> int:
        return next(iter(self.columns.values())).shape[0]

    def rows(self, m: int) -> np.ndarray:
        return self.columns[m]

    def partition(self, s: int, m: int) -> Partition:
        return make_partition(int(v) for v in self.columns[m][s])


def sample_growth(
    spec: RailYardSpec,
    count: int,
    seed: int = 0,
    keep: Sequence[int] | None = None,
    batch_size: int = BATCH_SIZE,
    threads: int = 1,
) -> GrowthSample:
    """Draw ``count`` pure coverings; only columns in ``keep`` are returned.

    Batch ``b`` uses the generator of ``(seed, b)``, so the output does not
    depend on ``threads``.
    """
    keep = tuple(range(spec.l, spec.r + 2)) if keep is None else tuple(keep)
    for m in keep:
        if not spec.l <= m <= spec.r + 1:
            raise SpecError(f"column {m} outside [{spec.l}, {spec.r + 1}]")
    jobs = [(spec, seed, b, n, keep) for b, n in enumerate(chunked(count, batch_size))]
    logger.info("growth sampler: %d draws in %d batches on %d columns", count, len(jobs), spec.n_columns)
    results = pool_starmap(growth_batch, jobs, threads)
    columns = {}
    for m in keep:
        width = max(r[m].shape[1] for r in results)
        columns[m] = np.concatenate([_pad(r[m], width) for r in results], axis=0)
    return GrowthSample(spec=spec, columns=columns)


def column_moments(
    realization: Realization,
    point: ObservationPoint,
    ks: Sequence[int],
    count: int,
    seed: int = 0,
    threads: int = 1,
) -> Tuple[np.ndarray, np.ndarray]:
    """Monte-Carlo counting-measure moments at ``point``: (mean, standard error)."""
    t = realization.column(point)
    sample = sample_growth(realization.spec, count, seed, keep=(t + 1,), threads=threads)
    n = realization.lminus_after(t)
    values = empirical_moments(sample.rows(t + 1), n, realization.N, ks)
    mean = values.mean(axis=0)
    se = values.std(axis=0, ddof=1) / np.sqrt(values.shape[0])
    return mean, se
