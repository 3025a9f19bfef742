"""
Partition functions, exact sampling and the Schur generating function.

The dimer measure on ``RYG(l, r, a, b)`` with boundary partitions
``λ^(l)``, ``λ^(r+1)`` is the Schur process

    Pr(λ^(l), ..., λ^(r+1)) ∝ ∏_m ⟨λ^(m)| Γ_{a_m b_m}(x_m) |λ^(m+1)⟩,

so the partition function is one matrix element of the ordered operator
product. Transfer vectors are evaluated on the truncated Fock space of
:mod:`railyard.fock`; the product form comes from commuting every ``+``
operator to the right through the ``-`` operators.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Sequence, Tuple

import numpy as np

from .errors import SpecError, TruncationError
from .fock import FockVector, gamma_apply, gamma_apply_left, transitions
from .graph import DimerCovering, RailYardSpec
from .parallel import chunked, pool_starmap
from .partitions import EMPTY, Partition, conjugate, size
from .symfunc import schur

logger = logging.getLogger(__name__)

DEFAULT_CAP = 40
MAX_CAP = 320
CONSERVATION_TOL = 1e-12
BATCH_DRAWS = 1024


@dataclass(frozen=True)
class BoundaryPair:
    left: Partition = EMPTY
    right: Partition = EMPTY


# -----------------------------------------------------------------------------
# Transfer vectors
# -----------------------------------------------------------------------------


def right_vectors(spec: RailYardSpec, cap: int, right: Partition = EMPTY) -> Dict[int, FockVector]:
    """``R_m = Γ_m ... Γ_r |right⟩`` for ``m = l, ..., r+1``."""
    vectors = {spec.r + 1: FockVector.basis(right, cap)}
    v = vectors[spec.r + 1]
    for m in range(spec.r, spec.l - 1, -1):
        v = gamma_apply(spec.kind(m), spec.weight(m), v)
        vectors[m] = v
    return vectors


def left_vector(spec: RailYardSpec, cap: int, left: Partition, upto: int) -> FockVector:
    """``⟨left| Γ_l ... Γ_upto`` as a bra."""
    v = FockVector.basis(left, cap)
    for m in range(spec.l, upto + 1):
        v = gamma_apply_left(spec.kind(m), spec.weight(m), v)
    return v


def partition_function_transfer(
    spec: RailYardSpec,
    boundary: BoundaryPair = BoundaryPair(),
    cap: int | None = DEFAULT_CAP,
    rtol: float = 1e-10,
) -> float:
    """``⟨λ_left| Γ_l ... Γ_r |λ_right⟩`` on the Fock space truncated at ``cap``.

    With ``cap=None`` the cap starts at :data:`DEFAULT_CAP` and doubles
    until the value changes by less than ``rtol`` relatively.
    """
    if cap is not None:
        return _transfer(spec, boundary, cap)
    cap = DEFAULT_CAP
    value = _transfer(spec, boundary, cap)
    while cap < MAX_CAP:
        cap *= 2
        refined = _transfer(spec, boundary, cap)
        change = abs(refined - value) / max(abs(refined), np.finfo(float).tiny)
        logger.debug("transfer cap=%d value=%.17g change=%.3e", cap, refined, change)
        value = refined
        if change < rtol:
            return value
    logger.warning("partition function not converged at cap=%d", cap)
    return value


def _transfer(spec: RailYardSpec, boundary: BoundaryPair, cap: int) -> float:
    for name, lam in (("left", boundary.left), ("right", boundary.right)):
        if size(lam) > cap:
            raise TruncationError(f"{name} boundary {lam} exceeds cap={cap}")
    return right_vectors(spec, cap, boundary.right)[spec.l][boundary.left]


def pair_product(spec: RailYardSpec) -> float:
    """``∏ z_ij`` over pairs ``i < j`` with ``b_i = +``, ``b_j = -``."""
    value = 1.0
    for i, j in spec.interacting_pairs():
        value *= spec.pair_factor(i, j)
    return value


def partition_function_product(spec: RailYardSpec, left: Partition = EMPTY, variant: int = 1) -> float:
    """Closed product form with empty right boundary.

    Variant 1 needs no ``(R,-)`` columns and gives ``s_λ(x^{(L,-)}) ∏ z_ij``;
    variant 2 needs no ``(L,-)`` columns and gives ``s_{λ'}(x^{(R,-)}) ∏ z_ij``.
    """
    if variant not in (1, 2):
        raise ValueError(f"variant must be 1 or 2, got {variant}")
    if not left:
        return pair_product(spec)
    if variant == 1:
        if spec.slots("R-"):
            raise SpecError("product variant 1 requires no (R,-) columns")
        xs = [spec.weight(m) for m in spec.slots("L-")]
        lam = left
    else:
        if spec.slots("L-"):
            raise SpecError("product variant 2 requires no (L,-) columns")
        xs = [spec.weight(m) for m in spec.slots("R-")]
        lam = conjugate(left)
    if len(lam) > len(xs):
        raise SpecError(f"boundary {left} needs {len(lam)} variables, only {len(xs)} columns available")
    return schur(lam, xs) * pair_product(spec)


# -----------------------------------------------------------------------------
# Exact sampling
# -----------------------------------------------------------------------------


class TransferSampler:
    """Left-to-right sampler conditioned on right transfer vectors.

    The step distributions are cached per ``(column, partition)`` so that
    repeated draws only cost one uniform variate per column.
    """

    def __init__(self, spec: RailYardSpec, left: Partition = EMPTY, cap: int = DEFAULT_CAP):
        if size(left) > cap:
            raise TruncationError(f"left boundary {left} exceeds cap={cap}")
        self.spec = spec
        self.left = left
        self.cap = cap
        self.right = right_vectors(spec, cap)
        self.Z = self.right[spec.l][left]
        if self.Z <= 0:
            raise TruncationError(f"boundary {left} has zero weight at cap={cap}")
        self._steps: Dict[Tuple[int, Partition], Tuple[List[Partition], np.ndarray]] = {}

    def step(self, m: int, lam: Partition) -> Tuple[List[Partition], np.ndarray]:
        key = (m, lam)
        cached = self._steps.get(key)
        if cached is not None:
            return cached
        spec = self.spec
        nxt = self.right[m + 1]
        targets, weights = [], []
        for nu, exponent in transitions(spec.kind(m), lam, self.cap):
            w = spec.weight(m) ** exponent * nxt[nu]
            if w > 0:
                targets.append(nu)
                weights.append(w)
        weights = np.asarray(weights)
        total = self.right[m][lam]
        cumulative = np.cumsum(weights) / total
        if abs(cumulative[-1] - 1.0) > CONSERVATION_TOL * len(weights):
            logger.warning("conditional probabilities at column %d sum to %.17g", m, cumulative[-1])
        self._steps[key] = (targets, cumulative)
        return targets, cumulative

    def draw(self, rng: np.random.Generator) -> Tuple[Partition, ...]:
        seq = [self.left]
        for m in self.spec.columns:
            targets, cumulative = self.step(m, seq[-1])
            k = int(np.searchsorted(cumulative, rng.random() * cumulative[-1], side="right"))
            seq.append(targets[min(k, len(targets) - 1)])
        return tuple(seq)


def batch_rng(seed: int, batch: int) -> np.random.Generator:
    """Counter-based stream of one batch of draws."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(batch,))))


def _sample_batch(spec: RailYardSpec, left: Partition, seed: int, batch: int, count: int, cap: int):
    sampler = TransferSampler(spec, left, cap)
    rng = batch_rng(seed, batch)
    return [sampler.draw(rng) for _ in range(count)]


def sample_sequences(
    spec: RailYardSpec,
    left: Partition = EMPTY,
    seed: int = 0,
    count: int = 1,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> List[Tuple[Partition, ...]]:
    """Draw ``count`` partition sequences; batches of :data:`BATCH_DRAWS`
    share one generator, so output does not depend on ``threads``."""
    jobs = [(spec, left, seed, b, n, cap) for b, n in enumerate(chunked(count, BATCH_DRAWS))]
    out: List[Tuple[Partition, ...]] = []
    for batch in pool_starmap(_sample_batch, jobs, threads):
        out.extend(batch)
    return out


def sample(
    spec: RailYardSpec,
    left: Partition = EMPTY,
    seed: int = 0,
    count: int = 1,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> List[DimerCovering]:
    return [DimerCovering(spec=spec, partitions=seq) for seq in sample_sequences(spec, left, seed, count, cap, threads)]


# -----------------------------------------------------------------------------
# Enumeration
# -----------------------------------------------------------------------------


def sequence_weight(spec: RailYardSpec, seq: Sequence[Partition]) -> float:
    weight = 1.0
    for m, (lam, nu) in zip(spec.columns, zip(seq, seq[1:])):
        weight *= spec.weight(m) ** abs(size(nu) - size(lam))
    return weight


def sequence_probability(
    spec: RailYardSpec, seq: Sequence[Partition], cap: int = DEFAULT_CAP
) -> float:
    """Probability of one interlacing sequence under the measure with its end partitions as boundary."""
    if len(seq) != spec.n_columns + 1:
        raise SpecError(f"expected {spec.n_columns + 1} partitions, got {len(seq)}")
    DimerCovering(spec=spec, partitions=tuple(seq))
    Z = partition_function_transfer(spec, BoundaryPair(seq[0], seq[-1]), cap)
    return sequence_weight(spec, seq) / Z


def enumerate_sequences(
    spec: RailYardSpec, left: Partition = EMPTY, max_size: int = 6, cap: int = DEFAULT_CAP
) -> Dict[Tuple[Partition, ...], float]:
    """Exact probabilities of all sequences with every ``|λ^(m)| ≤ max_size``.

    Probabilities are normalised by the partition function at ``cap``, so
    they sum to less than one by the mass of larger sequences.
    """
    Z = partition_function_transfer(spec, BoundaryPair(left, EMPTY), cap)
    out: Dict[Tuple[Partition, ...], float] = {}

    def rec(m: int, seq: List[Partition], weight: float) -> None:
        if m > spec.r:
            if not seq[-1]:
                out[tuple(seq)] = weight / Z
            return
        lam = seq[-1]
        for nu, exponent in transitions(spec.kind(m), lam, max_size):
            seq.append(nu)
            rec(m + 1, seq, weight * spec.weight(m) ** exponent)
            seq.pop()

    rec(spec.l, [left], 1.0)
    return out


# -----------------------------------------------------------------------------
# Schur generating function
# -----------------------------------------------------------------------------


def _lminus_after(spec: RailYardSpec, t: int) -> List[int]:
    return spec.slots("L-", start=t + 1)


def schur_generating_fn(
    spec: RailYardSpec, t: int, u: Mapping[int, float], left: Partition = EMPTY
) -> float:
    """``E[s_λ(u)/s_λ(x)]`` for the partition right of operator ``t``.

    ``u`` maps ``(L,-)`` columns ``j > t`` to substituted values; missing
    columns keep ``u_j = x_j``. Closed form:

        s_{λ^(l)}(u^{(L,-,>t)}, x^{(L,-,≤t)}) / s_{λ^(l)}(x^{(L,-)}) · ∏ ξ_ij / z_ij
    """
    if spec.slots("R-"):
        raise SpecError("the Schur generating function needs a graph without (R,-) columns")
    if not spec.l <= t <= spec.r:
        raise SpecError(f"column {t} outside [{spec.l}, {spec.r}]")
    after = set(_lminus_after(spec, t))
    for j in u:
        if j not in after:
            raise SpecError(f"column {j} is not an (L,-) column right of t={t}")
    lminus = spec.slots("L-")
    w = [u.get(j, spec.weight(j)) for j in lminus]
    x = [spec.weight(j) for j in lminus]
    value = 1.0
    if left:
        value = schur(left, w) / schur(left, x)
    for i in range(spec.l, t + 1):
        if spec.sign(i) != "+":
            continue
        for j in after:
            if j in u:
                value *= spec.pair_factor(i, j, u[j]) / spec.pair_factor(i, j)
    return value


def schur_generating_fn_direct(
    spec: RailYardSpec, t: int, u: Mapping[int, float], left: Partition = EMPTY, cap: int = 8
) -> float:
    """Truncated sum ``Σ_λ ρ^t(λ) s_λ(u)/s_λ(x)`` over ``|λ| ≤ cap``."""
    after = _lminus_after(spec, t)
    x = [spec.weight(j) for j in after]
    w = [u.get(j, spec.weight(j)) for j in after]
    bra = left_vector(spec, cap, left, t)
    ket = right_vectors(spec, cap)[t + 1]
    total = weighted = 0.0
    for lam, coeff in bra.items():
        mass = coeff * ket[lam]
        if mass == 0.0:
            continue
        total += mass
        weighted += mass * schur(lam, w) / schur(lam, x)
    return weighted / total
