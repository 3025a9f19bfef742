"""
Schur functions at weights with repeated values, expanded over cosets.

With the ``N`` variables split into groups of equal weight, the
alternant ``det(w_j^{λ_i + N - i})`` expands (Laplace, along the row sets
given to each group) into one term per distinct arrangement of group
labels over the rows. Row ``j`` of a group ``g`` contributes the part
``λ_j + η_j`` with ``η_j`` the number of later rows carrying another
label, so that

    s_λ(w) = Σ_σ ∏_g s_{φ^(g,σ)}(w|_g) ∏_{j<k, g_j ≠ g_k} 1/(w_σ(j) - w_σ(k)).

When the weights are far apart the arrangement listing the groups from the
largest weight down dominates every other term.
"""

from __future__ import annotations

import logging
from collections import Counter
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple

from .errors import SpecError
from .partitions import Partition, make_partition, part
from .symfunc import schur

logger = logging.getLogger(__name__)

MAX_WORDS = 200_000


def coset_words(sizes: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """Distinct words with ``sizes[g]`` copies of label ``g``."""
    left = list(sizes)
    total = sum(left)
    word: List[int] = []

    def rec() -> Iterator[Tuple[int, ...]]:
        if len(word) == total:
            yield tuple(word)
            return
        for g, k in enumerate(left):
            if k:
                left[g] -= 1
                word.append(g)
                yield from rec()
                word.pop()
                left[g] += 1

    yield from rec()


def _groups(weights: Sequence[float], tol: float = 1e-12) -> List[float]:
    values: List[float] = []
    for x in sorted(weights, reverse=True):
        if not values or abs(values[-1] - x) > tol * max(1.0, abs(x)):
            values.append(x)
    return values


def _coset_term(
    lam: Partition, word: Tuple[int, ...], variables: Mapping[int, List[float]]
) -> float:
    N = len(word)
    rows: Dict[int, List[int]] = {}
    for j, g in enumerate(word, 1):
        rows.setdefault(g, []).append(j)
    value = 1.0
    assigned: List[float] = [0.0] * N
    for g, js in rows.items():
        phi = [part(lam, j) + sum(1 for k in range(j, N) if word[k] != g) for j in js]
        value *= schur(make_partition(phi), variables[g])
        for j, w in zip(js, variables[g]):
            assigned[j - 1] = w
    for j in range(N):
        for k in range(j + 1, N):
            if word[j] != word[k]:
                value /= assigned[j] - assigned[k]
    return value


def dominant_schur(
    lam: Sequence[int],
    weights: Sequence[float],
    u: Mapping[int, float] | None = None,
    mode: str = "full",
) -> float:
    """``s_λ`` at ``weights`` with entries listed in ``u`` (0-based) replaced.

    ``mode="full"`` sums every coset and equals the Schur function;
    ``mode="dominant"`` keeps the arrangement sorted by decreasing weight.
    """
    if mode not in ("full", "dominant"):
        raise ValueError(f"mode must be 'full' or 'dominant', got {mode!r}")
    lam = make_partition(lam)
    N = len(weights)
    if len(lam) > N:
        raise SpecError(f"partition of length {len(lam)} in {N} variables")
    u = dict(u or {})
    values = _groups(weights)
    label = [min(range(len(values)), key=lambda g: abs(values[g] - x)) for x in weights]
    variables: Dict[int, List[float]] = {g: [] for g in range(len(values))}
    for idx, g in enumerate(label):
        variables[g].append(float(u.get(idx, weights[idx])))
    sizes = [len(variables[g]) for g in range(len(values))]

    if mode == "dominant":
        word = tuple(g for g, k in enumerate(sizes) for _ in range(k))
        return _coset_term(lam, word, variables)

    counts = Counter(label)
    logger.debug("summing cosets for group sizes %s", dict(counts))
    total, n_words = 0.0, 0
    for word in coset_words(sizes):
        n_words += 1
        if n_words > MAX_WORDS:
            raise SpecError(f"more than {MAX_WORDS} cosets; use mode='dominant'")
        total += _coset_term(lam, word, variables)
    return total
