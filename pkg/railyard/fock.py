"""
Truncated bosonic Fock space and the Γ vertex operators.

Kets are applied from the right, ``Γ|λ⟩ = Σ_μ ⟨μ|Γ|λ⟩ |μ⟩``, bras from the
left, ``⟨λ|Γ = Σ_μ ⟨λ|Γ|μ⟩ ⟨μ|``. Matrix elements:

    ⟨μ|Γ_{L+}(x)|λ⟩ = x^{|λ|-|μ|}  if μ ≺ λ
    ⟨μ|Γ_{L-}(x)|λ⟩ = x^{|μ|-|λ|}  if μ ≻ λ
    ⟨μ|Γ_{R+}(x)|λ⟩ = x^{|λ|-|μ|}  if μ ≺′ λ
    ⟨μ|Γ_{R-}(x)|λ⟩ = x^{|μ|-|λ|}  if μ ≻′ λ

Every stored partition has ``|λ| ≤ cap``; larger terms are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, Tuple

from .partitions import (
    EMPTY,
    Partition,
    size,
    strips_above,
    strips_below,
    vertical_strips_above,
    vertical_strips_below,
)

KINDS = ("L+", "L-", "R+", "R-")


@dataclass
class FockVector:
    """Finite linear combination of partitions truncated at ``|λ| ≤ cap``."""

    cap: int
    coefficients: Dict[Partition, float] = field(default_factory=dict)

    @classmethod
    def basis(cls, lam: Partition, cap: int) -> "FockVector":
        return cls(cap=cap, coefficients={lam: 1.0} if size(lam) <= cap else {})

    def __getitem__(self, lam: Partition) -> float:
        return self.coefficients.get(lam, 0.0)

    def __len__(self) -> int:
        return len(self.coefficients)

    def items(self):
        return self.coefficients.items()

    def add(self, lam: Partition, value: float) -> None:
        if size(lam) <= self.cap:
            self.coefficients[lam] = self.coefficients.get(lam, 0.0) + value

    def scaled(self, factor: float) -> "FockVector":
        return FockVector(self.cap, {k: v * factor for k, v in self.coefficients.items()})

    def truncated(self, cap: int) -> "FockVector":
        return FockVector(cap, {k: v for k, v in self.coefficients.items() if size(k) <= cap})


def _check_kind(kind: str) -> str:
    kind = kind.replace("−", "-")
    if kind not in KINDS:
        raise ValueError(f"operator kind must be one of {KINDS}, got {kind!r}")
    return kind


def _ket_targets(kind: str, lam: Partition, cap: int) -> Iterator[Partition]:
    """Partitions ``μ`` with a nonzero ``⟨μ|Γ|λ⟩``."""
    if kind == "L+":
        return strips_below(lam)
    if kind == "R+":
        return vertical_strips_below(lam)
    if kind == "L-":
        return strips_above(lam, cap)
    return vertical_strips_above(lam, cap)


def _bra_targets(kind: str, lam: Partition, cap: int) -> Iterator[Partition]:
    """Partitions ``μ`` with a nonzero ``⟨λ|Γ|μ⟩``."""
    if kind == "L+":
        return strips_above(lam, cap)
    if kind == "R+":
        return vertical_strips_above(lam, cap)
    if kind == "L-":
        return strips_below(lam)
    return vertical_strips_below(lam)


def _apply(targets: Callable[[str, Partition, int], Iterator[Partition]], kind: str, x: float, v: FockVector) -> FockVector:
    kind = _check_kind(kind)
    if x < 0:
        raise ValueError(f"operator weight must be nonnegative, got {x}")
    out = FockVector(cap=v.cap)
    for lam, coeff in v.items():
        n = size(lam)
        for mu in targets(kind, lam, v.cap):
            out.add(mu, coeff * x ** abs(size(mu) - n))
    return out


def gamma_apply(kind: str, x: float, v: FockVector) -> FockVector:
    """``Γ_kind(x) v`` for a ket ``v``."""
    return _apply(_ket_targets, kind, x, v)


def gamma_apply_left(kind: str, x: float, v: FockVector) -> FockVector:
    """``v Γ_kind(x)`` for a bra ``v``."""
    return _apply(_bra_targets, kind, x, v)


def transitions(kind: str, lam: Partition, cap: int) -> Iterator[Tuple[Partition, int]]:
    """Successors ``ν`` of ``λ`` across one operator with the exponent ``|Δ|``.

    The partition to the left of the operator is ``λ``; ``ν`` is the one to
    its right, so these are the bra targets.
    """
    kind = _check_kind(kind)
    n = size(lam)
    for nu in _bra_targets(kind, lam, cap):
        yield nu, abs(size(nu) - n)


def vacuum(cap: int) -> FockVector:
    return FockVector.basis(EMPTY, cap)
