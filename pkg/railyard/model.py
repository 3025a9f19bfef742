"""
Periodic asymptotic models and their finite realisations.

An :class:`AsymptoticModel` splits ``[V_0, V_m]`` into ``m`` segments; in
segment ``p`` the columns repeat a pattern of ``n_p`` slots, slot ``j``
carrying ``(a, b, x)`` and a density ``ζ_j`` (``1/n_p`` for the canonical
pattern). The fraction of all columns that sit in slot ``(p, j)`` is

    c_{p,j} = (V_p - V_{p-1}) / (V_m - V_0) · ζ_j.

Weights may be exactly ``0`` for slots whose weight vanishes faster than
any power of the scale; finite realisations replace them by
:data:`TINY_WEIGHT`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .errors import ConvergenceError, SpecError
from .graph import RailYardSpec, build

logger = logging.getLogger(__name__)

TINY_WEIGHT = 1e-8


@dataclass(frozen=True)
class Slot:
    a: str
    b: str
    x: float

    @property
    def kind(self) -> str:
        return self.a + self.b


@dataclass(frozen=True)
class Segment:
    slots: Tuple[Slot, ...]
    zeta: Tuple[float, ...] | None = None

    @property
    def n(self) -> int:
        return len(self.slots)

    def density(self, j: int) -> float:
        return self.zeta[j] if self.zeta is not None else 1.0 / self.n


@dataclass(frozen=True)
class ObservationPoint:
    """Column position ``(p_t, α_t)``: fraction ``α_t`` into segment ``p_t`` (1-based)."""

    p: int
    alpha: float

    def chi(self, model: "AsymptoticModel") -> float:
        lo, hi = model.V[self.p - 1], model.V[self.p]
        return lo + self.alpha * (hi - lo)


@dataclass(frozen=True)
class AsymptoticModel:
    V: Tuple[float, ...]
    segments: Tuple[Segment, ...]

    def __post_init__(self):
        if len(self.V) != len(self.segments) + 1:
            raise SpecError(f"need {len(self.segments) + 1} breakpoints, got {len(self.V)}")
        if any(b <= a for a, b in zip(self.V, self.V[1:])):
            raise SpecError(f"breakpoints must increase strictly, got {self.V}")
        for p, seg in enumerate(self.segments, 1):
            if seg.n == 0:
                raise SpecError(f"segment {p} has no slots")
            if seg.zeta is not None and len(seg.zeta) != seg.n:
                raise SpecError(f"segment {p}: {len(seg.zeta)} densities for {seg.n} slots")
            for s in seg.slots:
                if s.a not in ("L", "R") or s.b not in ("+", "-"):
                    raise SpecError(f"segment {p}: bad slot kind {s.kind!r}")
                if s.x < 0:
                    raise SpecError(f"segment {p}: negative weight {s.x}")
        self._check_convergence()

    def _check_convergence(self) -> None:
        # a + slot meets every same-letter - slot of its own or a later segment
        for p, seg in enumerate(self.segments, 1):
            for i, s in enumerate(seg.slots, 1):
                if s.b != "+":
                    continue
                for q in range(p, self.m + 1):
                    for j, t in enumerate(self.segments[q - 1].slots, 1):
                        if t.b == "-" and t.a == s.a and s.x * t.x >= 1.0:
                            raise ConvergenceError(f"({p},{i})", f"({q},{j})", s.x * t.x)

    @property
    def m(self) -> int:
        return len(self.segments)

    @property
    def span(self) -> float:
        return self.V[-1] - self.V[0]

    def segment_weight(self, p: int) -> float:
        return (self.V[p] - self.V[p - 1]) / self.span

    def slot_weights(self, p: int) -> List[Tuple[Slot, float]]:
        seg = self.segments[p - 1]
        c = self.segment_weight(p)
        return [(s, c * seg.density(j)) for j, s in enumerate(seg.slots)]

    def weighted_slots(self, kind: str, segments: Iterable[int]) -> List[Tuple[float, float]]:
        """``(x, c)`` pairs of a slot kind over the given segments."""
        out = []
        for p in segments:
            out.extend((s.x, c) for s, c in self.slot_weights(p) if s.kind == kind)
        return out

    def kind_fraction(self, kind: str) -> float:
        return sum(c for _, c in self.weighted_slots(kind, range(1, self.m + 1)))

    def point_at(self, chi: float) -> ObservationPoint:
        if not self.V[0] <= chi <= self.V[-1]:
            raise SpecError(f"chi={chi} outside [{self.V[0]}, {self.V[-1]}]")
        for p in range(1, self.m + 1):
            if chi <= self.V[p] or p == self.m:
                lo, hi = self.V[p - 1], self.V[p]
                return ObservationPoint(p, (chi - lo) / (hi - lo))
        raise AssertionError("unreachable")

    def to_dict(self) -> dict:
        return {
            "V": list(self.V),
            "segments": [
                {
                    "slots": [{"a": s.a, "b": s.b, "x": s.x} for s in seg.slots],
                    **({"zeta": list(seg.zeta)} if seg.zeta is not None else {}),
                }
                for seg in self.segments
            ],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AsymptoticModel":
        segments = []
        for seg in data["segments"]:
            slots = tuple(Slot(str(s["a"]), str(s["b"]).replace("−", "-"), float(s["x"])) for s in seg["slots"])
            zeta = tuple(float(z) for z in seg["zeta"]) if "zeta" in seg else None
            segments.append(Segment(slots, zeta))
        return cls(V=tuple(float(v) for v in data["V"]), segments=tuple(segments))

    @classmethod
    def from_spec(cls, spec: RailYardSpec, period: int) -> "AsymptoticModel":
        """Canonical one-segment model of a ``period``-periodic finite graph."""
        if spec.n_columns % period:
            raise SpecError(f"{spec.n_columns} columns are not a whole number of periods {period}")
        slots = tuple(
            Slot(spec.a[j], spec.b[j], spec.x[j]) for j in range(period)
        )
        for k in range(spec.n_columns):
            s = slots[k % period]
            if (spec.a[k], spec.b[k], spec.x[k]) != (s.a, s.b, s.x):
                raise SpecError(f"column {spec.l + k} breaks the period-{period} pattern")
        return cls(V=(0.0, 1.0), segments=(Segment(slots),))


# -----------------------------------------------------------------------------
# Finite realisation
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class Realization:
    spec: RailYardSpec
    starts: Tuple[int, ...]
    lengths: Tuple[int, ...]

    @property
    def N(self) -> int:
        return self.spec.r - self.spec.l

    def column(self, point: ObservationPoint) -> int:
        """Column ``t`` whose right-hand partition represents ``point``."""
        start = self.starts[point.p - 1] - 1
        t = start + int(round(point.alpha * self.lengths[point.p - 1]))
        return min(max(t, self.spec.l), self.spec.r)

    def lminus_after(self, t: int) -> int:
        return len(self.spec.slots("L-", start=t + 1))


def realize(model: AsymptoticModel, periods: int, tiny: float = TINY_WEIGHT) -> Realization:
    """Repeat each segment's pattern in proportion to its ``V`` length.

    Segment ``p`` gets ``max(1, round(periods · (V_p - V_{p-1}) / span))``
    periods. Only canonical densities can be realised.
    """
    a: List[str] = []
    b: List[str] = []
    x: List[float] = []
    starts, lengths = [], []
    for p, seg in enumerate(model.segments, 1):
        if seg.zeta is not None and not np.allclose(seg.zeta, 1.0 / seg.n):
            raise SpecError(f"segment {p} has non-canonical densities and cannot be realised")
        reps = max(1, int(round(periods * model.segment_weight(p))))
        starts.append(len(a) + 1)
        lengths.append(reps * seg.n)
        for _ in range(reps):
            for s in seg.slots:
                a.append(s.a)
                b.append(s.b)
                x.append(s.x if s.x > 0 else tiny)
    spec = build(1, len(a), a, b, x)
    logger.debug("realised model with %d columns", len(a))
    return Realization(spec=spec, starts=tuple(starts), lengths=tuple(lengths))


def empirical_moments(rows: np.ndarray, n: int, N: int, ks: Sequence[int]) -> np.ndarray:
    """Per-sample counting-measure moments.

    ``rows`` has shape ``(S, W)`` (zero padded partitions); atoms are
    ``(λ_i + n - i)/N`` for ``i = 1..n`` with mass ``1/N`` each. Returns an
    array of shape ``(S, len(ks))``.
    """
    S = rows.shape[0]
    lam = np.zeros((S, n))
    w = min(n, rows.shape[1])
    lam[:, :w] = rows[:, :w]
    if rows.shape[1] > n and np.any(rows[:, n:]):
        raise SpecError(f"partition longer than the {n} available rows")
    atoms = (lam + n - np.arange(1, n + 1)) / N
    return np.stack([np.sum(atoms**k, axis=1) / N for k in ks], axis=1)
