"""
Rail-yard graphs, dimer coverings and height functions.

Vertices of ``RYG(l, r, a, b)`` sit at abscissae ``2l-1, ..., 2r+1`` and
half-integer heights. Odd columns carry the particle–hole profiles, even
column ``2m`` is joined to both neighbouring odd columns horizontally and
by one family of diagonals whose direction is set by ``(a_m, b_m)``:

    (L, +): (2m, y) - (2m-1, y+1)      (R, +): (2m, y) - (2m+1, y+1)
    (L, -): (2m, y) - (2m-1, y-1)      (R, -): (2m, y) - (2m+1, y-1)

A covering is stored as its interlacing partition sequence
``λ^(l), ..., λ^(r+1)``; ``λ^(m)`` is read on the odd column ``2m-1``.
Edges, profiles and heights are derived from it inside a finite window
outside of which the configuration is frozen (particles below, holes
above).
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import ConvergenceError, SpecError
from .partitions import EMPTY, Partition, conjugate, interlaces, make_partition, part

logger = logging.getLogger(__name__)

LETTERS = ("L", "R")
SIGNS = ("+", "-")

# (kind, even vertex, odd vertex); heights are floats at k + 1/2
Edge = Tuple[str, Tuple[int, float], Tuple[int, float]]


def _sign(value: str) -> str:
    value = value.replace("−", "-")
    if value not in SIGNS:
        raise SpecError(f"sign must be '+' or '-', got {value!r}")
    return value


@dataclass(frozen=True)
class RailYardSpec:
    """Graph data: columns ``l..r`` with letters, signs and diagonal weights."""

    l: int
    r: int
    a: Tuple[str, ...]
    b: Tuple[str, ...]
    x: Tuple[float, ...]

    @property
    def n_columns(self) -> int:
        return self.r - self.l + 1

    @property
    def columns(self) -> range:
        return range(self.l, self.r + 1)

    def letter(self, m: int) -> str:
        return self.a[m - self.l]

    def sign(self, m: int) -> str:
        return self.b[m - self.l]

    def weight(self, m: int) -> float:
        return self.x[m - self.l]

    def kind(self, m: int) -> str:
        return self.letter(m) + self.sign(m)

    def slots(self, kind: str, start: int | None = None, stop: int | None = None) -> List[int]:
        """Column indices of a given kind (``"L-"`` etc.) inside ``[start, stop]``."""
        lo = self.l if start is None else start
        hi = self.r if stop is None else stop
        return [m for m in range(lo, hi + 1) if self.kind(m) == kind]

    def interacting_pairs(self) -> Iterable[Tuple[int, int]]:
        """Pairs ``i < j`` with ``b_i = +`` and ``b_j = -``."""
        for i in self.columns:
            if self.sign(i) != "+":
                continue
            for j in range(i + 1, self.r + 1):
                if self.sign(j) == "-":
                    yield i, j

    def pair_factor(self, i: int, j: int, xj: float | None = None) -> float:
        """``z_ij`` of the commutation relations (``x_j`` may be substituted)."""
        xj = self.weight(j) if xj is None else xj
        q = self.weight(i) * xj
        if self.letter(i) == self.letter(j):
            return 1.0 / (1.0 - q)
        return 1.0 + q

    def edges(self, y_min: float, y_max: float) -> Iterable[Tuple[Edge, float]]:
        """Every edge with even endpoint height in ``[y_min, y_max]`` and its weight."""
        for m in self.columns:
            dx, dy = _diagonal_step(self.kind(m))
            for y in _half_integers(y_min, y_max):
                yield ("h", (2 * m, y), (2 * m - 1, y)), 1.0
                yield ("h", (2 * m, y), (2 * m + 1, y)), 1.0
                yield ("d", (2 * m, y), (2 * m + dx, y + dy)), self.weight(m)

    def to_dict(self) -> dict:
        return {"l": self.l, "r": self.r, "a": "".join(self.a), "b": "".join(self.b), "x": list(self.x)}


def _diagonal_step(kind: str) -> Tuple[int, int]:
    return (-1 if kind[0] == "L" else 1, 1 if kind[1] == "+" else -1)


def _half_integers(lo: float, hi: float) -> List[float]:
    start = int(np.ceil(lo - 0.5))
    stop = int(np.floor(hi - 0.5))
    return [k + 0.5 for k in range(start, stop + 1)]


def build(l: int, r: int, a: Sequence[str], b: Sequence[str], x: Sequence[float]) -> RailYardSpec:
    """Validate graph data and return a RailYardSpec.

    Raises :class:`ConvergenceError` for a same-letter ``(+, -)`` pair with
    ``x_i x_j >= 1``.
    """
    if r < l:
        raise SpecError(f"need l <= r, got l={l}, r={r}")
    n = r - l + 1
    a = tuple(a)
    b = tuple(_sign(s) for s in b)
    x = tuple(float(v) for v in x)
    if not (len(a) == len(b) == len(x) == n):
        raise SpecError(f"sequences must have length r-l+1={n}, got |a|={len(a)}, |b|={len(b)}, |x|={len(x)}")
    for letter in a:
        if letter not in LETTERS:
            raise SpecError(f"letters must be 'L' or 'R', got {letter!r}")
    for m, value in enumerate(x, l):
        if not value > 0:
            raise SpecError(f"weight x_{m} must be positive, got {value}")
    spec = RailYardSpec(l=l, r=r, a=a, b=b, x=x)
    for i, j in spec.interacting_pairs():
        if spec.letter(i) == spec.letter(j):
            product = spec.weight(i) * spec.weight(j)
            if product >= 1.0:
                raise ConvergenceError(i, j, product)
    return spec


def spec_from_dict(data: dict) -> RailYardSpec:
    return build(int(data["l"]), int(data["r"]), list(data["a"]), list(data["b"]), data["x"])


# -----------------------------------------------------------------------------
# Particle–hole profiles
# -----------------------------------------------------------------------------


def particles(lam: Partition) -> FrozenSet[float]:
    """Particle heights ``λ_i - i + 1/2`` of the non-frozen rows."""
    return frozenset(lam[i - 1] - i + 0.5 for i in range(1, len(lam) + 1))


def is_particle(lam: Partition, y: float) -> bool:
    if y < -len(lam):
        return True
    return y in particles(lam)


def _required_transition(kind: str, left: Partition, right: Partition) -> bool:
    if kind == "L+":
        return interlaces(right, left)
    if kind == "R+":
        return interlaces(right, left, conjugated=True)
    if kind == "L-":
        return interlaces(left, right)
    return interlaces(left, right, conjugated=True)


def diagonal_heights(kind: str, left: Partition, right: Partition) -> FrozenSet[float]:
    """Heights of the even endpoints of present diagonals between two columns."""
    out = set()
    if kind[0] == "L":
        cl, cr = conjugate(left), conjugate(right)
        for j in range(1, max(len(cl), len(cr)) + 1):
            shift = part(cr, j) - part(cl, j)
            if kind == "L+" and shift == 1:
                out.add(j - part(cl, j) - 1.5)
            elif kind == "L-" and shift == -1:
                out.add(j - part(cl, j) + 0.5)
    else:
        for i in range(1, max(len(left), len(right)) + 1):
            shift = part(right, i) - part(left, i)
            if (kind == "R+" and shift == 1) or (kind == "R-" and shift == -1):
                out.add(part(left, i) - i + 0.5)
    return frozenset(out)


@dataclass(frozen=True)
class ColumnProfile:
    """Particle indicator per half-integer height ``y_min, ..., y_max``."""

    m: int
    y_min: float
    y_max: float
    occupancy: np.ndarray

    @property
    def heights(self) -> np.ndarray:
        return np.arange(self.y_min, self.y_max + 0.5, 1.0)

    def partition(self) -> Partition:
        """``λ_i`` = number of holes below the ``i``-th highest particle."""
        occ = self.occupancy
        holes_below = np.cumsum(~occ) - (~occ)
        rows = holes_below[occ][::-1]
        return make_partition(int(v) for v in rows)

    def charge(self) -> int:
        y = self.heights
        return int(np.sum(self.occupancy & (y > 0)) - np.sum(~self.occupancy & (y < 0)))


# -----------------------------------------------------------------------------
# Dimer coverings
# -----------------------------------------------------------------------------


@dataclass(frozen=True)
class DimerCovering:
    """A dimer covering encoded by its column partitions ``λ^(l..r+1)``."""

    spec: RailYardSpec
    partitions: Tuple[Partition, ...]
    margin: int = field(default=1, compare=False)

    def __post_init__(self):
        expected = self.spec.n_columns + 1
        if len(self.partitions) != expected:
            raise SpecError(f"expected {expected} partitions, got {len(self.partitions)}")
        for m in self.spec.columns:
            left, right = self.column(m), self.column(m + 1)
            if not _required_transition(self.spec.kind(m), left, right):
                raise SpecError(
                    f"partitions {left} and {right} violate the {self.spec.kind(m)} rule at column {m}"
                )

    def column(self, m: int) -> Partition:
        return self.partitions[m - self.spec.l]

    @property
    def pure(self) -> bool:
        return not self.partitions[0] and not self.partitions[-1]

    @cached_property
    def window(self) -> Tuple[float, float]:
        depth = max(len(p) for p in self.partitions)
        top = max(part(p, 1) for p in self.partitions)
        return (-depth - 0.5 - self.margin, top + 0.5 + self.margin)

    @cached_property
    def diagonals(self) -> Dict[int, FrozenSet[float]]:
        return {
            m: diagonal_heights(self.spec.kind(m), self.column(m), self.column(m + 1))
            for m in self.spec.columns
        }

    @property
    def diagonal_edges(self) -> FrozenSet[Tuple[int, float]]:
        return frozenset((m, y) for m, ys in self.diagonals.items() for y in ys)

    def diagonal_counts(self) -> List[int]:
        return [len(self.diagonals[m]) for m in self.spec.columns]

    def matched(self, m: int, y: float) -> str:
        """Partner of even vertex ``(2m, y)``: ``"left"``, ``"right"`` or ``"diag"``."""
        kind = self.spec.kind(m)
        if kind[0] == "L":
            if y in self.diagonals[m]:
                return "diag"
            return "right" if is_particle(self.column(m + 1), y) else "left"
        if not is_particle(self.column(m), y):
            return "left"
        return "diag" if y in self.diagonals[m] else "right"

    def edges(self) -> FrozenSet[Edge]:
        """Present edges whose even endpoint lies in the window."""
        y_min, y_max = self.window
        out = set()
        for m in self.spec.columns:
            dx, dy = _diagonal_step(self.spec.kind(m))
            for y in _half_integers(y_min, y_max):
                partner = self.matched(m, y)
                if partner == "left":
                    out.add(("h", (2 * m, y), (2 * m - 1, y)))
                elif partner == "right":
                    out.add(("h", (2 * m, y), (2 * m + 1, y)))
                else:
                    out.add(("d", (2 * m, y), (2 * m + dx, y + dy)))
        return frozenset(out)

    def validate(self) -> None:
        """Check that every inner vertex of the window is covered exactly once."""
        y_min, y_max = self.window
        degree: Dict[Tuple[int, float], int] = {}
        for _, even, odd in self.edges():
            degree[even] = degree.get(even, 0) + 1
            degree[odd] = degree.get(odd, 0) + 1
        for y in _half_integers(y_min + 1, y_max - 1):
            for xcol in range(2 * self.spec.l, 2 * self.spec.r + 1):
                if degree.get((xcol, y), 0) != 1:
                    raise SpecError(f"vertex ({xcol}, {y}) covered {degree.get((xcol, y), 0)} times")

    def profile(self, m: int) -> ColumnProfile:
        y_min, y_max = self.window
        ys = _half_integers(y_min, y_max)
        lam = self.column(m)
        occ = np.array([is_particle(lam, y) for y in ys], dtype=bool)
        return ColumnProfile(m=m, y_min=ys[0], y_max=ys[-1], occupancy=occ)

    @classmethod
    def from_edges(cls, spec: RailYardSpec, edges: Iterable[Edge], window: Tuple[float, float]) -> "DimerCovering":
        """Rebuild the partition sequence from present edges inside ``window``.

        An odd vertex is a particle when it is matched to the left, or, on
        the left boundary column, when it is not matched at all.
        """
        matched_left = set()
        matched_right = set()
        for _, even, odd in edges:
            (matched_left if odd[0] > even[0] else matched_right).add(odd)
        ys = _half_integers(*window)
        partitions = []
        for m in range(spec.l, spec.r + 2):
            xcol = 2 * m - 1
            occ = np.array(
                [
                    (xcol, y) in matched_left or (m == spec.l and (xcol, y) not in matched_right)
                    for y in ys
                ],
                dtype=bool,
            )
            profile = ColumnProfile(m=m, y_min=ys[0], y_max=ys[-1], occupancy=occ)
            partitions.append(profile.partition())
        return cls(spec=spec, partitions=tuple(partitions))

    def to_json(self) -> str:
        data = self.spec.to_dict()
        data["partitions"] = [list(p) for p in self.partitions]
        return json.dumps(data)

    @classmethod
    def from_json(cls, text: str) -> "DimerCovering":
        data = json.loads(text)
        spec = spec_from_dict(data)
        return cls(spec=spec, partitions=tuple(make_partition(p) for p in data["partitions"]))


def base_covering(spec: RailYardSpec) -> DimerCovering:
    """The vacuum pure covering: every column partition empty, no diagonals."""
    return DimerCovering(spec=spec, partitions=(EMPTY,) * (spec.n_columns + 1))


def covering_weight(spec: RailYardSpec, cov: DimerCovering) -> float:
    """``∏ x_m^{d_m}`` with ``d_m`` the number of present diagonals in column ``m``."""
    if cov.spec != spec:
        raise SpecError("covering belongs to a different graph")
    weight = 1.0
    for m, d in zip(spec.columns, cov.diagonal_counts()):
        weight *= spec.weight(m) ** d
    return weight


def column_partition(spec: RailYardSpec, cov: DimerCovering, m: int) -> Partition:
    if not cov.pure:
        raise SpecError("column partitions are read from pure coverings only")
    if not spec.l <= m <= spec.r + 1:
        raise SpecError(f"column {m} outside [{spec.l}, {spec.r + 1}]")
    return cov.profile(m).partition()


def charge(spec: RailYardSpec, cov: DimerCovering, m: int) -> int:
    if not cov.pure:
        raise SpecError("charge is defined for pure coverings only")
    return cov.profile(m).charge()


# -----------------------------------------------------------------------------
# Height function
# -----------------------------------------------------------------------------


def _check_point(spec: RailYardSpec, x: float, y: float) -> None:
    if (x - 0.5) % 1 != 0 or not 2 * spec.l - 0.5 <= x <= 2 * spec.r + 0.5:
        raise ValueError(f"abscissa {x} is not a face line of the graph")
    if (2 * y) % 1 == 0:
        raise ValueError(f"height {y} lies on an edge crossing")


def _increment(kind: str, present: bool, odd_on_left: bool) -> int:
    if kind == "h":
        value = 1 if present else -1
    else:
        value = 2 if present else 0
    return value if odd_on_left else -value


def _odd_on_left(direction: Tuple[float, float], crossing: Tuple[float, float], odd: Tuple[float, float]) -> bool:
    vx, vy = odd[0] - crossing[0], odd[1] - crossing[1]
    return direction[0] * vy - direction[1] * vx > 0


def _present(cov: DimerCovering, edge: Edge) -> bool:
    kind, even, odd = edge
    m, y = even[0] // 2, even[1]
    partner = cov.matched(m, y)
    if kind == "d":
        return partner == "diag"
    return partner == ("left" if odd[0] < even[0] else "right")


def _vertical_crossings(spec: RailYardSpec, x: float, y0: float, y1: float) -> List[Tuple[Edge, Tuple[float, float]]]:
    lo, hi = min(y0, y1), max(y0, y1)
    out = []
    odd_left = int(round(x - 0.5)) % 2 == 1
    m = int(round(x + 0.5)) // 2 if odd_left else int(round(x - 0.5)) // 2
    odd_col = 2 * m - 1 if odd_left else 2 * m + 1
    for k in _half_integers(lo, hi):
        out.append((("h", (2 * m, k), (odd_col, k)), (x, k)))
    if spec.l <= m <= spec.r:
        kind = spec.kind(m)
        dx, dy = _diagonal_step(kind)
        if (dx < 0) == odd_left:
            # diagonal crosses the line halfway, at an integer height
            for e in _half_integers(lo - 0.5 * dy, hi - 0.5 * dy):
                c = e + 0.5 * dy
                if lo < c < hi:
                    out.append((("d", (2 * m, e), (2 * m + dx, e + dy)), (x, c)))
    return out


def _horizontal_crossings(spec: RailYardSpec, y: float, x0: float, x1: float) -> List[Tuple[Edge, Tuple[float, float]]]:
    lo, hi = min(x0, x1), max(x0, x1)
    out = []
    for m in spec.columns:
        dx, dy = _diagonal_step(spec.kind(m))
        # unique half-integer e with the diagonal spanning height y
        if dy > 0:
            e = float(np.floor(y - 0.5)) + 0.5
        else:
            e = float(np.ceil(y - 0.5)) + 0.5
        t = (y - e) / dy
        if not 0 < t < 1:
            continue
        xc = 2 * m + dx * t
        if lo < xc < hi:
            out.append((("d", (2 * m, e), (2 * m + dx, e + dy)), (xc, y)))
    return out


def _path_height(cov: DimerCovering, moves: List[Tuple[Tuple[float, float], Tuple[float, float]]]) -> int:
    spec = cov.spec
    total = 0
    for start, end in moves:
        direction = (np.sign(end[0] - start[0]), np.sign(end[1] - start[1]))
        if start[0] == end[0]:
            crossings = _vertical_crossings(spec, start[0], start[1], end[1])
        else:
            crossings = _horizontal_crossings(spec, start[1], start[0], end[0])
        for edge, point in crossings:
            total += _increment(edge[0], _present(cov, edge), _odd_on_left(direction, point, edge[2]))
    return total


def height(spec: RailYardSpec, cov: DimerCovering, x: float, y: float, vertical_first: bool = False) -> int:
    """``h_M = h̄_M - h̄_base`` at the face containing ``(x, y)``.

    Both preliminary heights are integrated along the same path from the
    anchor face on the line ``x = 2l - 1/2`` below the window: either
    across first and then up, or up first and then across.
    """
    _check_point(spec, x, y)
    base = base_covering(spec)
    y_anchor = float(np.floor(min(cov.window[0], y))) - 1.25
    x_anchor = 2 * spec.l - 0.5
    if vertical_first:
        moves = [((x_anchor, y_anchor), (x_anchor, y)), ((x_anchor, y), (x, y))]
    else:
        moves = [((x_anchor, y_anchor), (x, y_anchor)), ((x, y_anchor), (x, y))]
    moves = [mv for mv in moves if mv[0] != mv[1]]
    return _path_height(cov, moves) - _path_height(base, moves)


def height_formula(spec: RailYardSpec, cov: DimerCovering, x: float, y: float) -> int:
    """Closed crossing counts along the vertical line through ``(x, y)``.

    On lines with the odd column on the left the preliminary height is
    ``2(N_h + N_d)`` (present horizontals and diagonals crossed below
    ``y``); on the other lines it is ``2(J_h - N_d)`` with ``J_h`` the
    absent horizontals. The value for the base covering is subtracted.
    """
    _check_point(spec, x, y)
    odd_left = int(round(x - 0.5)) % 2 == 1
    y_anchor = float(np.floor(min(cov.window[0], y))) - 1.25

    def count(c: DimerCovering) -> int:
        present_h = absent_h = present_d = 0
        for edge, _ in _vertical_crossings(spec, x, y_anchor, y):
            on = _present(c, edge)
            if edge[0] == "h":
                present_h += on
                absent_h += not on
            else:
                present_d += on
        return 2 * (present_h + present_d) if odd_left else 2 * (absent_h - present_d)

    return count(cov) - count(base_covering(spec))
