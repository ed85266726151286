"""Finite strict partial orders on points ``0..n-1``.

Relations are stored as the full transitive closure, one bitset row per
point (``up[x]`` holds every ``y`` with ``x < y``), so comparability tests are
O(1) and set operations are integer operations.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

MAX_POINTS = 64


class CycleError(ValueError):
    """The transitive closure of the input relation is not irreflexive."""


class EmptyPosetError(ValueError):
    pass


class ShapeError(ValueError):
    pass


class WidthError(ValueError):
    pass


def bits(mask: int) -> list[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def _close(n: int, up: list[int]) -> list[int]:
    # Warshall on bitset rows
    for k in range(n):
        bk = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= uk
    return up


@dataclass(frozen=True, eq=False)
class Poset:
    """Immutable finite poset.  Use :func:`from_strict_pairs` to build one."""

    n: int
    up: tuple[int, ...]
    name: str | None = None
    down: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.n <= MAX_POINTS:
            raise ValueError(f"point count {self.n} outside [0, {MAX_POINTS}]")
        down = [0] * self.n
        for x in range(self.n):
            for y in bits(self.up[x]):
                down[y] |= 1 << x
        object.__setattr__(self, "down", tuple(down))
        self.check()

    def check(self) -> None:
        """Assert irreflexivity, antisymmetry and transitivity."""
        full = (1 << self.n) - 1
        for x in range(self.n):
            row = self.up[x]
            assert row & ~full == 0, "relation leaves the carrier"
            assert not row >> x & 1, f"{x} < {x}"
            assert not row & self.down[x], f"antisymmetry fails at {x}"
            for y in bits(row):
                assert self.up[y] & ~row == 0, f"not transitive at {x} < {y}"

    # --- elementary queries -------------------------------------------------

    @cached_property
    def ls(self) -> LevelStructure:
        return level_structure(self)

    @property
    def points(self) -> range:
        return range(self.n)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def lt(self, x: int, y: int) -> bool:
        return bool(self.up[x] >> y & 1)

    def le(self, x: int, y: int) -> bool:
        return x == y or bool(self.up[x] >> y & 1)

    def comparable(self, x: int, y: int) -> bool:
        return x == y or bool((self.up[x] | self.down[x]) >> y & 1)

    def upset(self, x: int) -> int:
        """Mask of ``{y : x <= y}``."""
        return self.up[x] | 1 << x

    def downset(self, x: int) -> int:
        return self.down[x] | 1 << x

    def relation(self) -> list[list[bool]]:
        return [[self.lt(x, y) for y in self.points] for x in self.points]

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x in self.points for y in bits(self.up[x])]

    def upper_covers(self, x: int) -> int:
        row = self.up[x]
        covers = row
        for y in bits(row):
            covers &= ~self.up[y]
        return covers

    def lower_covers(self, x: int) -> int:
        row = self.down[x]
        covers = row
        for y in bits(row):
            covers &= ~self.down[y]
        return covers

    def covers(self) -> list[tuple[int, int]]:
        return [(x, y) for x in self.points for y in bits(self.upper_covers(x))]

    def is_antichain(self, mask: int) -> bool:
        for x in bits(mask):
            if self.up[x] & mask:
                return False
        return True

    def all_below(self, a: int, b: int) -> bool:
        """``A < B`` for point masks ``a`` and ``b``."""
        for x in bits(a):
            if b & ~self.up[x]:
                return False
        return True

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = 1
        frontier = 1
        while frontier:
            nxt = 0
            for x in bits(frontier):
                nxt |= self.up[x] | self.down[x]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == self.all_mask

    # --- derived posets -----------------------------------------------------

    def dual(self) -> Poset:
        """Same points, reversed order."""
        return Poset(self.n, self.down, _dual_name(self.name))

    def induced(self, points: Iterable[int]) -> tuple[Poset, list[int]]:
        """Induced sub-poset, relabelled ``0..m-1`` in increasing id order.

        Returns the poset and the list mapping new ids to old ids.
        """
        old = sorted(set(points))
        index = {p: i for i, p in enumerate(old)}
        up = []
        for p in old:
            up.append(mask_of(index[q] for q in bits(self.up[p]) if q in index))
        return Poset(len(old), tuple(up)), old

    def relabel(self, perm: Sequence[int]) -> Poset:
        """Poset with point ``x`` renamed ``perm[x]``."""
        up = [0] * self.n
        for x in self.points:
            up[perm[x]] = mask_of(perm[y] for y in bits(self.up[x]))
        return Poset(self.n, tuple(up), self.name)

    # --- serialisation --------------------------------------------------------

    def to_json(self) -> dict:
        return {"n": self.n, "lt": [list(p) for p in self.pairs()]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict | str) -> Poset:
        if isinstance(data, str):
            data = json.loads(data)
        return from_strict_pairs(data["n"], [tuple(p) for p in data["lt"]])

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<Poset{label} n={self.n} covers={self.covers()}>"


def _dual_name(name):
    if name is None:
        return None
    return name[5:-1] if name.startswith("dual(") else f"dual({name})"


def from_strict_pairs(n: int, pairs: Iterable[tuple[int, int]], name: str | None = None) -> Poset:
    """Transitive closure of the strict relation given by ``pairs``."""
    if not 0 <= n <= MAX_POINTS:
        raise ValueError(f"point count {n} outside [0, {MAX_POINTS}]")
    up = [0] * n
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise IndexError(f"pair ({x}, {y}) out of range for n={n}")
        up[x] |= 1 << y
    _close(n, up)
    for x in range(n):
        if up[x] >> x & 1:
            raise CycleError(f"closure contains {x} < {x}")
    return Poset(n, tuple(up), name)


def antichain(n: int) -> Poset:
    return Poset(n, (0,) * n, f"A{n}")


def chain(n: int) -> Poset:
    return from_strict_pairs(n, [(i, i + 1) for i in range(n - 1)], f"C{n}")


def crown(m: int) -> Poset:
    """The ``2m``-crown: bottoms ``0..m-1``, tops ``m..2m-1``, bottom ``i``
    below tops ``i`` and ``i+1 mod m``."""
    if m < 2:
        raise ValueError("a crown needs m >= 2")
    pairs = []
    for i in range(m):
        pairs.append((i, m + i))
        pairs.append((i, m + (i + 1) % m))
    return from_strict_pairs(2 * m, pairs, f"{2 * m}-crown")


def ordinal_sum(parts: Sequence[Poset]) -> Poset:
    """Carriers concatenated in order; every point of an earlier summand lies
    below every point of a later one."""
    if not parts:
        raise ValueError("ordinal sum of an empty list")
    total = sum(p.n for p in parts)
    up = []
    offset = 0
    for p in parts:
        above = ((1 << total) - 1) & ~((1 << (offset + p.n)) - 1)
        for x in p.points:
            up.append(p.up[x] << offset | above)
        offset += p.n
    return Poset(total, tuple(up))


# --- levels -------------------------------------------------------------------


@dataclass(frozen=True)
class LevelStructure:
    level: tuple[int, ...]  # point -> level index
    levels: tuple[int, ...]  # level index -> point mask

    @property
    def height(self) -> int:
        return len(self.levels) - 1

    def level_points(self, k: int) -> list[int]:
        return bits(self.levels[k])

    def span(self, k1: int, k2: int) -> int:
        """Mask of ``P(k1 -> k2)``."""
        m = 0
        for k in range(max(k1, 0), min(k2, self.height) + 1):
            m |= self.levels[k]
        return m


def level_structure(P: Poset) -> LevelStructure:
    level = [0] * P.n
    levels = []
    rest = P.all_mask
    while rest:
        mins = 0
        for x in bits(rest):
            if not P.down[x] & rest:
                mins |= 1 << x
        for x in bits(mins):
            level[x] = len(levels)
        levels.append(mins)
        rest &= ~mins
    return LevelStructure(tuple(level), tuple(levels))


def width(P: Poset) -> int:
    """Largest antichain size, via Dilworth: ``n`` minus a maximum matching
    of the comparability bipartite graph."""
    match_of = [-1] * P.n  # right vertex -> left vertex

    def augment(x, seen):
        for y in bits(P.up[x]):
            if seen[y]:
                continue
            seen[y] = True
            if match_of[y] < 0 or augment(match_of[y], seen):
                match_of[y] = x
                return True
        return False

    matched = sum(augment(x, [False] * P.n) for x in P.points)
    return P.n - matched


def has_antichain_of_size(P: Poset, size: int) -> bool:
    """Backtracking test that stops at the first antichain of ``size`` points."""

    def extend(cands: int, need: int) -> bool:
        if need == 0:
            return True
        while cands:
            if bin(cands).count("1") < need:
                return False
            low = cands & -cands
            x = low.bit_length() - 1
            cands ^= low
            if extend(cands & ~(P.up[x] | P.down[x]), need - 1):
                return True
        return False

    return extend(P.all_mask, size)


def width_at_most(P: Poset, k: int) -> bool:
    return not has_antichain_of_size(P, k + 1)


def height_width(P: Poset) -> tuple[int, int]:
    if P.n == 0:
        raise EmptyPosetError("empty poset has no height")
    return level_structure(P).height, width(P)


# --- level pair types -----------------------------------------------------------


class PairType(enum.Enum):
    T22 = "22"
    T23 = "23"
    T32 = "32"
    T33 = "33"
    T2C = "2C"
    T3C = "3C"
    CROWN6 = "6-crown"
    OTHER = "other"


def pair_type(P: Poset, a: int, b: int) -> PairType:
    """Type of the induced poset on the antichains ``a`` (lower) and ``b``."""
    na, nb = bin(a).count("1"), bin(b).count("1")
    if na not in (2, 3) or nb not in (2, 3):
        raise ShapeError(f"level sizes {na}, {nb} not in {{2, 3}}")
    if not (P.is_antichain(a) and P.is_antichain(b)) or a & b:
        return PairType.OTHER
    for y in bits(b):
        if P.up[y] & a:
            return PairType.OTHER
    up_deg = [bin(P.up[x] & b).count("1") for x in bits(a)]
    down_deg = [bin(P.down[y] & a).count("1") for y in bits(b)]
    if all(d == nb for d in up_deg):
        return PairType(f"{na}{nb}")
    if na == nb and all(d == 1 for d in up_deg) and all(d == 1 for d in down_deg):
        return PairType.T2C if na == 2 else PairType.T3C
    if na == nb == 3 and all(d == 2 for d in up_deg) and all(d == 2 for d in down_deg):
        # a 2-regular bipartite graph on 3 + 3 vertices is a 6-cycle
        return PairType.CROWN6
    return PairType.OTHER


AUTOMORPHIC_PAIRS = frozenset(
    {PairType.T22, PairType.T23, PairType.T32, PairType.T33, PairType.T2C, PairType.T3C, PairType.CROWN6}
)


def level_pair_types(P: Poset, ls: LevelStructure | None = None) -> list[PairType]:
    """Types of the consecutive pairs ``P(k-1, k)``; OTHER for odd-sized levels."""
    ls = ls or level_structure(P)
    out = []
    for k in range(1, ls.height + 1):
        try:
            out.append(pair_type(P, ls.levels[k - 1], ls.levels[k]))
        except ShapeError:
            out.append(PairType.OTHER)
    return out


def is_automorphic_width3(P: Poset) -> bool:
    """Level-pair criterion for automorphy of posets of width at most three."""
    if not width_at_most(P, 3):
        raise WidthError("width exceeds three")
    ls = level_structure(P)
    for k in range(ls.height + 1):
        for l in range(k + 1, ls.height + 1):
            try:
                t = pair_type(P, ls.levels[k], ls.levels[l])
            except ShapeError:
                return False
            if t not in AUTOMORPHIC_PAIRS:
                return False
    return True


def is_4crown_stack(P: Poset, mask: int | None = None, allow_antichain: bool = True) -> bool:
    """Whether the induced poset on ``mask`` is a 2-antichain (if allowed) or
    an ordinal sum of two or more 2-antichains."""
    if mask is None:
        mask = P.all_mask
    Q, _ = P.induced(bits(mask))
    if Q.n % 2 or Q.n == 0:
        return False
    ls = level_structure(Q)
    if any(bin(l).count("1") != 2 for l in ls.levels):
        return False
    if ls.height == 0:
        return allow_antichain
    return all(Q.all_below(ls.levels[k], ls.levels[k + 1]) for k in range(ls.height))


# --- retractable and irreducible points ------------------------------------------


def retractable_points(P: Poset) -> int:
    out = 0
    for a in P.points:
        for b in P.points:
            if b != a and not P.down[a] & ~P.downset(b) and not P.up[a] & ~P.upset(b):
                out |= 1 << a
                break
    return out


def irreducible_points(P: Poset) -> int:
    out = 0
    for a in P.points:
        if bin(P.lower_covers(a)).count("1") == 1 or bin(P.upper_covers(a)).count("1") == 1:
            out |= 1 << a
    return out


def retractable_and_irreducible_points(P: Poset) -> tuple[set[int], set[int]]:
    return set(bits(retractable_points(P))), set(bits(irreducible_points(P)))


# --- towers ----------------------------------------------------------------------


def ordinal_cuts(P: Poset, ls: LevelStructure | None = None) -> list[int]:
    """Level indices ``k`` with ``P(0 -> k) < P(k+1 -> h)``."""
    ls = ls or level_structure(P)
    return [k for k in range(ls.height) if P.all_below(ls.span(0, k), ls.span(k + 1, ls.height))]


def ordinal_summands(P: Poset) -> list[int]:
    """Masks of the finest ordinal-sum decomposition (bottom summand first)."""
    if P.n == 0:
        return []
    ls = level_structure(P)
    out = []
    start = 0
    for k in ordinal_cuts(P, ls) + [ls.height]:
        out.append(ls.span(start, k))
        start = k + 1
    return out


def tower_decomposition(P: Poset) -> list[set[int]] | None:
    """Summands of ``P`` as a tower of nice sections, or None if ``P`` is not one."""
    from .sections import is_nice, is_section

    if P.n == 0 or not width_at_most(P, 3):
        return None
    out = []
    for m in ordinal_summands(P):
        Q, _ = P.induced(bits(m))
        if not (is_section(Q) and is_nice(Q)):
            return None
        out.append(set(bits(m)))
    return out
