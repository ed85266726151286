"""Width-three sections of horizon two, encoded by binary words.

Bit ``k`` (1-based) of a code gives the type of the level pair ``P(k-1, k)``:
``1`` for a 6-crown, ``0`` for three disjoint 2-chains (3C).  Point
``c[k][j]`` (level ``k``, main chain ``j``) gets id ``3k + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Mapping, Sequence

from .maps import RetractionMap, compose, inverse, is_automorphism, is_retraction
from .poset import (
    PairType,
    Poset,
    antichain,
    bits,
    from_strict_pairs,
    irreducible_points,
    level_pair_types,
    pair_type,
    retractable_points,
)


class NotASection(ValueError):
    pass


class HeightError(ValueError):
    pass


class ExtensionError(ValueError):
    pass


@dataclass(frozen=True)
class SectionCode:
    bits: str

    def __post_init__(self):
        if not self.bits or set(self.bits) - {"0", "1"}:
            raise ValueError(f"bad section code {self.bits!r}")

    @property
    def height(self) -> int:
        return len(self.bits)

    @property
    def point_count(self) -> int:
        return 3 * (len(self.bits) + 1)

    @property
    def is_lower_segment(self) -> bool:
        return self.bits[0] == "1"

    @property
    def is_upper_segment(self) -> bool:
        return self.bits[-1] == "1"

    @property
    def in_n2(self) -> bool:
        return len(self.bits) >= 2 and self.bits[0] == self.bits[-1] == "1"

    @property
    def classes(self) -> set[str]:
        out = {"SEG"}
        if self.is_lower_segment:
            out.add("LS")
        if self.is_upper_segment:
            out.add("US")
        if self.in_n2:
            out.add("N2")
        return out

    def reversed(self) -> SectionCode:
        return SectionCode(self.bits[::-1])

    def __str__(self):
        return self.bits


def _code(code) -> str:
    return code.bits if isinstance(code, SectionCode) else str(code)


def codes_of_height(n: int, cls: str = "SEG") -> list[str]:
    """All codes of height ``n`` in class SEG, LS, US or N2, in the order
    1...1 first (descending binary value)."""
    out = []
    for v in range(2**n - 1, -1, -1):
        c = format(v, f"0{n}b")
        if cls in SectionCode(c).classes:
            out.append(c)
    return out


@dataclass(frozen=True)
class SectionCoordinates:
    """``grid[k][j]`` is the point on level ``k`` of main chain ``j``."""

    grid: tuple[tuple[int, int, int], ...]

    @property
    def height(self) -> int:
        return len(self.grid) - 1

    def level(self, p: int) -> int:
        return self._index()[p][0]

    def chain(self, p: int) -> int:
        return self._index()[p][1]

    def _index(self):
        return {p: (k, j) for k, row in enumerate(self.grid) for j, p in enumerate(row)}

    def point(self, k: int, j: int) -> int:
        return self.grid[k][j % 3]


def build_section(code) -> tuple[Poset, SectionCoordinates]:
    """Three chains ``C_j``; each 6-crown pair adds ``c[k][j] < c[k+1][j+1]``;
    then every level lies below every level two or more steps higher."""
    word = _code(code)
    SectionCode(word)
    h = len(word)
    pairs = []
    for k, b in enumerate(word):
        for j in range(3):
            pairs.append((3 * k + j, 3 * (k + 1) + j))
            if b == "1":
                pairs.append((3 * k + j, 3 * (k + 1) + (j + 1) % 3))
    for k in range(h + 1):
        for l in range(k + 2, h + 1):
            pairs.extend((3 * k + i, 3 * l + j) for i in range(3) for j in range(3))
    P = from_strict_pairs(3 * (h + 1), pairs, name=word)
    grid = tuple((3 * k, 3 * k + 1, 3 * k + 2) for k in range(h + 1))
    return P, SectionCoordinates(grid)


def section(code) -> Poset:
    return build_section(code)[0]


def section_coordinates(P: Poset) -> SectionCoordinates | None:
    """Main-chain labelling witnessing that ``P`` is a width-three section."""
    ls = P.ls
    h = ls.height
    if P.n == 0 or h < 1 or any(bin(l).count("1") != 3 for l in ls.levels):
        return None
    rows: list[tuple[int, int, int]] = []

    def compatible(row, k) -> bool:
        # c[k',i] < c[k,j]  =>  c[k',i+1] < c[k,j+1]  and the converse direction
        for kk in range(k):
            prev = rows[kk]
            for i in range(3):
                for j in range(3):
                    if P.lt(prev[i], row[j]) and not P.lt(prev[(i + 1) % 3], row[(j + 1) % 3]):
                        return False
        return True

    def extend(k) -> bool:
        if k > h:
            return True
        for row in permutations(ls.level_points(k)):
            if k > 0 and not all(P.lt(rows[k - 1][j], row[j]) for j in range(3)):
                continue
            if not compatible(row, k):
                continue
            rows.append(row)
            if extend(k + 1):
                return True
            rows.pop()
        return False

    if not extend(0):
        return None
    for k in range(h):
        if pair_type(P, ls.levels[k], ls.levels[k + 1]) is PairType.T33:
            return None
    return SectionCoordinates(tuple(rows))


def is_two_antichain(P: Poset) -> bool:
    return P.n == 2 and P.up == (0, 0)


def is_section(P: Poset) -> bool:
    return is_two_antichain(P) or section_coordinates(P) is not None


def _nice_by_definition(P: Poset) -> bool:
    for x in P.points:
        for y in bits(P.up[x]):
            if not P.up[x] & ~P.upset(y) or not P.down[y] & ~P.downset(x):
                return False
    return True


def nice_criteria(P: Poset) -> tuple[bool, bool, bool]:
    """(definition holds, no retractable point, no irreducible point)."""
    return _nice_by_definition(P), retractable_points(P) == 0, irreducible_points(P) == 0


def is_nice(P: Poset) -> bool:
    if is_two_antichain(P):
        return True
    if section_coordinates(P) is None:
        raise NotASection("is_nice needs a section")
    by_def, no_retractable, no_irreducible = nice_criteria(P)
    assert by_def == no_retractable == no_irreducible, "niceness characterisations disagree"
    return by_def


def horizon(P: Poset) -> int:
    ls = P.ls
    h = ls.height
    if h < 2:
        raise HeightError("horizon needs height >= 2")
    for eta in range(1, h + 1):
        if all(
            pair_type(P, ls.levels[k], ls.levels[k + eta]) is PairType.T33 for k in range(h - eta + 1)
        ):
            return eta
    raise NotASection("top and bottom levels are not fully comparable")


def code_of(P: Poset) -> SectionCode:
    if section_coordinates(P) is None:
        raise NotASection("code_of needs a width-three section")
    word = []
    for t in level_pair_types(P):
        if t is PairType.CROWN6:
            word.append("1")
        elif t is PairType.T3C:
            word.append("0")
        else:
            raise NotASection(f"consecutive level pair of type {t.value}")
    return SectionCode("".join(word))


def segment_mask(P: Poset, k1: int, k2: int) -> int:
    if not 0 <= k1 <= k2 <= P.ls.height:
        raise ValueError(f"bad segment bounds {k1}, {k2}")
    return P.ls.span(k1, k2)


def segment(P: Poset, k1: int, k2: int) -> Poset:
    """Induced sub-poset on ``P(k1 -> k2)`` (relabelled)."""
    return P.induced(bits(segment_mask(P, k1, k2)))[0]


# --- automorphisms and conjugation ------------------------------------------------


def extend_level0_permutation(P: Poset, perm: Mapping[int, int]) -> tuple[int, ...]:
    """The automorphism restricting to ``perm`` on the bottom level.

    Levels are matched upward via the relation between consecutive levels,
    which determines the whole order of a segment of horizon two.
    """
    ls = P.ls
    if set(perm) != set(ls.level_points(0)) or set(perm.values()) != set(perm):
        raise ExtensionError("perm must permute the bottom level")
    sigma = dict(perm)
    for k in range(1, ls.height + 1):
        below = ls.levels[k - 1]
        pattern = {}
        for y in ls.level_points(k):
            pattern.setdefault(P.down[y] & below, []).append(y)
        for y in ls.level_points(k):
            target = 0
            for x in bits(P.down[y] & below):
                target |= 1 << sigma[x]
            hits = pattern.get(target, [])
            if len(hits) != 1:
                raise ExtensionError(f"cover pattern of {y} has {len(hits)} matches")
            sigma[y] = hits[0]
    out = tuple(sigma[x] for x in P.points)
    if not is_automorphism(P, out):
        raise ExtensionError("extension is not an automorphism")
    return out


def bottom_automorphisms(P: Poset) -> list[tuple[int, ...]]:
    """The extensions of all permutations of ``P(0)``."""
    base = P.ls.level_points(0)
    return [extend_level0_permutation(P, dict(zip(base, p))) for p in permutations(base)]


def conjugate_retraction(P: Poset, r: RetractionMap, a: Sequence[int]) -> RetractionMap:
    """``a o r o a^-1``: a retraction onto ``a[image(r)]``."""
    return RetractionMap(P, compose(a, compose(r.map, inverse(a))))


def retraction_with_bottom(P: Poset, r: RetractionMap, f: Mapping[int, int]) -> RetractionMap:
    """Conjugate ``r`` so that it agrees with the idempotent map ``f`` on ``P(0)``.

    Needs ``r[P(0)] = R(0)`` inside ``P(0)`` and ``|f[P(0)]| = |R(0)|``.
    """
    base = P.ls.level_points(0)
    r0 = sorted({r.map[x] for x in base})
    f0 = sorted({f[x] for x in base})
    if any(P.ls.level[p] != 0 for p in r0) or len(r0) != len(f0):
        raise ValueError("bottom images do not match")
    for x in base:
        if f[f[x]] != f[x]:
            raise ValueError("f is not idempotent")
    # send each fibre of r on P(0) onto the fibre of f of the same size
    src = sorted(r0, key=lambda p: (sum(r.map[x] == p for x in base), p))
    dst = sorted(f0, key=lambda p: (sum(f[x] == p for x in base), p))
    perm = {}
    for p, q in zip(src, dst):
        rest_p = [x for x in base if r.map[x] == p and x != p]
        rest_q = [x for x in base if f[x] == q and x != q]
        if len(rest_p) != len(rest_q):
            raise ValueError("fibre sizes differ")
        perm[p] = q
        perm.update(zip(rest_p, rest_q))
    sigma = extend_level0_permutation(P, perm)
    out = conjugate_retraction(P, r, sigma)
    assert is_retraction(P, out.map)
    assert all(out.map[x] == f[x] for x in base)
    return out


def two_antichain() -> Poset:
    return antichain(2)
