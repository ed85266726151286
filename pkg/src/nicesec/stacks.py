"""Retractions onto 2-antichains and 4-crown stacks.

A candidate image is a sequence of 2-antichains ``R(0) < R(1) < ...`` with
every point of a level below every point of the next; the induced poset on
their union is then a 4-crown stack (or a 2-antichain for one level).
"""

from __future__ import annotations

from typing import Iterator, Mapping

from .maps import Budget, RetractionMap, _budget, retraction_search
from .poset import Poset, bits


def two_antichains(P: Poset, carrier: int) -> list[int]:
    level = P.ls.level
    pts = sorted(bits(carrier), key=lambda x: (level[x], x))
    out = []
    for i, x in enumerate(pts):
        for y in pts[i + 1 :]:
            if not P.comparable(x, y):
                out.append(1 << x | 1 << y)
    return out


def stack_images(
    P: Poset, carrier: int, min_levels: int = 1, max_levels: int | None = None
) -> Iterator[tuple[int, ...]]:
    """Every 2-antichain stack inside ``carrier``, as a tuple of level masks
    (bottom first), depth-first in a fixed order."""
    pairs = two_antichains(P, carrier)
    above = {a: [b for b in pairs if not a & b and P.all_below(a, b)] for a in pairs}

    def grow(seq):
        if len(seq) >= min_levels:
            yield tuple(seq)
        if max_levels is not None and len(seq) >= max_levels:
            return
        for b in above[seq[-1]]:
            seq.append(b)
            yield from grow(seq)
            seq.pop()

    for a in pairs:
        yield from grow([a])


def union(levels) -> int:
    m = 0
    for l in levels:
        m |= l
    return m


def stack_retraction(
    P: Poset,
    carrier: int,
    levels: tuple[int, ...],
    forbid: Mapping[int, int] | None = None,
    singleton_fiber: int | None = None,
    budget: Budget | None = None,
) -> dict[int, int] | None:
    """Retraction of ``carrier`` onto the stack ``levels``.

    ``singleton_fiber`` is a mask of image points of which at least one must
    be hit by nothing but itself.
    """
    image = union(levels)
    if singleton_fiber is None:
        return retraction_search(P, image, carrier, forbid, budget)
    for v in bits(singleton_fiber & image):
        f = dict(forbid or {})
        for x in bits(carrier & ~image):
            f[x] = f.get(x, 0) | 1 << v
        found = retraction_search(P, image, carrier, f, budget)
        if found is not None:
            return found
    return None


def segment_retract_search(
    P: Poset,
    carrier: int,
    deleted: int = 0,
    allow_antichain: bool = True,
    allow_stack: bool = True,
    budget: Budget | None = None,
) -> tuple[tuple[int, ...], dict[int, int]] | None:
    """First retraction of ``carrier`` minus ``deleted`` onto a 2-antichain
    or a 4-crown stack, as ``(levels, map)``."""
    budget = _budget(budget)
    dom = carrier & ~deleted
    min_levels = 1 if allow_antichain else 2
    max_levels = None if allow_stack else 1
    for levels in stack_images(P, dom, min_levels, max_levels):
        found = stack_retraction(P, dom, levels, budget=budget)
        if found is not None:
            return levels, found
    return None


def oracle_4crown_stack_retract(P: Poset, budget: Budget | None = None) -> RetractionMap | None:
    """Brute-force route: try every 4-crown stack image of height >= 1."""
    found = segment_retract_search(P, P.all_mask, allow_antichain=False, budget=budget)
    if found is None:
        return None
    _, m = found
    return RetractionMap(P, tuple(m[x] for x in P.points))


def count_stack_images(P: Poset, carrier: int | None = None) -> int:
    return sum(1 for _ in stack_images(P, P.all_mask if carrier is None else carrier))
