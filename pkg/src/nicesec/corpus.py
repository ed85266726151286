"""Small posets up to isomorphism, grown one maximal element at a time.

Removing a maximal point of a poset leaves a poset, so every poset on
``n + 1`` points is some poset on ``n`` points with a new maximum placed
over one of its down-sets.  Width never drops when a point is added, which
lets a width bound prune early.
"""

from __future__ import annotations

from .maps import is_isomorphic
from .poset import Poset, antichain, bits, width_at_most


def down_sets(P: Poset) -> list[int]:
    """All down-closed subsets of ``P`` as masks, the empty one included."""
    out = []
    for m in range(1 << P.n):
        if all(P.down[x] & ~m == 0 for x in bits(m)):
            out.append(m)
    return out


def add_maximal(P: Poset, below: int) -> Poset:
    up = list(P.up)
    for x in bits(below):
        up[x] |= 1 << P.n
    return Poset(P.n + 1, tuple(up) + (0,))


def invariant(P: Poset) -> tuple:
    level = P.ls.level
    return tuple(
        sorted((level[x], bin(P.down[x]).count("1"), bin(P.up[x]).count("1")) for x in P.points)
    )


def posets_up_to_iso(max_points: int, max_width: int | None = None) -> dict[int, list[Poset]]:
    """Representatives of all posets on 1..max_points points, by size."""
    layer = [antichain(1)]
    out = {1: layer}
    for n in range(2, max_points + 1):
        buckets: dict[tuple, list[Poset]] = {}
        for P in layer:
            for d in down_sets(P):
                Q = add_maximal(P, d)
                if max_width is not None and not width_at_most(Q, max_width):
                    continue
                key = invariant(Q)
                bucket = buckets.setdefault(key, [])
                if not any(is_isomorphic(Q, R) for R in bucket):
                    bucket.append(Q)
        layer = [Q for key in sorted(buckets) for Q in buckets[key]]
        out[n] = layer
    return out


def width3_connected_corpus(max_points: int = 7) -> list[Poset]:
    """Connected posets of width at most three on up to ``max_points`` points."""
    out = []
    for n, ps in posets_up_to_iso(max_points, 3).items():
        out.extend(P for P in ps if P.is_connected())
    return out
