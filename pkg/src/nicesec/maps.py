"""Order-preserving self-maps: retractions, fixed-point-free endomorphisms,
isomorphisms.

All searches are plain backtracking with forward checking over points in
increasing ``(level, id)`` order and candidate images in increasing id, so
results are reproducible.  Each search counts nodes against a
:class:`Budget`; running out raises :class:`BudgetExceeded`, which callers
must keep apart from a definite "no such map".
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .poset import Poset, bits, mask_of

DEFAULT_BUDGET = 10**8
FPF_MAX_POINTS = 20
ISO_MAX_POINTS = 24


class BudgetExceeded(RuntimeError):
    pass


class Budget:
    def __init__(self, limit: int = DEFAULT_BUDGET):
        self.limit = limit
        self.nodes = 0

    def tick(self, k: int = 1) -> None:
        self.nodes += k
        if self.nodes > self.limit:
            raise BudgetExceeded(f"node budget {self.limit} exhausted")


def _budget(budget):
    return budget if budget is not None else Budget()


@dataclass(frozen=True, eq=False)
class RetractionMap:
    """A total idempotent order-preserving self-map of ``base``."""

    base: Poset
    map: tuple[int, ...]

    def __post_init__(self):
        if len(self.map) != self.base.n:
            raise ValueError("map must be total")

    @property
    def image(self) -> frozenset[int]:
        return frozenset(x for x in self.base.points if self.map[x] == x)

    @property
    def image_mask(self) -> int:
        return mask_of(self.image)

    def __call__(self, x: int) -> int:
        return self.map[x]

    def fiber(self, v: int) -> set[int]:
        return {x for x in self.base.points if self.map[x] == v}

    def to_json(self) -> dict:
        return {"map": list(self.map)}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, base: Poset, data: dict | str) -> RetractionMap:
        if isinstance(data, str):
            data = json.loads(data)
        return cls(base, tuple(data["map"]))


def is_order_preserving(P: Poset, f: Mapping[int, int] | Sequence[int], carrier: int | None = None) -> bool:
    """``x < y  =>  f(x) <= f(y)`` on the points of ``carrier``."""
    dom = bits(P.all_mask if carrier is None else carrier)
    for x in dom:
        fx = f[x]
        for y in bits(P.up[x] & (P.all_mask if carrier is None else carrier)):
            if not P.le(fx, f[y]):
                return False
    return True


def is_retraction(P: Poset, f: Mapping[int, int] | Sequence[int], carrier: int | None = None) -> bool:
    """Independent check that ``f`` is a retraction of the induced poset on
    ``carrier`` (default: all of ``P``).  Uses no search code."""
    cmask = P.all_mask if carrier is None else carrier
    dom = bits(cmask)
    if isinstance(f, Mapping):
        if set(f) != set(dom):
            return False
    elif len(f) != P.n:
        return False
    for x in dom:
        fx = f[x]
        if not (0 <= fx < P.n) or not cmask >> fx & 1:
            return False
        if f[fx] != fx:
            return False
    return is_order_preserving(P, f, cmask)


def check_retraction(r: RetractionMap) -> bool:
    return is_retraction(r.base, r.map)


def is_fixed_point_free(f: Sequence[int] | Mapping[int, int], points: Iterable[int]) -> bool:
    return all(f[x] != x for x in points)


# --- retraction onto a prescribed image -----------------------------------------


def retraction_search(
    P: Poset,
    image: int,
    carrier: int | None = None,
    forbid: Mapping[int, int] | None = None,
    budget: Budget | None = None,
) -> dict[int, int] | None:
    """Retraction of the induced poset on ``carrier`` with image exactly
    ``image`` (masks over ``P``'s points), as a dict, or None.

    ``forbid[x]`` is a mask of images ruled out for ``x``.
    """
    budget = _budget(budget)
    carrier = P.all_mask if carrier is None else carrier
    if image & ~carrier:
        raise ValueError("image must lie inside the carrier")
    level = P.ls.level
    free = sorted(bits(carrier & ~image), key=lambda x: (level[x], x))
    fixed = bits(image)
    dom = {}
    for x in free:
        d = image
        for b in bits(P.down[x] & image):
            d &= P.upset(b)
        for b in bits(P.up[x] & image):
            d &= P.downset(b)
        if forbid and x in forbid:
            d &= ~forbid[x]
        if not d:
            return None
        dom[x] = d
    if forbid:
        for b in fixed:
            if b in forbid and forbid[b] >> b & 1:
                return None
    order_up = {x: P.up[x] & carrier for x in free}
    order_down = {x: P.down[x] & carrier for x in free}
    free_mask = mask_of(free)
    assign: dict[int, int] = {}

    def solve(i: int, dom: dict[int, int]) -> bool:
        if i == len(free):
            return True
        x = free[i]
        for a in bits(dom[x]):
            budget.tick()
            above = order_up[x] & free_mask
            below = order_down[x] & free_mask
            ok = True
            nd = dict(dom)
            ua, da = P.upset(a), P.downset(a)
            for y in bits(above):
                if y in assign:
                    continue
                v = nd[y] & ua
                if not v:
                    ok = False
                    break
                nd[y] = v
            if ok:
                for y in bits(below):
                    if y in assign:
                        continue
                    v = nd[y] & da
                    if not v:
                        ok = False
                        break
                    nd[y] = v
            if not ok:
                continue
            assign[x] = a
            if solve(i + 1, nd):
                return True
            del assign[x]
        return False

    if not solve(0, dom):
        return None
    out = {b: b for b in fixed}
    out.update(assign)
    return out


def find_retraction_onto(P: Poset, R: Iterable[int], budget: Budget | None = None) -> RetractionMap | None:
    """Retraction of ``P`` whose image is exactly the point set ``R``."""
    image = mask_of(R)
    if image & ~P.all_mask:
        raise IndexError("image point out of range")
    found = retraction_search(P, image, budget=budget)
    if found is None:
        return None
    return RetractionMap(P, tuple(found[x] for x in P.points))


def all_retracts(P: Poset, budget: Budget | None = None, proper: bool = False):
    """Yield one retraction per retract image (subsets in increasing mask order)."""
    budget = _budget(budget)
    full = P.all_mask
    for image in range(1, full + 1):
        if proper and image == full:
            continue
        found = retraction_search(P, image, budget=budget)
        if found is not None:
            yield RetractionMap(P, tuple(found[x] for x in P.points))


# --- fixed-point-free endomorphisms ------------------------------------------------


def find_fpf_endomorphism(
    P: Poset, budget: Budget | None = None, max_points: int = FPF_MAX_POINTS
) -> tuple[int, ...] | None:
    """A fixed-point-free order-preserving self-map, or None when ``P`` has
    the fixed point property."""
    if P.n > max_points:
        raise ValueError(f"{P.n} points exceed the fpf search limit {max_points}")
    budget = _budget(budget)
    if P.n == 0:
        return ()
    level = P.ls.level
    order = sorted(P.points, key=lambda x: (level[x], x))
    full = P.all_mask
    dom = {x: full & ~(1 << x) for x in order}
    assign: dict[int, int] = {}

    def solve(i, dom):
        if i == len(order):
            return True
        x = order[i]
        for a in bits(dom[x]):
            budget.tick()
            nd = dict(dom)
            ok = True
            ua, da = P.upset(a), P.downset(a)
            for y in bits(P.up[x]):
                if y not in assign:
                    nd[y] &= ua
                    if not nd[y]:
                        ok = False
                        break
            if ok:
                for y in bits(P.down[x]):
                    if y not in assign:
                        nd[y] &= da
                        if not nd[y]:
                            ok = False
                            break
            if not ok:
                continue
            assign[x] = a
            if solve(i + 1, nd):
                return True
            del assign[x]
        return False

    if not solve(0, dom):
        return None
    return tuple(assign[x] for x in P.points)


def has_fixed_point_property(P: Poset, budget: Budget | None = None) -> bool:
    return find_fpf_endomorphism(P, budget) is None


# --- isomorphisms ------------------------------------------------------------------


def _signature(P: Poset, x: int) -> tuple[int, int, int]:
    return (P.ls.level[x], bin(P.down[x]).count("1"), bin(P.up[x]).count("1"))


def isomorphisms(P: Poset, Q: Poset, budget: Budget | None = None, fpf: bool = False):
    """Yield isomorphisms ``P -> Q`` as tuples.  With ``fpf`` (and ``P is Q``
    semantics) only fixed-point-free ones are produced."""
    budget = _budget(budget)
    if P.n != Q.n:
        return
    sp = [_signature(P, x) for x in P.points]
    sq = [_signature(Q, y) for y in Q.points]
    if sorted(sp) != sorted(sq):
        return
    order = sorted(P.points, key=lambda x: (sp[x], x))
    cand = {x: [y for y in Q.points if sq[y] == sp[x] and not (fpf and y == x)] for x in P.points}
    assign: dict[int, int] = {}
    used = [False] * Q.n

    def solve(i):
        if i == len(order):
            yield tuple(assign[x] for x in P.points)
            return
        x = order[i]
        for y in cand[x]:
            if used[y]:
                continue
            budget.tick()
            ok = True
            for z, w in assign.items():
                if P.lt(x, z) != Q.lt(y, w) or P.lt(z, x) != Q.lt(w, y):
                    ok = False
                    break
            if not ok:
                continue
            assign[x] = y
            used[y] = True
            yield from solve(i + 1)
            used[y] = False
            del assign[x]

    yield from solve(0)


def find_isomorphism(P: Poset, Q: Poset, budget: Budget | None = None) -> tuple[int, ...] | None:
    return next(isomorphisms(P, Q, budget), None)


def is_isomorphic(P: Poset, Q: Poset, budget: Budget | None = None, max_points: int = ISO_MAX_POINTS) -> bool:
    if max(P.n, Q.n) > max_points:
        raise ValueError(f"isomorphism test limited to {max_points} points")
    return find_isomorphism(P, Q, budget) is not None


def find_fpf_automorphism(P: Poset, budget: Budget | None = None) -> tuple[int, ...] | None:
    return next(isomorphisms(P, P, budget, fpf=True), None)


def is_automorphism(P: Poset, f: Sequence[int]) -> bool:
    if sorted(f) != list(P.points):
        return False
    return all(P.lt(x, y) == P.lt(f[x], f[y]) for x in P.points for y in P.points)


def compose(f: Sequence[int], g: Sequence[int]) -> tuple[int, ...]:
    """``f o g``."""
    return tuple(f[g[x]] for x in range(len(g)))


def inverse(f: Sequence[int]) -> tuple[int, ...]:
    out = [0] * len(f)
    for x, y in enumerate(f):
        out[y] = x
    return tuple(out)


def brute_force_retractions(P: Poset):
    """Every retraction of a tiny poset by exhaustive enumeration of maps.

    Oracle for tests only: ``n**n`` candidates.
    """
    from itertools import product

    for f in product(P.points, repeat=P.n):
        if is_retraction(P, f):
            yield f

