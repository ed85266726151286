"""Retractions of N_2 posets onto towers containing a 32 (or 23) level pair,
and a brute-force minimal-automorphy test for small posets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .maps import (
    Budget,
    RetractionMap,
    _budget,
    all_retracts,
    find_fpf_automorphism,
    find_fpf_endomorphism,
    is_retraction,
    retraction_search,
)
from .poset import (
    PairType,
    Poset,
    ShapeError,
    bits,
    level_pair_types,
    mask_of,
    tower_decomposition,
)
from .retractions import normalize_retraction_bottom
from .sections import is_nice, retraction_with_bottom, section_coordinates
from .stacks import two_antichains

MINIMAL_AUTOMORPHIC_MAX_POINTS = 14


def v_segment_retraction(V: Poset) -> RetractionMap:
    """Retraction of a segment ``V`` of even height whose levels from 1 up
    are a 3C stack: the third chain is folded onto the second and odd levels
    are pushed onto the next even level."""
    coords = section_coordinates(V)
    h = V.ls.height
    if coords is None or h < 2 or h % 2:
        raise ShapeError("V must be a section of even height >= 2")
    if any(t is not PairType.T3C for t in level_pair_types(V)[1:]):
        raise ShapeError("V(1 -> h) must be a 3C stack")
    y = coords.point
    f = list(V.points)
    for i in range(1, h + 1):
        for j in range(3):
            if i % 2:
                f[y(i, j)] = y(i + 1, min(j, 1))
            else:
                f[y(i, j)] = y(i, min(j, 1))
    r = RetractionMap(V, tuple(f))
    assert is_retraction(V, r.map)
    return r


@dataclass(frozen=True)
class Theo32Decomposition:
    dual: bool  # found on the dual poset (the image then has a 23 pair)
    h_U: int
    h_V: int
    h_W: int
    w_witness: RetractionMap  # on the segment W, relabelled
    retraction: RetractionMap  # on P

    @property
    def heights(self) -> tuple[int, int, int]:
        return self.h_U, self.h_V, self.h_W

    def to_json(self) -> dict:
        return {
            "orientation": "dual" if self.dual else "primal",
            "heights": list(self.heights),
            "w_witness": list(self.w_witness.map),
            "map": list(self.retraction.map),
        }


def _candidate_cuts(code: str) -> Iterator[tuple[int, int, int]]:
    h = len(code)
    for h_u in range(1, h):
        u = code[:h_u]
        if not (u == "1" or (len(u) >= 2 and u[0] == u[-1] == "1")):
            continue
        for h_v in range(2, h - h_u - 2, 2):
            v = code[h_u : h_u + h_v]
            w = code[h_u + h_v :]
            if set(v[1:]) != {"0"}:
                continue
            if len(w) >= 3 and w[0] == w[-1] == "1":
                yield h_u, h_v, len(w)


def _tower_blocks(W: Poset) -> list[int]:
    """Possible summands: 2-antichains and nice segments of positive height."""
    ls = W.ls
    out = two_antichains(W, W.all_mask)
    for a in range(ls.height + 1):
        for b in range(a + 1, ls.height + 1):
            Q, _ = W.induced(bits(ls.span(a, b)))
            if is_nice(Q):
                out.append(ls.span(a, b))
    return out


def tower_images(W: Poset) -> Iterator[tuple[int, ...]]:
    """Towers inside ``W`` whose two lowest summands are 2-antichains and
    whose height is at least 2, as tuples of summand masks."""
    blocks = _tower_blocks(W)
    pairs = [b for b in blocks if bin(b).count("1") == 2]
    above = {a: [b for b in blocks if not a & b and W.all_below(a, b)] for a in blocks}

    def grow(seq):
        if len(seq) >= 3:
            yield tuple(seq)
        for b in above[seq[-1]]:
            seq.append(b)
            yield from grow(seq)
            seq.pop()

    for a0 in pairs:
        for a1 in above[a0]:
            if bin(a1).count("1") == 2:
                yield from grow([a0, a1])


def find_w_witness(W: Poset, budget: Budget | None = None) -> RetractionMap | None:
    """Retraction of ``W`` onto a tower ``S`` as in :func:`tower_images` with
    ``s[W(1)]`` disjoint from ``S(0)``."""
    budget = _budget(budget)
    w1 = W.ls.levels[1]
    for blocks in tower_images(W):
        s0 = blocks[0]
        if s0 & w1:
            continue
        image = 0
        for b in blocks:
            image |= b
        forbid = {x: s0 for x in bits(w1)}
        found = retraction_search(W, image, forbid=forbid, budget=budget)
        if found is not None:
            return RetractionMap(W, tuple(found[x] for x in W.points))
    return None


def _has_pair(R: Poset, kind: PairType) -> bool:
    return kind in level_pair_types(R)


def _assemble(P: Poset, h_u: int, h_v: int, witness: RetractionMap, budget) -> RetractionMap | None:
    ls = P.ls
    v_mask = ls.span(h_u, h_u + h_v)
    w_mask = ls.span(h_u + h_v, ls.height)
    V, v_old = P.induced(bits(v_mask))
    W, w_old = P.induced(bits(w_mask))
    t = v_segment_retraction(V)
    try:
        s = normalize_retraction_bottom(W, witness, budget)
    except ShapeError:
        return None
    # t on the shared level V(h_V) = W(0), read in W's ids
    w_new = {p: i for i, p in enumerate(w_old)}
    f = {w_new[v_old[x]]: w_new[v_old[t.map[x]]] for x in V.ls.level_points(V.ls.height)}
    try:
        s = retraction_with_bottom(W, s, f)
    except ValueError:
        return None
    out = list(P.points)
    for i, x in enumerate(v_old):
        out[x] = v_old[t.map[i]]
    for i, x in enumerate(w_old):
        out[x] = w_old[s.map[i]]
    r = RetractionMap(P, tuple(out))
    return r if is_retraction(P, r.map) else None


def _theo32_oriented(P: Poset, code: str, budget) -> tuple | None:
    ls = P.ls
    for h_u, h_v, h_w in _candidate_cuts(code):
        W, _ = P.induced(bits(ls.span(h_u + h_v, ls.height)))
        witness = find_w_witness(W, budget)
        if witness is None:
            continue
        r = _assemble(P, h_u, h_v, witness, budget)
        if r is None:
            continue
        R, _ = P.induced(sorted(r.image))
        if tower_decomposition(R) is None or not _has_pair(R, PairType.T32):
            continue
        return h_u, h_v, h_w, witness, r
    return None


def check_theo32(P: Poset, code: str, budget: Budget | None = None) -> Theo32Decomposition | None:
    """Decomposition ``U + V + W`` of the N_2 poset ``P`` (with code ``code``)
    giving a retraction onto a tower with a 32 pair, or with a 23 pair when
    found on the dual; None if no decomposition has a W-witness."""
    budget = _budget(budget)
    if not (len(code) >= 2 and code[0] == code[-1] == "1"):
        raise ValueError(f"{code} is not an N_2 code")
    found = _theo32_oriented(P, code, budget)
    dual = False
    if found is None:
        found = _theo32_oriented(P.dual(), code[::-1], budget)
        dual = True
    if found is None:
        return None
    h_u, h_v, h_w, witness, r = found
    r = RetractionMap(P, r.map)
    R, _ = P.induced(sorted(r.image))
    assert is_retraction(P, r.map)
    assert _has_pair(R, PairType.T23 if dual else PairType.T32)
    return Theo32Decomposition(dual, h_u, h_v, h_w, witness, r)


# --- minimal automorphy ----------------------------------------------------------------


def minimal_automorphy_witness(P: Poset, budget: Budget | None = None) -> RetractionMap | None:
    """A proper retraction whose image lacks the fixed point property, if any."""
    budget = _budget(budget)
    for r in all_retracts(P, budget, proper=True):
        R, _ = P.induced(sorted(r.image))
        if find_fpf_endomorphism(R, budget) is not None:
            return r
    return None


def is_minimal_automorphic_small(P: Poset, budget: Budget | None = None) -> bool:
    """Fixed-point-free automorphism and every proper retract has the fixed
    point property, by exhaustive search (at most 14 points)."""
    if P.n > MINIMAL_AUTOMORPHIC_MAX_POINTS:
        raise ValueError(f"{P.n} points exceed {MINIMAL_AUTOMORPHIC_MAX_POINTS}")
    budget = _budget(budget)
    if find_fpf_automorphism(P, budget) is None:
        return False
    return minimal_automorphy_witness(P, budget) is None


def image_mask_levels(r: RetractionMap) -> list[int]:
    R, old = r.base.induced(sorted(r.image))
    return [mask_of(old[i] for i in bits(l)) for l in R.ls.levels]
