"""Constructions that reshape or combine retractions of segments of N_2 posets."""

from __future__ import annotations

from itertools import permutations

from .maps import Budget, RetractionMap, is_retraction, retraction_search
from .poset import PairType, Poset, ShapeError, bits, is_4crown_stack, mask_of, pair_type
from .sections import extend_level0_permutation
from .splits import ConditionError, SplitCertificate, SplitKind, assemble_split_retraction
from .stacks import stack_images, stack_retraction


def image_levels(P: Poset, image: int) -> list[int]:
    """Level masks (over ``P``'s ids) of the induced poset on ``image``."""
    Q, old = P.induced(bits(image))
    return [mask_of(old[i] for i in bits(l)) for l in Q.ls.levels]


def find_stack_retraction(
    P: Poset,
    carrier: int | None = None,
    singleton: str | None = None,
    min_levels: int = 2,
    budget: Budget | None = None,
) -> dict[int, int] | None:
    """Retraction of ``carrier`` onto a 4-crown stack (or, with
    ``min_levels=1``, a 2-antichain); ``singleton`` in {"top", "bottom"}
    asks for a point of that image level whose fibre is just itself."""
    carrier = P.all_mask if carrier is None else carrier
    for levels in stack_images(P, carrier, min_levels):
        want = None
        if singleton == "top":
            want = levels[-1]
        elif singleton == "bottom":
            want = levels[0]
        found = stack_retraction(P, carrier, levels, singleton_fiber=want, budget=budget)
        if found is not None:
            return found
    return None


def singleton_fiber_points(f: dict[int, int], level: int) -> list[int]:
    return [v for v in bits(level) if sum(1 for y in f.values() if y == v) == 1]


# --- bottom normalisation ---------------------------------------------------------------


def check_bottom_shape(P: Poset, r: RetractionMap, budget: Budget | None = None) -> bool:
    """For a lower segment with a 6-crown bottom pair and a retraction whose
    image bottom is a 2-antichain: ``R(0)`` lies in ``P(0,1)`` and meets
    ``P(0)``; if it meets ``P(1)``, then ``R(1 -> top)`` is a retract of
    ``P(2 -> h)``."""
    ls = P.ls
    lv = image_levels(P, r.image_mask)
    r0 = lv[0]
    if r0 & ~ls.span(0, 1) or not r0 & ls.levels[0]:
        return False
    if r0 & ls.levels[1]:
        if len(lv) < 2:
            return False
        rest = 0
        for l in lv[1:]:
            rest |= l
        if rest & ~ls.span(2, ls.height):
            return False
        if retraction_search(P, rest, ls.span(2, ls.height), budget=budget) is None:
            return False
    return True


def normalize_retraction_bottom(P: Poset, r: RetractionMap, budget: Budget | None = None) -> RetractionMap:
    """Retraction with isomorphic image whose bottom level lies in ``P(0)``.

    6-crown bottom pair: ``s[P(0)] = S(0)`` and one point of ``S(0)`` has a
    singleton fibre.  3C bottom pair: ``s`` maps ``P(0,1)`` onto ``S(0)``.
    """
    ls = P.ls
    if ls.height < 2:
        raise ShapeError("needs height >= 2")
    lv = image_levels(P, r.image_mask)
    if bin(lv[0]).count("1") != 2 or not P.is_antichain(lv[0]):
        raise ShapeError("image bottom is not a 2-antichain")
    bottom_pair = pair_type(P, ls.levels[0], ls.levels[1])
    if bottom_pair is PairType.CROWN6:
        out = _normalize_crown_bottom(P, r, lv[0], budget)
    elif bottom_pair is PairType.T3C:
        out = _normalize_3c_bottom(P, r, lv)
    else:
        raise ShapeError(f"bottom pair of type {bottom_pair.value}")
    assert is_retraction(P, out.map)
    assert is_4crown_stack(P, r.image_mask) <= is_4crown_stack(P, out.image_mask)
    return out


def _normalize_crown_bottom(P, r, r0, budget):
    if not check_bottom_shape(P, r, budget):
        raise ShapeError("bottom image violates the lower-segment lemma")
    ls = P.ls
    s = list(r.map)
    if r0 & ~ls.levels[0]:
        (a,) = bits(r0 & ls.levels[0])
        (b,) = bits(r0 & ls.levels[1])
        (b_low,) = [x for x in bits(P.down[b] & ls.levels[0]) if x != a][:1]
        assert r.map[b_low] == b
        s = [b_low if r.map[x] == b else r.map[x] for x in P.points]
        r0 = 1 << a | 1 << b_low
    fixed = [p for p in bits(r0) if s.count(p) == 1]
    if not fixed:
        raise ShapeError("no bottom image point with a singleton fibre")
    p = fixed[0]
    (q,) = [x for x in bits(r0) if x != p]
    for z in ls.level_points(0):
        if not r0 >> s[z] & 1:
            s[z] = q
    return RetractionMap(P, tuple(s))


def _normalize_3c_bottom(P, r, lv):
    ls = P.ls
    low = ls.span(0, 1)
    upper = ls.span(2, ls.height)
    rest = 0
    for l in lv[1:]:
        rest |= l
    for a, b in permutations(ls.level_points(0), 2):
        (a_up,) = bits(P.up[a] & ls.levels[1])
        s = list(r.map)
        for x in bits(low):
            s[x] = a if x in (a, a_up) else b
        cand = RetractionMap(P, tuple(s))
        if is_retraction(P, cand.map) and cand.image_mask == (1 << a | 1 << b | rest) and not rest & ~upper:
            return cand
    raise ShapeError("no 3C bottom normalisation exists for this retraction")


# --- gluing two stacks across a gap ------------------------------------------------------


def _segment_automorphism_moving(P: Poset, seg: int, src: int, dst: int) -> dict[int, int]:
    """Automorphism of the segment ``seg`` (mask) of ``P`` sending ``src`` to
    ``dst``, found among extensions of bottom-level permutations."""
    Q, old = P.induced(bits(seg))
    new = {p: i for i, p in enumerate(old)}
    base = Q.ls.level_points(0)
    for perm in permutations(base):
        sigma = extend_level0_permutation(Q, dict(zip(base, perm)))
        if sigma[new[src]] == new[dst]:
            return {old[i]: old[sigma[i]] for i in range(Q.n)}
    raise ConditionError(f"no segment automorphism sends {src} to {dst}")


def _combine_3c_top(P: Poset, k: int, s: dict[int, int], t: dict[int, int]) -> RetractionMap:
    # P(k+1, k+2) is of type 3C
    ls = P.ls
    s_img = mask_of(x for x, y in s.items() if x == y)
    t_img = mask_of(x for x, y in t.items() if x == y)
    s_top = image_levels(P, s_img)[-1]
    t_bottom = image_levels(P, t_img)[0]
    a_cands = singleton_fiber_points(s, s_top)
    v_cands = singleton_fiber_points(t, t_bottom)
    if not a_cands or not v_cands:
        raise ConditionError("singleton fibre condition fails")
    a, v = a_cands[0], v_cands[0]
    if ls.level[a] != k or ls.level[v] != k + 2:
        raise ConditionError("singleton fibre points on the wrong level")
    (w,) = bits(P.down[v] & ls.levels[k + 1])
    lower = ls.span(0, k + 1)
    if P.up[a] & (1 << w):
        targets = [x for x in ls.level_points(k) if not P.lt(x, w)]
        sigma = _segment_automorphism_moving(P, lower, a, targets[0])
        inv = {y: x for x, y in sigma.items()}
        s = {x: sigma[s[inv[x]]] for x in s}
        a = sigma[a]
        s_top = mask_of(sigma[x] for x in bits(s_top))
    (b,) = [x for x in bits(s_top) if x != a]
    U = P.up[a] & ls.levels[k + 1]
    s2 = dict(s)
    for x in bits(ls.levels[k + 1] & ~U):
        s2[x] = b
    cert = SplitCertificate(SplitKind.UP, k + 1, frozenset(bits(U)), s2, dict(t))
    return assemble_split_retraction(P, cert)


def combine_across_gap(P: Poset, k: int, s: dict[int, int], t: dict[int, int]) -> RetractionMap:
    """Retraction of ``P`` onto ``S + T`` from a stack retraction ``s`` of
    ``P(0 -> k)`` and ``t`` of ``P(k+2 -> h)``, each with a singleton fibre
    at the level facing the gap."""
    ls = P.ls
    h = ls.height
    if not 0 <= k <= h - 2:
        raise ConditionError("k out of range")
    low = pair_type(P, ls.levels[k], ls.levels[k + 1])
    high = pair_type(P, ls.levels[k + 1], ls.levels[k + 2])
    if low is PairType.CROWN6 and high is PairType.CROWN6:
        raise ConditionError("P(k -> k+2) is a 6-crown stack")
    if set(s) != set(bits(ls.span(0, k))) or set(t) != set(bits(ls.span(k + 2, h))):
        raise ConditionError("domains must be P(0 -> k) and P(k+2 -> h)")
    if high is PairType.T3C:
        out = _combine_3c_top(P, k, s, t)
    else:
        dual = _combine_3c_top(P.dual(), h - k - 2, t, s)
        out = RetractionMap(P, dual.map)
    assert is_retraction(P, out.map)
    return out
