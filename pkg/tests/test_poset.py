from itertools import combinations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import posets
from nicesec.maps import brute_force_retractions, find_fpf_endomorphism, retraction_search
from nicesec.poset import (
    CycleError,
    PairType,
    Poset,
    antichain,
    bits,
    chain,
    crown,
    from_strict_pairs,
    height_width,
    irreducible_points,
    is_4crown_stack,
    level_structure,
    ordinal_sum,
    pair_type,
    retractable_and_irreducible_points,
    tower_decomposition,
    width,
)
from nicesec.sections import section


def brute_width(P):
    best = 0
    for r in range(P.n + 1):
        for s in combinations(P.points, r):
            if all(not P.comparable(x, y) for x, y in combinations(s, 2)):
                best = r
    return best


def test_closure_and_cycle():
    P = from_strict_pairs(4, [(0, 1), (1, 2), (2, 3)])
    assert P.lt(0, 3) and not P.lt(3, 0)
    with pytest.raises(CycleError):
        from_strict_pairs(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(CycleError):
        from_strict_pairs(1, [(0, 0)])


@given(posets())
def test_invariants(P):
    P.check()
    for x in P.points:
        assert not P.lt(x, x)
        for y in P.points:
            assert not (P.lt(x, y) and P.lt(y, x))
            for z in P.points:
                if P.lt(x, y) and P.lt(y, z):
                    assert P.lt(x, z)


@given(posets())
def test_levels_by_min_removal(P):
    ls = level_structure(P)
    rest = P.all_mask
    for lv in ls.levels:
        mins = sum(1 << x for x in bits(rest) if not P.down[x] & rest)
        assert lv == mins
        rest &= ~lv
    assert rest == 0
    for k in range(1, ls.height + 1):
        for y in ls.level_points(k):
            assert P.lower_covers(y) & ls.levels[k - 1]


@given(posets(max_n=8))
def test_width_matches_brute_force(P):
    assert width(P) == brute_width(P)


@given(posets())
def test_json_dual_induced(P):
    Q = Poset.from_json(P.dumps())
    assert Q.up == P.up
    D = P.dual()
    assert all(D.lt(y, x) == P.lt(x, y) for x in P.points for y in P.points)
    assert D.dual().up == P.up
    pts = [x for x in P.points if x % 2 == 0]
    S, old = P.induced(pts)
    assert all(S.lt(i, j) == P.lt(old[i], old[j]) for i in S.points for j in S.points)


def test_height_width_examples():
    assert height_width(crown(3)) == (1, 3)
    assert height_width(section("11")) == (2, 3)
    assert height_width(chain(4)) == (3, 1)


def test_pair_types():
    P = section("10")
    ls = P.ls
    assert pair_type(P, ls.levels[0], ls.levels[1]) is PairType.CROWN6
    assert pair_type(P, ls.levels[1], ls.levels[2]) is PairType.T3C
    assert pair_type(P, ls.levels[0], ls.levels[2]) is PairType.T33
    Q = ordinal_sum([antichain(2), antichain(3)])
    assert pair_type(Q, Q.ls.levels[0], Q.ls.levels[1]) is PairType.T23
    Q = ordinal_sum([antichain(3), antichain(2)])
    assert pair_type(Q, Q.ls.levels[0], Q.ls.levels[1]) is PairType.T32
    C = from_strict_pairs(4, [(0, 2), (1, 3)])
    assert pair_type(C, C.ls.levels[0], C.ls.levels[1]) is PairType.T2C
    assert is_4crown_stack(ordinal_sum([antichain(2)] * 3))


def test_tower_decomposition_examples():
    S = ordinal_sum([antichain(2)] * 3)
    assert [len(b) for b in tower_decomposition(S)] == [2, 2, 2]
    assert tower_decomposition(section("11")) == [set(range(9))]
    T = ordinal_sum([crown(3), antichain(2)])
    assert [len(b) for b in tower_decomposition(T)] == [6, 2]
    assert tower_decomposition(section("10")) is None  # 3C top: not nice
    assert tower_decomposition(chain(2)) is None


def test_retractable_points():
    r, i = retractable_and_irreducible_points(chain(3))
    assert i == {0, 1, 2} and r == {0, 1, 2}
    assert retractable_and_irreducible_points(crown(3)) == (set(), set())


@given(posets(max_n=6))
def test_retractable_means_retract(P):
    r, _ = retractable_and_irreducible_points(P)
    for a in P.points:
        assert (a in r) == (retraction_search(P, P.all_mask & ~(1 << a)) is not None)


@given(posets(max_n=8))
def test_dismantling(P):
    irr = bits(irreducible_points(P))
    if not irr:
        return
    a = irr[0]
    Q, _ = P.induced([x for x in P.points if x != a])
    assert (find_fpf_endomorphism(P) is None) == (find_fpf_endomorphism(Q) is None)


@given(posets(max_n=7))
def test_antichain_retract_iff_disconnected(P):
    pairs = [(x, y) for x, y in combinations(P.points, 2) if not P.comparable(x, y)]
    has = any(retraction_search(P, 1 << x | 1 << y) is not None for x, y in pairs)
    assert has == (not P.is_connected())


@given(posets(max_n=3), posets(max_n=3))
def test_ordinal_sum_retracts(P1, P2):
    Q = ordinal_sum([P1, P2])
    part = [0] * P1.n + [1] * P2.n
    for f in brute_force_retractions(Q):
        if any(part[f[x]] != part[x] for x in Q.points):
            R, _ = Q.induced(sorted(set(f)))
            assert find_fpf_endomorphism(R) is None


@given(st.integers(2, 5))
def test_crowns(m):
    C = crown(m)
    assert C.n == 2 * m and height_width(C) == (1, m)
    assert find_fpf_endomorphism(C) is not None
