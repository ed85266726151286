import pytest
from hypothesis import given
from hypothesis import strategies as st

from nicesec.maps import is_retraction
from nicesec.poset import PairType, is_4crown_stack, level_pair_types, mask_of
from nicesec.retractions import find_stack_retraction, singleton_fiber_points
from nicesec.sections import codes_of_height, section
from nicesec.splits import (
    ConditionError,
    SplitCertificate,
    SplitKind,
    apply_criteria,
    assemble_split_retraction,
    candidate_split,
    search_retractive_split,
    tbase_levels,
    validate_split,
)
from nicesec.stacks import (
    oracle_4crown_stack_retract,
    segment_retract_search,
    stack_images,
)
from nicesec.table import build_segment_table
from nicesec.verify import KNOWN_CANDIDATE_OVERRIDES, pruning_report

FLAGS = build_segment_table(6).flag


def image_of(f):
    return mask_of(x for x, y in f.items() if x == y)


def test_oracle_examples():
    P = section("10")
    r = oracle_4crown_stack_retract(P)
    assert r is not None
    f = find_stack_retraction(P, singleton="top")
    top = [l for l in stack_images(P, image_of(f))][-1][-1]
    assert singleton_fiber_points(f, top)
    assert oracle_4crown_stack_retract(section("11")) is None
    r = oracle_4crown_stack_retract(section("1001"))
    assert r is not None and len(r.image) >= 4


def fpf_split_certificate():
    P = section("1001")
    return P, candidate_split(P, 3, 2)


def test_example_split_down_split():
    P, cert = fpf_split_certificate()
    assert cert.k == 3 and validate_split(P, cert)
    # t is a retraction of the prefix 10 onto a 4-crown with a singleton fibre on top
    T = mask_of(cert.T)
    assert not T & ~P.ls.span(0, 2) and is_4crown_stack(P, T, allow_antichain=False)
    top = [x for x in cert.T if not P.up[x] & T]
    assert singleton_fiber_points(cert.t, mask_of(top))
    r = assemble_split_retraction(P, cert)
    assert is_retraction(P, r.map)
    R = P.induced(sorted(r.image))[0]
    assert R.ls.height >= 2 and set(level_pair_types(R)) == {PairType.T22}


def test_validate_rejects_broken_order():
    P, cert = fpf_split_certificate()
    # swap the roles: t's image no longer lies below s's bottom when s sits low
    bad = SplitCertificate(SplitKind.DOWN, 3, cert.deleted, cert.s, {x: x for x in cert.t})
    assert not validate_split(P, bad)
    with pytest.raises(ConditionError):
        assemble_split_retraction(P, bad)


def test_up_split_k0_needs_small_U():
    P = section("1111")
    ls = P.ls
    t = find_stack_retraction(P, ls.span(1, 4))
    assert t is not None
    cert = SplitCertificate(SplitKind.UP, 0, frozenset(ls.level_points(0)[:2]), {2: 2}, t)
    assert not validate_split(P, cert)
    # with U empty only the order condition S(top) < T(0) is left
    ok = SplitCertificate(SplitKind.UP, 0, frozenset(), {0: 0, 1: 1, 2: 1}, t)
    t_bottom = mask_of(x for x in ok.T if not P.down[x] & mask_of(ok.T))
    assert validate_split(P, ok) == P.all_below(mask_of([0, 1]), t_bottom)


def test_empty_deleted_is_union():
    found = []
    for code in [c for h in range(2, 6) for c in codes_of_height(h, "N2")]:
        P = section(code)
        for k in range(1, P.ls.height + 1):
            c = candidate_split(P, k, 0)
            if c is not None:
                found.append((P, c))
    assert found
    for P, c in found:
        r = assemble_split_retraction(P, c)
        assert r.map == tuple({**c.s, **c.t}[x] for x in P.points)


def test_certificate_json():
    P, cert = fpf_split_certificate()
    again = SplitCertificate.from_json(cert.dumps())
    assert again == cert and validate_split(P, again)


def test_criteria_examples():
    v = apply_criteria("1011", SplitKind.DOWN, 3, None, FLAGS)
    assert v.reject and v.criterion == 3
    v = apply_criteria("1111", SplitKind.DOWN, 1, None, FLAGS)
    assert v.reject and v.criterion == 5
    assert apply_criteria("1001", SplitKind.DOWN, 3, None, FLAGS)
    assert apply_criteria("1111", SplitKind.DOWN, 4, None, FLAGS).criterion == 1
    assert apply_criteria("10011", SplitKind.DOWN, 4, 1, FLAGS).criterion == 2
    assert apply_criteria("10011", SplitKind.DOWN, 1, 2, FLAGS).criterion == 4
    assert apply_criteria("1", SplitKind.DOWN, 1, None, FLAGS)


def test_segment_retract_search_examples():
    Q = section("011")
    assert segment_retract_search(Q, Q.all_mask, deleted=1 << 0) is None
    Q = section("001")
    got = segment_retract_search(Q, Q.all_mask, deleted=1 << 0, allow_antichain=False)
    assert got is not None
    levels, m = got
    assert len(levels) == 2 and is_retraction(Q, m, Q.all_mask & ~1)
    A = section("1").induced([0, 1, 2])[0]
    levels, m = segment_retract_search(A, A.all_mask)
    assert len(levels) == 1 and len(set(m.values())) == 2


def test_search_examples():
    assert search_retractive_split(section("1111"), "1111", FLAGS) is None
    assert tbase_levels("1111", FLAGS) == [0, 3]
    cert = search_retractive_split(section("10101"), "10101", FLAGS)
    assert cert is not None and validate_split(section("10101"), cert)
    assert tbase_levels("10101", FLAGS) == [0, 2, 3, 4]
    assert search_retractive_split(section("101011"), "101011", FLAGS) is None
    with pytest.raises(ValueError):
        search_retractive_split(section("10"), "10", FLAGS)


@pytest.mark.parametrize("code", [c for h in range(2, 6) for c in codes_of_height(h, "N2")])
def test_method_equivalence(code):
    P = section(code)
    cert = search_retractive_split(P, code, FLAGS)
    assert (cert is not None) == (oracle_4crown_stack_retract(P) is not None)
    if cert is not None:
        r = assemble_split_retraction(P, cert)
        assert is_4crown_stack(P, r.image_mask, allow_antichain=False)


@pytest.mark.parametrize("code", [c for h in range(2, 6) for c in codes_of_height(h, "N2")])
def test_duality(code):
    P = section(code)
    a = search_retractive_split(P, code, FLAGS) is not None
    b = search_retractive_split(P.dual(), code[::-1], FLAGS) is not None
    assert a == b == (oracle_4crown_stack_retract(P.dual()) is not None)


def test_pruning_soundness():
    changed, unsound = pruning_report(5)
    assert changed == []
    # the one valid candidate that criterion 3 rejects: 10111 at k = 4 with |D| = 2
    assert set(unsound) == set(KNOWN_CANDIDATE_OVERRIDES)


def test_criterion3_counterexample_is_a_genuine_split():
    P = section("10111")
    cert = candidate_split(P, 4, 2)
    assert cert is not None and validate_split(P, cert)
    r = assemble_split_retraction(P, cert)
    assert is_4crown_stack(P, r.image_mask, allow_antichain=False)
    assert apply_criteria("10111", SplitKind.DOWN, 4, 2, FLAGS).criterion == 3


@given(st.sampled_from([c for h in range(3, 6) for c in codes_of_height(h, "N2")]))
def test_dualized_certificate(code):
    P = section(code)
    cert = search_retractive_split(P, code, FLAGS)
    if cert is not None:
        h = P.ls.height
        assert validate_split(P.dual(), cert.dualized(h))
        assert cert.dualized(h).dualized(h) == cert
