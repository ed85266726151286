import pytest

from nicesec.maps import find_fpf_endomorphism, is_retraction
from nicesec.poset import PairType, crown, is_4crown_stack, level_pair_types, tower_decomposition
from nicesec.sections import codes_of_height, section
from nicesec.towers import (
    Theo32Decomposition,
    check_theo32,
    find_w_witness,
    is_minimal_automorphic_small,
    minimal_automorphy_witness,
    tower_images,
)
from nicesec.verify import three_levels_span_horizon

HEIGHT_SIX = {"110101", "100101", "101011", "101001"}


def test_none_below_height_six():
    for h in range(2, 6):
        for c in codes_of_height(h, "N2"):
            assert check_theo32(section(c), c) is None


def test_height_six():
    hits = {}
    for c in codes_of_height(6, "N2"):
        d = check_theo32(section(c), c)
        if d is not None:
            hits[c] = d
    assert set(hits) == HEIGHT_SIX
    assert hits["110101"].heights == (1, 2, 3) and not hits["110101"].dual
    assert hits["101011"].dual  # the reversed code is 110101


@pytest.mark.parametrize("code", sorted(HEIGHT_SIX))
def test_explicit_retraction(code):
    P = section(code)
    d = check_theo32(P, code)
    assert isinstance(d, Theo32Decomposition)
    r = d.retraction
    assert is_retraction(P, r.map)
    R = P.induced(sorted(r.image))[0]
    blocks = tower_decomposition(R)
    assert blocks is not None and any(len(b) > 2 for b in blocks)
    assert (PairType.T23 if d.dual else PairType.T32) in level_pair_types(R)
    assert three_levels_span_horizon(P, r)
    assert not is_4crown_stack(P, r.image_mask)
    # a non-trivial tower retract: R has no fixed point property
    assert find_fpf_endomorphism(R) is not None


def test_w_witness_101_but_not_111():
    assert find_w_witness(section("101")) is not None
    assert find_w_witness(section("111")) is None
    for blocks in tower_images(section("101")):
        assert bin(blocks[0]).count("1") == bin(blocks[1]).count("1") == 2


def test_non_n2_rejected():
    with pytest.raises(ValueError):
        check_theo32(section("1010"), "1010")


def test_minimal_automorphic():
    assert is_minimal_automorphic_small(crown(3))
    assert is_minimal_automorphic_small(section("11"))
    assert not is_minimal_automorphic_small(section("111"))
    w = minimal_automorphy_witness(section("111"))
    assert w is not None and find_fpf_endomorphism(section("111").induced(sorted(w.image))[0]) is not None
    with pytest.raises(ValueError):
        is_minimal_automorphic_small(section("1111"))
