from itertools import combinations
from math import comb

import pytest
from hypothesis import given, strategies as st

from ekrmatch.errors import InvalidParams
from ekrmatch.family import (
    MatchingParams,
    classify,
    enumerate_family,
    family_size,
    is_intersecting,
    parse_vertex_name,
    set_names,
    star,
    star_size_closed_form,
    valid_params,
    vertex_bit,
    vertex_name,
)

A0, B0, A1, B1, A2, B2 = (1 << b for b in range(6))


def brute_force_family(n, p, s):
    """Filter every (2p+s)-subset of the 2n vertices by counting spanned edges."""
    out = []
    for verts in combinations(range(2 * n), 2 * p + s):
        vs = set(verts)
        edges = sum(1 for i in range(n) if 2 * i in vs and 2 * i + 1 in vs)
        if edges == p:
            out.append(sum(1 << v for v in verts))
    return sorted(out)


@pytest.mark.parametrize("n,p,s", [(1, 0, 1), (2, 1, 0), (2, 0, 2), (3, 1, 1), (3, 0, 3), (4, 2, 0), (4, 1, 2), (5, 1, 2)])
def test_enumeration_matches_brute_force(n, p, s):
    assert list(enumerate_family(MatchingParams(n, p, s))) == brute_force_family(n, p, s)


def test_enumerate_examples():
    fam = enumerate_family(MatchingParams(2, 1, 0))
    assert list(fam) == [A0 | B0, A1 | B1]
    assert len(enumerate_family(MatchingParams(3, 1, 1))) == 12 == 3 * 2 * 2
    assert len(enumerate_family(MatchingParams(4, 2, 0))) == 6


@pytest.mark.parametrize("params", list(valid_params(7)), ids=str)
def test_family_size_closed_form(params):
    fam = enumerate_family(params)
    n, p, s = params.as_tuple()
    assert len(fam) == comb(n, p) * comb(n - p, s) * 2**s
    assert all(a < b for a, b in zip(fam.members, fam.members[1:]))
    for m in fam:
        assert classify(m, n) == (p, s)
        assert m.bit_count() == 2 * p + s


def test_classify_examples():
    assert classify(A0 | B0, 2) == (1, 0)
    assert classify(A0 | B1, 2) == (0, 2)
    assert classify(0, 3) == (0, 0)


def test_classify_rejects_out_of_range_bits():
    with pytest.raises(ValueError):
        classify(1 << 4, 2)


@given(st.integers(1, 8).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(0, (1 << 2 * n) - 1), st.permutations(range(n)), st.lists(st.booleans(), min_size=n, max_size=n))))
def test_classify_invariant_under_column_relabelling(case):
    n, vset, perm, flips = case
    moved = 0
    for i in range(n):
        pair = vset >> (2 * i) & 3
        if flips[i] and pair in (1, 2):
            pair ^= 3
        moved |= pair << (2 * perm[i])
    assert classify(moved, n) == classify(vset, n)


def test_star_examples():
    fam = enumerate_family(MatchingParams(3, 1, 1))
    assert len(star(fam, vertex_bit(0, 0))) == 6
    assert len(star(enumerate_family(MatchingParams(2, 1, 0)), 0)) == 1
    assert len(star(enumerate_family(MatchingParams(3, 0, 3)), vertex_bit(2, 1))) == 4
    with pytest.raises(IndexError):
        star(fam, 6)


@pytest.mark.parametrize("params", list(valid_params(7)), ids=str)
def test_stars_are_vertex_transitive(params):
    fam = enumerate_family(params)
    expected = star_size_closed_form(params)
    assert {len(star(fam, v)) for v in range(2 * params.n)} == {expected}


def test_star_closed_form_examples():
    assert star_size_closed_form(MatchingParams(3, 1, 1)) == 6
    assert star_size_closed_form(MatchingParams(2, 0, 1)) == 1
    assert star_size_closed_form(MatchingParams(4, 2, 0)) == 3


def test_is_intersecting_examples():
    assert is_intersecting([A0 | B0, A0 | B1])
    assert not is_intersecting([A0 | B0, A1 | B1])
    assert is_intersecting([])
    assert is_intersecting([A2])
    assert is_intersecting(enumerate_family(MatchingParams(3, 2, 1)))


@pytest.mark.parametrize("params", [p for p in valid_params(6) if not p.ekr_range], ids=str)
def test_degenerate_families_are_intersecting(params):
    assert is_intersecting(enumerate_family(params))


@pytest.mark.parametrize("n,p,s", [(0, 0, 1), (1, 0, 0), (2, 2, 1), (3, -1, 2), (33, 1, 0), (2, 1.0, 0)])
def test_invalid_params_rejected(n, p, s):
    with pytest.raises(InvalidParams):
        MatchingParams(n, p, s)


def test_valid_params_grid_completeness():
    got = {q.as_tuple() for q in valid_params(4)}
    want = {(n, p, s) for n in range(1, 5) for p in range(5) for s in range(5) if 2 * p + s >= 1 and p + s <= n}
    assert got == want


def test_vertex_names_round_trip():
    assert vertex_name(0) == "a1" and vertex_name(1) == "b1" and vertex_name(5) == "b3"
    for b in range(64):
        assert parse_vertex_name(vertex_name(b)) == b
    assert set_names(A0 | B2) == ["a1", "b3"]


def test_family_size_helper_and_index():
    params = MatchingParams(4, 1, 2)
    fam = enumerate_family(params)
    assert family_size(params) == 48
    assert all(fam.index(m) == i for i, m in enumerate(fam))
    assert fam.element(0).spanned_edges == 1 and fam.element(0).isolated == 2
