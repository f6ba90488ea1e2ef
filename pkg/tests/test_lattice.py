from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from oracles import pick_index
from pfh_lattice import (
    IncompatibleSlopeError, OracleLimitError, PathError, action, enumerate_paths,
    enumerate_shapes, index_by_area, index_by_count, make_path, parse_path,
    quadratic_profile, format_path,
)
from pfh_lattice.lattice import path_from_json, path_to_json

ANCHOR = make_path(-1, [((1, 0), 3), ((1, 5), 1)])


def test_make_path_flat():
    P = make_path(0, [((1, 0), 6)])
    assert P.degree == 6 and P.e == 6 and P.w == 0


def test_anchor_path_vertices():
    assert ANCHOR.vertices() == [(0, -1), (3, -1), (4, 4)]


@pytest.mark.parametrize("runs, err", [
    ([((1, 1), 1), ((2, 1), 1)], "increase"),
    ([((2, 2), 1)], "primitive"),
    ([], "no segments"),
    ([((1, -1), 1)], "negative"),
    ([((0, 1), 1)], "q >= 1"),
    ([((1, 0), 0)], ">= 1"),
])
def test_make_path_errors(runs, err):
    with pytest.raises(PathError, match=err):
        make_path(0, runs)


def test_anchor_index_both_ways():
    c = index_by_count(ANCHOR)
    assert (c.j_plus, c.j_minus, c.j, c.I) == (4, 4, 0, -4)
    a = index_by_area(ANCHOR)
    assert (a.A_twice, a.y, a.w, a.e, a.I) == (-3, -1, 4, 4, -4)


def test_small_index_examples():
    assert index_by_count(make_path(0, [((1, 0), 5)])).I == -5
    P = make_path(0, [((1, 1), 2)])
    assert index_by_count(P).j == 3 and index_by_count(P).I == 4
    P = make_path(0, [((1, 2), 1)])
    a = index_by_area(P)
    assert (a.A_twice, a.w, a.e, a.I) == (2, 2, 1, 3)
    assert index_by_area(make_path(1, [((1, 0), 2)])).I == 4


def test_maximal_edge_count_would_disagree():
    # counting maximal edges instead of primitive segments breaks the identity
    a = index_by_area(ANCHOR)
    assert a.A_twice + a.y + a.w - len(ANCHOR.runs) == -2 != index_by_count(ANCHOR).I


def test_count_agrees_with_pick_oracle():
    n = 0
    for d in range(1, 6):
        for P in enumerate_paths(d, 3, range(0, 3)):
            runs = [((s.q, s.p), m) for s, m in P.runs]
            assert index_by_count(P).I == pick_index(P.y0, runs)
            n += 1
    assert n > 1000


@settings(max_examples=100, deadline=None)
@given(y0=st.integers(-5, 5), runs=st.lists(st.tuples(st.integers(1, 3), st.integers(0, 6), st.integers(1, 3)),
                                               min_size=1, max_size=4))
def test_shift_law_and_parity(y0, runs):
    from math import gcd
    seen = {}
    for q, p, m in runs:
        if gcd(p, q) == 1:
            seen.setdefault(F(p, q), (q, p, m))
    if not seen:
        return
    P = make_path(y0, [seen[s] for s in sorted(seen)])
    d = P.degree
    I = index_by_count(P).I
    assert I == index_by_area(P).I
    assert (I - d) % 2 == 0
    Q = P.shifted(1)
    assert index_by_count(Q).I == I + 2 * d + 2
    tp = quadratic_profile(6)
    if max(P.slopes) <= 6:
        assert action(Q, tp) == action(P, tp) + 1


def test_action_examples():
    q = quadratic_profile(2)
    assert action(make_path(0, [((1, 0), 4)]), q) == 0
    assert action(make_path(-1, [((1, 2), 1)]), q) == 0
    with pytest.raises(IncompatibleSlopeError):
        action(make_path(0, [((1, 3), 1)]), q)


def test_action_additive_over_decomposition():
    q = quadratic_profile(4)
    one = make_path(0, [((1, 1), 3)])
    parts = action(make_path(0, [((1, 1), 1)]), q) * 3
    assert action(one, q) == parts


def test_enumeration_counts():
    assert len(list(enumerate_paths(1, 2, [-1, 0]))) == 6
    assert all(P.slopes == (0,) for P in enumerate_paths(1, 0, [0]))
    shapes = {tuple((s.q, s.p, m) for s, m in r) for r in enumerate_shapes(2, 1)}
    assert shapes == {((1, 0, 2),), ((1, 0, 1), (1, 1, 1)), ((1, 1, 2),), ((2, 1, 1),)}


def test_enumeration_duplicate_free():
    shapes = list(enumerate_shapes(5, 2))
    assert len(shapes) == len(set(shapes))


def test_oracle_limits():
    with pytest.raises(OracleLimitError):
        list(enumerate_shapes(7, 1))
    with pytest.raises(OracleLimitError):
        list(enumerate_shapes(6, 12, slope_budget=64))


def test_literal_roundtrip():
    P = parse_path("-1; 1:0*3, 1:5")
    assert P == ANCHOR
    assert parse_path(format_path(P)) == P
    assert path_from_json(path_to_json(P)) == P
    with pytest.raises(PathError):
        parse_path("x; 1:0")
