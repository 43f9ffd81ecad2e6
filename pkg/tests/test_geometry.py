from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rbsep.geometry import (
    NEG_INF,
    POS_INF,
    Instance,
    Line,
    Point,
    PointOnLine,
    UnseparatedPair,
    hulls_strictly_disjoint,
    is_feasible,
    rational,
    separates,
    side_of,
    strip_decomposition,
)

P = Point.of
coord = st.integers(-5, 5)
points = st.lists(st.tuples(coord, coord).map(lambda t: P(*t)), max_size=7)


def test_rational_coercion():
    assert rational("1/3") == Fraction(1, 3)
    assert rational("0.25") == Fraction(1, 4)
    with pytest.raises(TypeError):
        rational(0.5)
    with pytest.raises(TypeError):
        rational(True)


def test_line_canonical_form():
    assert Line(2, 0, 4) == Line.vertical(2)
    assert Line(0, -3, 3) == Line.horizontal(-1)
    assert Line(2, 2, 4) == Line(1, 1, 2)
    assert Line.through(P(0, 0), P(1, 1)) == Line(1, -1, 0)
    with pytest.raises(ValueError):
        Line(0, 0, 1)
    with pytest.raises(ValueError):
        Line.through(P(1, 1), P(1, 1))
    assert Line.vertical(3).kind == "V" and Line.horizontal(3).kind == "H" and Line(1, 1, 0).kind == "G"


def test_side_of_examples():
    assert side_of(Line.vertical(1), P(0, 0)) == -1
    assert side_of(Line.vertical(1), P(1, 7)) == 0
    assert side_of(Line(1, 1, 2), P(3, 0)) == 1


def test_separates_examples():
    assert separates(Line.vertical(1), P(0, 0), P(2, 0))
    assert not separates(Line.vertical(1), P(0, 0), P(0, 5))
    assert not separates(Line.vertical(0), P(0, 0), P(1, 0))


def test_is_feasible_examples():
    inst = Instance([P(0, 0)], [P(2, 0)])
    assert is_feasible(inst, [Line.vertical(1)]).feasible
    rep = is_feasible(inst, [Line.vertical(0)])
    assert rep.violation == PointOnLine(P(0, 0), Line.vertical(0))
    xor = Instance([P(0, 0), P(2, 2)], [P(0, 2), P(2, 0)])
    assert is_feasible(xor, [Line.vertical(1), Line.horizontal(1)]).feasible
    assert is_feasible(xor, [Line.vertical(1)]).violation == UnseparatedPair(P(0, 0), P(0, 2))


def test_coincident_points_flagged():
    inst = Instance([P(1, 1)], [P(1, 1), P(3, 3)])
    assert inst.inseparable
    rep = is_feasible(inst, [Line.vertical(2)])
    assert rep.violation == UnseparatedPair(P(1, 1), P(1, 1))


def test_strip_decomposition_examples():
    s = strip_decomposition(Instance([], [P(1, 1), P(3, 2)]))
    assert s.X == (NEG_INF, 1, 3, POS_INF) and s.Y == (NEG_INF, 1, 2, POS_INF)
    assert s.vertical_count == s.horizontal_count == 3
    s = strip_decomposition(Instance([P(0, 0)], []))
    assert s.X == (NEG_INF, POS_INF) and s.k == 0 and s.l == 0
    s = strip_decomposition(Instance([], [P(1, 1), P(1, 5)]))
    assert s.X == (NEG_INF, 1, POS_INF) and s.Y == (NEG_INF, 1, 5, POS_INF)
    assert s.membership(P(1, 3)) == ((0, 1), (1,))


def test_hull_examples():
    assert hulls_strictly_disjoint([P(0, 0)], [P(2, 0)])
    assert not hulls_strictly_disjoint([P(0, 0), P(2, 2)], [P(0, 2), P(2, 0)])
    assert not hulls_strictly_disjoint([P(0, 0), P(4, 0)], [P(2, 0)])
    assert hulls_strictly_disjoint([], [P(0, 0)])


@given(points, points)
def test_strip_membership(red, blue):
    inst = Instance(red, blue)
    s = strip_decomposition(inst)
    bx = {b.x for b in blue}
    for p in red:
        vs, hs = s.membership(p)
        assert 1 <= len(vs) <= 2 and 1 <= len(hs) <= 2
        assert (len(vs) == 2) == (p.x in bx)
        for j in vs:
            assert s.X[j] <= p.x <= s.X[j + 1]
    for j in range(s.vertical_count):
        assert not any(s.X[j] < b.x < s.X[j + 1] for b in blue)


line_st = st.one_of(
    coord.map(lambda v: Line.vertical(Fraction(2 * v + 1, 2))),
    coord.map(lambda v: Line.horizontal(Fraction(2 * v + 1, 2))),
    st.tuples(coord, coord, coord).filter(lambda t: t[0] or t[1]).map(lambda t: Line(*t)),
)


@given(points, points, st.lists(line_st, max_size=4), line_st)
def test_feasibility_monotone(red, blue, lines, extra):
    inst = Instance(red, blue)
    if is_feasible(inst, lines).feasible:
        hits = any(side_of(extra, p) == 0 for p in red + blue)
        assert is_feasible(inst, lines + [extra]).feasible != hits


@given(points, points, line_st)
def test_single_line_implies_disjoint_hulls(red, blue, line):
    if is_feasible(Instance(red, blue), [line]).feasible:
        assert hulls_strictly_disjoint(red, blue)


@settings(max_examples=200)
@given(points, points)
def test_feasibility_matches_pairwise_definition(red, blue):
    lines = [Line.vertical(Fraction(1, 2)), Line(1, 1, Fraction(1, 3)), Line.horizontal(Fraction(-3, 2))]
    inst = Instance(red, blue)
    on = any(side_of(l, p) == 0 for l in lines for p in red + blue)
    split = all(any(separates(l, r, b) for l in lines) for r in red for b in blue)
    assert is_feasible(inst, lines).feasible == (not on and split)


@given(points)
def test_separates_symmetric(pts):
    line = Line(1, 2, Fraction(1, 2))
    for p in pts:
        assert not separates(line, p, p)
        for q in pts:
            assert separates(line, p, q) == separates(line, q, p)
