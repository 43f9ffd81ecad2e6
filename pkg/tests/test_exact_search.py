import random
from fractions import Fraction

import pytest

from rbsep.axis_fpt import solve_axis_parallel
from rbsep.exact_search import (
    BIPARTITION_LIMIT,
    ResourceLimitError,
    axis_candidates,
    enumerate_separable_bipartitions,
    separable_with_one_line,
    solve_axis_bruteforce,
    solve_general_bruteforce,
)
from rbsep.geometry import Instance, Point, hulls_strictly_disjoint, is_feasible, side_of

P = Point.of
XOR = Instance([P(0, 0), P(2, 2)], [P(0, 2), P(2, 0)])


def hull_oracle(points):
    """Left sets S (by index) with S and its complement strictly separable."""
    n = len(points)
    out = set()
    for mask in range(1 << n):
        left = [points[i] for i in range(n) if mask >> i & 1]
        right = [points[i] for i in range(n) if not mask >> i & 1]
        if set(left) & set(right):
            continue
        if hulls_strictly_disjoint(left, right):
            out.add(frozenset(i for i in range(n) if mask >> i & 1))
    return out


def test_axis_candidates_examples():
    c = axis_candidates(Instance([P(0, 0), P(2, 1), P(2, 2)], [P(5, 3)]))
    assert c.vertical_offsets == (1, Fraction(7, 2))
    assert axis_candidates(Instance([P(1, 1)], [])).lines() == []
    c = axis_candidates(Instance([P(i, 0) for i in range(5)], []))
    assert len(c.vertical_offsets) == 4


def test_candidates_avoid_points():
    rng = random.Random(0)
    pts = [P(rng.randint(0, 5), rng.randint(0, 5)) for _ in range(12)]
    for line in axis_candidates(Instance(pts, [])).lines():
        assert all(side_of(line, p) != 0 for p in pts)


def test_axis_bruteforce_examples():
    assert solve_axis_bruteforce(Instance([P(0, 0)], [P(2, 0)]), 3).cost == 1
    assert solve_axis_bruteforce(XOR, 3).cost == 2
    assert solve_axis_bruteforce(XOR, 1) is None
    assert solve_axis_bruteforce(Instance([P(1, 1)], [P(1, 1)]), 10) is None


def test_budget_error():
    rng = random.Random(3)
    inst = Instance([P(rng.randint(0, 30), rng.randint(0, 30)) for _ in range(14)], [P(rng.randint(0, 30), rng.randint(0, 30)) for _ in range(6)])
    with pytest.raises(ResourceLimitError):
        solve_axis_bruteforce(inst, 20, budget=5)


def test_bipartition_examples():
    assert len(enumerate_separable_bipartitions([P(0, 0)])) == 2
    assert len(enumerate_separable_bipartitions([P(0, 0), P(3, 0), P(1, 2)])) == 8
    square = [P(0, 0), P(1, 0), P(1, 1), P(0, 1)]
    found = {b.left_set for b in enumerate_separable_bipartitions(square)}
    assert len(found) == 14
    assert frozenset({0, 2}) not in found and frozenset({1, 3}) not in found


def test_bipartition_lines_realize_their_sets():
    rng = random.Random(5)
    pts = [P(rng.randint(0, 3), rng.randint(0, 3)) for _ in range(7)]
    for bp in enumerate_separable_bipartitions(pts):
        sides = [side_of(bp.realizing_line, p) for p in pts]
        assert 0 not in sides
        left = {sides[i] for i in bp.left_set}
        right = {sides[i] for i in range(len(pts)) if i not in bp.left_set}
        assert len(left) <= 1 and len(right) <= 1 and not left & right


@pytest.mark.parametrize("seed", range(40))
def test_bipartitions_match_hull_oracle(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 7)
    grid = rng.choice((2, 3, 5))
    pts = [P(rng.randint(0, grid), rng.randint(0, grid)) for _ in range(n)]
    assert {b.left_set for b in enumerate_separable_bipartitions(pts)} == hull_oracle(pts)


def test_collinear_cluster():
    pts = [P(i, 2 * i) for i in range(5)] + [P(1, 0)]
    assert {b.left_set for b in enumerate_separable_bipartitions(pts)} == hull_oracle(pts)


def test_bipartition_limit():
    with pytest.raises(ResourceLimitError):
        enumerate_separable_bipartitions([P(i, i * i) for i in range(BIPARTITION_LIMIT + 1)])


def test_general_bruteforce_examples():
    assert solve_general_bruteforce(Instance([P(0, 0)], [P(2, 0)]), 3).cost == 1
    sol = solve_general_bruteforce(XOR, 3)
    assert sol.cost == 2 and is_feasible(XOR, sol.lines).feasible
    assert solve_general_bruteforce(XOR, 1) is None
    assert solve_general_bruteforce(Instance([P(0, 0)], [P(0, 0)]), 3) is None


def test_general_not_worse_than_axis():
    rng = random.Random(9)
    for _ in range(40):
        blue = [P(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(rng.randint(1, 3))]
        red = [p for p in (P(rng.randint(0, 4), rng.randint(0, 4)) for _ in range(rng.randint(1, 5))) if p not in blue]
        inst = Instance(red, blue)
        g = solve_general_bruteforce(inst, 6)
        assert g is not None and g.cost <= solve_axis_parallel(inst).cost
        assert is_feasible(inst, g.lines).feasible


def test_one_line_examples():
    assert separable_with_one_line(Instance([P(0, 0)], [P(1, 1)]))
    nested = Instance([P(0, 0), P(4, 0), P(0, 4)], [P(1, 1)])
    assert not separable_with_one_line(nested)
    assert not separable_with_one_line(Instance([P(1, 1)], [P(1, 1)]))
