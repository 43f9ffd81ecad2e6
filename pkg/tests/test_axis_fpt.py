import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rbsep.axis_fpt import (
    InseparableError,
    Specification,
    VariableMap,
    build_formula,
    enumerate_specifications,
    extract_lines,
    interesting_cells,
    solve_axis_parallel,
    solve_axis_parallel_literal,
)
from rbsep.exact_search import solve_axis_bruteforce
from rbsep.geometry import Instance, Line, Point, is_feasible, separates, strip_decomposition
from rbsep.twosat import brute_force_solve, solve

P = Point.of
PAIR = Instance([P(0, 0)], [P(2, 0)])


def test_specification_cost_and_str():
    s = Specification((0, 2), (1, 0, 1))
    assert s.cost == 4 and str(s) == "H[02] V[101]"


def test_enumeration_counts_and_order():
    one = strip_decomposition(Instance([P(0, 0)], []))
    assert len(list(enumerate_specifications(one))) == 9
    two = strip_decomposition(Instance([], [P(1, 1), P(2, 2)]))
    specs = list(enumerate_specifications(two))
    assert len(specs) == 3**3 * 3**3 <= 9 ** (2 + 1)
    assert specs[0].cost == 0
    keys = [(s.cost, s.horiz_counts + s.vert_counts) for s in specs]
    assert keys == sorted(keys)
    assert len(set(specs)) == len(specs)


def test_build_formula_single_vertical_line():
    strips = strip_decomposition(PAIR)
    spec = Specification((0, 0), (1, 0))
    f, vmap = build_formula(PAIR, strips, spec)
    assert len(vmap) == 1 and vmap.var(("v", 0, 0)) == 0
    assert set(f.clauses) == {((0, False), (0, False))}
    values = solve(f)
    assert values == [False] and brute_force_solve(f) == [False]
    assert extract_lines(spec, values, vmap, strips, PAIR) == [Line.vertical(1)]


def test_build_formula_all_zero_is_unsat():
    strips = strip_decomposition(PAIR)
    f, _ = build_formula(PAIR, strips, Specification((0, 0), (0, 0)))
    assert f.inconsistent and solve(f) is None


def test_build_formula_no_red():
    inst = Instance([], [P(1, 1)])
    f, vmap = build_formula(inst, strip_decomposition(inst), Specification((1, 0), (0, 1)))
    assert f.clauses == [] and len(vmap) == 0 and solve(f) == []


def test_pinned_boundary_variables():
    inst = Instance([P(1, 5), P(3, 5)], [P(1, 0), P(3, 0)])
    strips = strip_decomposition(inst)
    vmap = VariableMap()
    # (1, 5) sits on the left boundary of V1 and the right boundary of V0.
    assert vmap.lookup("v", 1, P(1, 5), strips) is False
    assert vmap.lookup("v", 0, P(1, 5), strips) is True


def test_interesting_cells_example():
    strips = strip_decomposition(PAIR)
    cells = interesting_cells(PAIR, strips, Specification((0, 0), (0, 0)), P(2, 0))
    assert (0, 0) in cells and (1, 0) in cells


def test_extract_count_two_strip():
    inst = Instance([P(4, 0), P(6, 0)], [P(0, 1), P(10, 1)])
    strips = strip_decomposition(inst)
    spec = Specification((0, 0), (0, 2, 0))
    assert extract_lines(spec, [], VariableMap(), strips, inst) == [Line.vertical(2), Line.vertical(8)]


def test_extract_count_one_empty_strip():
    inst = Instance([P(9, 9)], [P(0, 1), P(4, 1)])
    strips = strip_decomposition(inst)
    spec = Specification((0, 0), (0, 1, 0))
    assert extract_lines(spec, [], VariableMap(), strips, inst) == [Line.vertical(2)]


def test_extract_count_two_empty_interior_and_infinite_bounds():
    inst = Instance([P(7, 0)], [P(0, 0)])
    strips = strip_decomposition(inst)
    lines = extract_lines(Specification((0, 0), (2, 0)), [], VariableMap(), strips, inst)
    # (-inf, 0] becomes [-1, 0]; no interior red -> thirds.
    assert lines == [Line.vertical(Fraction(-2, 3)), Line.vertical(Fraction(-1, 3))]


@pytest.mark.parametrize(
    "red, blue, cost",
    [
        ([(0, 0)], [(2, 0)], 1),
        ([(0, 0), (2, 2)], [(0, 2), (2, 0)], 2),
        ([(0, 0), (2, 0)], [(1, 0), (3, 0)], 3),
        ([(0, 0)], [], 0),
        ([], [], 0),
    ],
)
def test_solve_examples(red, blue, cost):
    inst = Instance([P(*p) for p in red], [P(*p) for p in blue])
    sol = solve_axis_parallel(inst)
    assert sol.cost == cost
    assert is_feasible(inst, sol.lines).feasible
    assert solve_axis_parallel_literal(inst).cost == cost


def test_inseparable_raises():
    with pytest.raises(InseparableError):
        solve_axis_parallel(Instance([P(1, 1)], [P(1, 1)]))
    with pytest.raises(InseparableError):
        solve_axis_parallel_literal(Instance([P(1, 1)], [P(1, 1)]))


def _random_instance(rng, nb, nr, size=6):
    blue = [P(rng.randint(0, size), rng.randint(0, size)) for _ in range(nb)]
    red = []
    while len(red) < nr:
        p = P(rng.randint(0, size), rng.randint(0, size))
        if p not in blue:
            red.append(p)
    if red and rng.random() < 0.5:
        red.append(rng.choice(red))
    return Instance(red, blue)


def test_literal_and_pruned_paths_agree():
    rng = random.Random(4)
    for _ in range(60):
        inst = _random_instance(rng, rng.randint(1, 3), rng.randint(1, 7))
        a, b = solve_axis_parallel(inst), solve_axis_parallel_literal(inst)
        assert a.cost == b.cost


def test_returned_spec_is_cheapest_sat_spec():
    rng = random.Random(8)
    for _ in range(15):
        inst = _random_instance(rng, 2, rng.randint(1, 5))
        sol = solve_axis_parallel(inst)
        strips = strip_decomposition(inst)
        sat_costs = []
        for spec in enumerate_specifications(strips):
            f, _ = build_formula(inst, strips, spec)
            if solve(f) is not None:
                sat_costs.append(spec.cost)
        assert sol.provenance.cost == min(sat_costs) == sol.cost


def test_interesting_cells_cover_unseparated_points():
    """A red point outside every interesting cell is split from p_b by the spec's two-line strips."""
    rng = random.Random(12)
    for _ in range(30):
        inst = _random_instance(rng, 2, rng.randint(1, 5))
        strips = strip_decomposition(inst)
        specs = list(enumerate_specifications(strips))
        for spec in rng.sample(specs, 10):
            f, vmap = build_formula(inst, strips, spec)
            values = solve(f)
            if values is None:
                continue
            lines = extract_lines(spec, values, vmap, strips, inst)
            for b in set(inst.blue):
                cells = set(interesting_cells(inst, strips, spec, b))
                for r in set(inst.red):
                    vs, hs = strips.membership(r)
                    if not any((i, j) in cells for i in hs for j in vs):
                        assert any(separates(l, r, b) for l in lines)


small = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4)), min_size=0, max_size=6)


@settings(max_examples=80, deadline=None)
@given(small, small, st.integers(-3, 3), st.integers(1, 3))
def test_swap_translation_and_scale_invariance(red, blue, shift, scale):
    blue = [b for b in blue if b not in red]
    inst = Instance([P(*p) for p in red], [P(*p) for p in blue])
    base = solve_axis_parallel(inst).cost
    assert solve_axis_parallel(inst.swapped()).cost == base
    moved = Instance(
        [P(Fraction(scale, 2) * p.x + shift, Fraction(scale, 2) * p.y - shift) for p in inst.red],
        [P(Fraction(scale, 2) * p.x + shift, Fraction(scale, 2) * p.y - shift) for p in inst.blue],
    )
    assert solve_axis_parallel(moved).cost == base
    oracle = solve_axis_bruteforce(inst, 12)
    assert oracle is not None and oracle.cost == base
