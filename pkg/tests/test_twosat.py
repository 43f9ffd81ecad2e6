import random

import pytest
from hypothesis import given, strategies as st

from rbsep.twosat import BRUTE_FORCE_LIMIT, TwoSatFormula, brute_force_solve, formula_from_clauses, solve


def test_empty_clause_unsat():
    f = TwoSatFormula(2).add_clause()
    assert f.inconsistent
    assert solve(f) is None and brute_force_solve(f) is None


def test_unit_clauses_conflict():
    f = TwoSatFormula(1).add_clause((0, True)).add_clause((0, False))
    assert f.clauses[0] == ((0, True), (0, True))
    assert solve(f) is None


def test_implication_satisfied_by_all_false():
    f = TwoSatFormula(2).add_clause((0, False), (1, True))
    assert f.satisfied_by([False, False])
    assert solve(f) is not None


def test_all_four_combinations_excluded():
    f = formula_from_clauses(2, [[(0, a), (1, b)] for a in (True, False) for b in (True, False)])
    assert solve(f) is None


def test_chain_sat():
    f = formula_from_clauses(3, [[(0, False), (1, True)], [(1, False), (2, True)]])
    values = solve(f)
    assert values is not None and f.satisfied_by(values)
    assert f.satisfied_by([True, True, True])


def test_errors():
    with pytest.raises(IndexError):
        TwoSatFormula(1).add_clause((1, True))
    with pytest.raises(ValueError):
        TwoSatFormula(3).add_clause((0, True), (1, True), (2, True))
    with pytest.raises(ValueError):
        brute_force_solve(TwoSatFormula(BRUTE_FORCE_LIMIT + 1))
    with pytest.raises(ValueError):
        TwoSatFormula(-1)


def test_zero_variables():
    assert solve(TwoSatFormula(0)) == []
    assert brute_force_solve(TwoSatFormula(0)) == []


def test_new_var_and_dimacs():
    f = TwoSatFormula()
    a, b = f.new_var(), f.new_var()
    f.add_clause((a, True), (b, False)).add_clause((b, True))
    assert f.to_dimacs() == "p cnf 2 2\n1 -2 0\n2 0\n"


def _random_formula(rng, n, m):
    f = TwoSatFormula(n)
    for _ in range(m):
        size = rng.choice((1, 2, 2, 2))
        f.add_clause(*[(rng.randrange(n), rng.random() < 0.5) for _ in range(size)])
    return f


def test_random_ten_variable_formulas_match_oracle():
    rng = random.Random(1)
    for _ in range(200):
        f = _random_formula(rng, 10, rng.randint(5, 30))
        got, ref = solve(f), brute_force_solve(f)
        assert (got is None) == (ref is None)
        if got is not None:
            assert f.satisfied_by(got)


def test_long_implication_chain_no_recursion_error():
    n = 50_000
    f = formula_from_clauses(n, [[(i, False), (i + 1, True)] for i in range(n - 1)])
    f.add_clause((0, True))
    values = solve(f)
    assert values is not None and all(values)


@given(
    st.integers(1, 8).flatmap(
        lambda n: st.tuples(
            st.just(n),
            st.lists(st.lists(st.tuples(st.integers(0, n - 1), st.booleans()), min_size=1, max_size=2), max_size=20),
        )
    )
)
def test_solve_deterministic_and_sound(data):
    n, clauses = data
    f = formula_from_clauses(n, clauses)
    a, b = solve(f), solve(f)
    assert a == b
    assert (a is None) == (brute_force_solve(f) is None)
