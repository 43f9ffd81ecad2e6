"""2-CNF satisfiability via the implication graph.

Literals are ``(var, polarity)`` pairs; ``(3, False)`` is the negation of
variable 3.  Variables are numbered from 0.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, List, Optional, Sequence, Tuple

Literal = Tuple[int, bool]
Clause = Tuple[Literal, Literal]
Assignment = List[bool]

BRUTE_FORCE_LIMIT = 20


class TwoSatFormula:
    """A 2-CNF formula.  Unit clauses are stored as a doubled literal."""

    def __init__(self, var_count: int = 0):
        if var_count < 0:
            raise ValueError("var_count must be nonnegative")
        self.var_count = var_count
        self.clauses: List[Clause] = []
        self.inconsistent = False

    def new_var(self) -> int:
        self.var_count += 1
        return self.var_count - 1

    def _check(self, lit: Literal) -> Literal:
        var, pol = lit
        if not 0 <= var < self.var_count:
            raise IndexError(f"variable {var} out of range 0..{self.var_count - 1}")
        return (int(var), bool(pol))

    def add_clause(self, *lits: Literal) -> "TwoSatFormula":
        """Add a clause with zero, one or two literals."""
        if len(lits) > 2:
            raise ValueError("2-SAT clauses have at most two literals")
        checked = [self._check(l) for l in lits]
        if not checked:
            self.inconsistent = True
        elif len(checked) == 1:
            self.clauses.append((checked[0], checked[0]))
        else:
            self.clauses.append((checked[0], checked[1]))
        return self

    def satisfied_by(self, values: Sequence[bool]) -> bool:
        if self.inconsistent:
            return False
        return all(values[a] == pa or values[b] == pb for (a, pa), (b, pb) in self.clauses)

    def to_dimacs(self) -> str:
        """DIMACS-like dump: a header, then one 0-terminated clause per line."""
        rows = [f"p cnf {self.var_count} {len(self.clauses) + int(self.inconsistent)}"]
        if self.inconsistent:
            rows.append("0")
        for clause in self.clauses:
            lits = dict.fromkeys((v + 1) if p else -(v + 1) for v, p in clause)
            rows.append(" ".join(str(l) for l in lits) + " 0")
        return "\n".join(rows) + "\n"


def _node(lit: Literal) -> int:
    return 2 * lit[0] + (0 if lit[1] else 1)


def solve(f: TwoSatFormula) -> Optional[Assignment]:
    """Return a satisfying assignment or None.

    Tarjan's SCC algorithm on the implication graph, iterative so deep
    implication chains do not hit the recursion limit.  Components come out
    in reverse topological order; a variable is true when its positive node
    sits in an earlier-finished component than its negation.
    """
    if f.inconsistent:
        return None
    n = 2 * f.var_count
    adj: List[List[int]] = [[] for _ in range(n)]
    for a, b in f.clauses:
        na, nb = _node(a), _node(b)
        adj[na ^ 1].append(nb)
        if na != nb:
            adj[nb ^ 1].append(na)

    index = [-1] * n
    low = [0] * n
    comp = [-1] * n
    on_stack = [False] * n
    stack: List[int] = []
    counter = 0
    comp_count = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(adj[v]):
                work[-1] = (v, i + 1)
                w = adj[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w] and index[w] < low[v]:
                    low[v] = index[w]
                continue
            work.pop()
            if work:
                u = work[-1][0]
                if low[v] < low[u]:
                    low[u] = low[v]
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = comp_count
                    if w == v:
                        break
                comp_count += 1

    values: Assignment = []
    for var in range(f.var_count):
        pos, neg = comp[2 * var], comp[2 * var + 1]
        if pos == neg:
            return None
        values.append(pos < neg)
    return values


def brute_force_solve(f: TwoSatFormula) -> Optional[Assignment]:
    """Truth-table oracle; first satisfying assignment in binary order."""
    if f.var_count > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_LIMIT} variables")
    if f.inconsistent:
        return None
    for bits in product((False, True), repeat=f.var_count):
        if f.satisfied_by(bits):
            return list(bits)
    return None


def formula_from_clauses(var_count: int, clauses: Iterable[Sequence[Literal]]) -> TwoSatFormula:
    f = TwoSatFormula(var_count)
    for c in clauses:
        f.add_clause(*c)
    return f
