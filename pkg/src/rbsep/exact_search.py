"""Exhaustive oracles for small instances.

Axis-parallel: only the bipartition a line induces matters, so it suffices to
try one line per gap between consecutive distinct coordinates.

General slopes: every bipartition a line can induce is realized by a small
perturbation of a line through two input points.  The separation problem then
becomes a minimum set cover of red/blue pairs by those bipartitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from .axis_fpt import Solution
from .geometry import Instance, Line, Point, hulls_strictly_disjoint, is_feasible, side_of, sort_lines

DEFAULT_BUDGET = 5_000_000
BIPARTITION_LIMIT = 40  # distinct points; the pair loop is cubic in this


class ResourceLimitError(RuntimeError):
    """The exhaustive search would exceed its combinatorial budget."""


@dataclass(frozen=True)
class CandidateSet:
    vertical_offsets: Tuple[Fraction, ...]
    horizontal_offsets: Tuple[Fraction, ...]

    def lines(self) -> List[Line]:
        return [Line.vertical(x) for x in self.vertical_offsets] + [
            Line.horizontal(y) for y in self.horizontal_offsets
        ]


@dataclass(frozen=True)
class Bipartition:
    left_set: FrozenSet[int]
    realizing_line: Line


def _gaps(values: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    distinct = sorted(set(values))
    return tuple((a + b) / 2 for a, b in zip(distinct, distinct[1:]))


def axis_candidates(instance: Instance) -> CandidateSet:
    pts = list(instance.red) + list(instance.blue)
    return CandidateSet(_gaps([p.x for p in pts]), _gaps([p.y for p in pts]))


def _pairs(instance: Instance) -> List[Tuple[Point, Point]]:
    return [(r, b) for r in sorted(set(instance.red)) for b in sorted(set(instance.blue))]


def _cover(
    pair_count: int,
    options: List[Tuple[int, object]],
    k_max: int,
    budget: int,
) -> Optional[List[object]]:
    """Smallest set of options whose masks cover all pairs, up to k_max.

    Iterative deepening; at each node branch only on options covering the
    first uncovered pair, skipping options whose coverage of the remaining
    pairs is a subset of another's.
    """
    full = (1 << pair_count) - 1
    nodes = [0]

    def search(covered: int, depth: int) -> Optional[List[object]]:
        if covered == full:
            return []
        if depth == 0:
            return None
        nodes[0] += 1
        if nodes[0] > budget:
            raise ResourceLimitError(f"search exceeded {budget} nodes")
        rest = full & ~covered
        first = rest & -rest
        useful: Dict[int, object] = {}
        for mask, tag in options:
            if mask & first:
                gain = mask & rest
                if gain not in useful:
                    useful[gain] = tag
        gains = sorted(useful, key=lambda g: (-bin(g).count("1"), g))
        kept = [g for g in gains if not any(h != g and h & g == g for h in gains)]
        for g in kept:
            sub = search(covered | g, depth - 1)
            if sub is not None:
                return [useful[g]] + sub
        return None

    for depth in range(k_max + 1):
        found = search(0, depth)
        if found is not None:
            return found
    return None


def _pair_mask(line: Line, pairs: Sequence[Tuple[Point, Point]]) -> int:
    m = 0
    for idx, (r, b) in enumerate(pairs):
        if side_of(line, r) * side_of(line, b) == -1:
            m |= 1 << idx
    return m


def solve_axis_bruteforce(instance: Instance, k_max: int, budget: int = DEFAULT_BUDGET) -> Optional[Solution]:
    """Optimal axis-parallel solution with at most k_max lines, else None."""
    if instance.inseparable:
        return None
    pairs = _pairs(instance)
    if not pairs:
        return Solution((), 0, None, "bruteforce")
    cands = axis_candidates(instance).lines()
    options = [(_pair_mask(l, pairs), l) for l in cands]
    chosen = _cover(len(pairs), options, k_max, budget)
    if chosen is None:
        return None
    lines = sort_lines(chosen)
    assert is_feasible(instance, lines).feasible
    return Solution(tuple(lines), len(lines), None, "bruteforce")


def _perturbed_lines(points: Sequence[Point], p: Point, q: Point) -> List[Line]:
    """Lines near the line pq that avoid every point.

    The base line is shifted to either side by half the smallest nonzero
    clearance, and turned about the midpoint of pq by a slope change small
    enough that no off-line point switches side.  Together these realize
    every split of the points on pq that a nearby line can produce.
    """
    a = q.y - p.y
    b = p.x - q.x
    c = a * p.x + b * p.y
    values = [a * r.x + b * r.y - c for r in points]
    off = [abs(v) for v in values if v != 0]
    delta = min(off) / 2 if off else Fraction(1)
    out = [Line(a, b, c + delta), Line(a, b, c - delta)]
    mx, my = (p.x + q.x) / 2, (p.y + q.y) / 2
    if any(r.x == mx and r.y == my for r in points):
        return out
    hs = []
    for r, g in zip(points, values):
        h = -b * (r.x - mx) + a * (r.y - my)
        if g != 0 and h != 0:
            hs.append(abs(g) / abs(h))
    tau = min(hs) / 2 if hs else Fraction(1)
    for t in (tau, -tau):
        na, nb = a - t * b, b + t * a
        out.append(Line(na, nb, na * mx + nb * my))
    return out


def enumerate_separable_bipartitions(points: Sequence[Point]) -> List[Bipartition]:
    """All subsets S of the (deduplicated) points that a line can cut off.

    left_set holds indices into ``points``; coincident points always share a
    side.  The result is sorted by left set.
    """
    pts = [Point.of(*p) for p in points]
    distinct = sorted(set(pts))
    if len(distinct) > BIPARTITION_LIMIT:
        raise ResourceLimitError(f"{len(distinct)} distinct points exceed the limit of {BIPARTITION_LIMIT}")
    members: Dict[Point, List[int]] = {}
    for idx, p in enumerate(pts):
        members.setdefault(p, []).append(idx)
    found: Dict[FrozenSet[int], Line] = {}

    def record(line: Line) -> None:
        signs = [side_of(line, r) for r in distinct]
        if 0 in signs:
            return
        for flip in (1, -1):
            left = frozenset(i for r, s in zip(distinct, signs) if s == -flip for i in members[r])
            if left not in found:
                found[left] = line

    if distinct:
        lo = min(r.x for r in distinct)
        record(Line.vertical(lo - 1))
    for p, q in combinations(distinct, 2):
        for line in _perturbed_lines(distinct, p, q):
            record(line)
    return [Bipartition(s, found[s]) for s in sorted(found, key=lambda s: (len(s), sorted(s)))]


def solve_general_bruteforce(instance: Instance, k_max: int, budget: int = DEFAULT_BUDGET) -> Optional[Solution]:
    """Optimal arbitrary-slope solution with at most k_max lines, else None."""
    if instance.inseparable:
        return None
    pairs = _pairs(instance)
    if not pairs:
        return Solution((), 0, None, "general-bruteforce")
    pts = sorted(set(instance.red) | set(instance.blue))
    options = []
    seen = set()
    for bp in enumerate_separable_bipartitions(pts):
        m = _pair_mask(bp.realizing_line, pairs)
        if m and m not in seen:
            seen.add(m)
            options.append((m, bp.realizing_line))
    chosen = _cover(len(pairs), options, k_max, budget)
    if chosen is None:
        return None
    lines = sort_lines(chosen)
    assert is_feasible(instance, lines).feasible
    return Solution(tuple(lines), len(lines), None, "general-bruteforce")


def separable_with_one_line(instance: Instance) -> bool:
    if instance.inseparable:
        return False
    return hulls_strictly_disjoint(instance.red, instance.blue)
