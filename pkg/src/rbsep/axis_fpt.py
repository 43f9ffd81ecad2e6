"""Axis-parallel red-blue separation, FPT in the number of blue points.

The blue coordinates cut the plane into strips.  A specification guesses how
many separating lines (0, 1 or 2) sit in every strip.  For each guess, in
order of increasing cost, the exact placement of the single lines is decided
by a 2-SAT formula; the first satisfiable guess is optimal.

Variable convention (pinned at strip boundaries):
  * horizontal strip H_i, red point p: ``y`` is true iff the strip's line is
    below p; true on the upper boundary, false on the lower one.
  * vertical strip V_j, red point p: ``x`` is true iff the strip's line is
    left of p; true on the right boundary, false on the left one.
Red points of one strip sharing a coordinate share one variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .geometry import (
    Bound,
    Instance,
    Line,
    Point,
    StripDecomposition,
    is_feasible,
    sort_lines,
    strip_decomposition,
)
from .twosat import TwoSatFormula, solve

COUNTS = (0, 1, 2)


class InseparableError(ValueError):
    """Raised when a red point coincides with a blue point."""


@dataclass(frozen=True, order=True)
class Specification:
    horiz_counts: Tuple[int, ...]
    vert_counts: Tuple[int, ...]

    @property
    def cost(self) -> int:
        return sum(self.horiz_counts) + sum(self.vert_counts)

    def __str__(self) -> str:
        h = "".join(map(str, self.horiz_counts))
        v = "".join(map(str, self.vert_counts))
        return f"H[{h}] V[{v}]"


@dataclass(frozen=True)
class Solution:
    lines: Tuple[Line, ...]
    cost: int
    provenance: Optional[Specification] = None
    solver: str = "fpt"


def _vectors(length: int, total: int) -> Iterator[Tuple[int, ...]]:
    """All {0,1,2}-vectors of the given length and sum, lexicographically."""
    if length == 0:
        if total == 0:
            yield ()
        return
    for first in COUNTS:
        rest = total - first
        if 0 <= rest <= 2 * (length - 1):
            for tail in _vectors(length - 1, rest):
                yield (first,) + tail


def enumerate_specifications(strips: StripDecomposition) -> Iterator[Specification]:
    """Every specification, by nondecreasing cost then lexicographically."""
    nh, nv = strips.horizontal_count, strips.vertical_count
    for total in range(2 * (nh + nv) + 1):
        for vec in _vectors(nh + nv, total):
            yield Specification(vec[:nh], vec[nh:])


# A literal key names a strip-local variable by its coordinate:
# ("h", i, y) or ("v", j, x), plus the literal's polarity.
VarKey = Tuple[str, int, Fraction]
LitKey = Tuple[str, int, Fraction, bool]


class VariableMap:
    """Maps (strip, red coordinate) to a variable index or a pinned value."""

    def __init__(self) -> None:
        self.index: Dict[VarKey, int] = {}

    def var(self, key: VarKey) -> int:
        return self.index[key]

    def lookup(self, axis: str, strip: int, p: Point, strips: StripDecomposition) -> Union[int, bool]:
        """Variable for red point p in the given strip, or its pinned value."""
        bounds = strips.Y if axis == "h" else strips.X
        coord = p.y if axis == "h" else p.x
        if coord == bounds[strip + 1]:
            return True
        if coord == bounds[strip]:
            return False
        return self.index[(axis, strip, coord)]

    def __len__(self) -> int:
        return len(self.index)


def _pinned(bounds: Sequence[Bound], strip: int, coord: Fraction) -> Optional[bool]:
    if coord == bounds[strip + 1]:
        return True
    if coord == bounds[strip]:
        return False
    return None


def _open_overlap(lo: Bound, hi: Bound, a: Fraction, b: Fraction) -> bool:
    """Does the open strip (lo, hi) meet the open interval between a and b?"""
    return max(lo, min(a, b)) < min(hi, max(a, b))


class _Encoder:
    """Per-instance precomputation shared by every specification."""

    def __init__(self, instance: Instance, strips: StripDecomposition, prune: bool):
        self.instance = instance
        self.strips = strips
        self.prune = prune
        X, Y = strips.X, strips.Y
        self.reds = sorted(set(instance.red))
        self.blues = sorted(set(instance.blue))
        self.cells: Dict[Tuple[int, int], List[Point]] = {}
        for p in self.reds:
            vs, hs = strips.membership(p)
            for i in hs:
                for j in vs:
                    self.cells.setdefault((i, j), []).append(p)
        self.blue_pos = [(X.index(b.x), Y.index(b.y)) for b in self.blues]
        # Cells holding at least one red point separable from each blue point.
        self.candidate_cells: List[List[Tuple[int, int]]] = []
        for b in self.blues:
            found = []
            for (i, j), pts in sorted(self.cells.items()):
                if any(self._separable(p, b, i, j) for p in pts):
                    found.append((i, j))
            self.candidate_cells.append(found)
        self._templates: Dict[tuple, Optional[List[Tuple[LitKey, ...]]]] = {}

    def _separable(self, p: Point, b: Point, i: int, j: int) -> bool:
        X, Y = self.strips.X, self.strips.Y
        return _open_overlap(X[j], X[j + 1], p.x, b.x) or _open_overlap(Y[i], Y[i + 1], p.y, b.y)

    def _already_separated(self, p: Point, b: Point, i: int, j: int, hc: int, vc: int) -> bool:
        X, Y = self.strips.X, self.strips.Y
        if hc == 2:
            if Y[i] < p.y < Y[i + 1]:
                return True
            if p.y == Y[i] and b.y >= Y[i + 1]:
                return True
            if p.y == Y[i + 1] and b.y <= Y[i]:
                return True
        if vc == 2:
            if X[j] < p.x < X[j + 1]:
                return True
            if p.x == X[j] and b.x >= X[j + 1]:
                return True
            if p.x == X[j + 1] and b.x <= X[j]:
                return True
        return False

    def interesting(self, bi: int, i: int, j: int, spec: Specification, hpre: List[int], vpre: List[int]) -> bool:
        hc, vc = spec.horiz_counts[i], spec.vert_counts[j]
        if hc > 1 and vc > 1:
            return False
        mx, my = self.blue_pos[bi]
        # Lines strictly between the blue point and the cell, per axis.
        if j + 1 < mx and vpre[mx] - vpre[j + 1] > 0:
            return False
        if mx < j and vpre[j] - vpre[mx] > 0:
            return False
        if i + 1 < my and hpre[my] - hpre[i + 1] > 0:
            return False
        if my < i and hpre[i] - hpre[my] > 0:
            return False
        return True

    def clauses_for(self, bi: int, i: int, j: int, hc: int, vc: int) -> Optional[List[Tuple[LitKey, ...]]]:
        """Separation clauses of one interesting cell; None means an empty clause."""
        key = (bi, i, j, hc, vc)
        if key in self._templates:
            return self._templates[key]
        X, Y = self.strips.X, self.strips.Y
        b = self.blues[bi]
        hlit: Optional[bool] = None  # polarity of the y literal, if any
        if hc == 1:
            hlit = False if b.y >= Y[i + 1] else True
        vlit: Optional[bool] = None
        if vc == 1:
            vlit = False if b.x >= X[j + 1] else True
        pts = [
            p
            for p in self.cells[(i, j)]
            if self._separable(p, b, i, j) and not self._already_separated(p, b, i, j, hc, vc)
        ]
        if self.prune:
            pts = self._pareto(pts, hlit, vlit)
        result: Optional[List[Tuple[LitKey, ...]]] = []
        for p in pts:
            lits: List[LitKey] = []
            satisfied = False
            if hlit is not None:
                pin = _pinned(Y, i, p.y)
                if pin is None:
                    lits.append(("h", i, p.y, hlit))
                elif pin == hlit:
                    satisfied = True
            if vlit is not None:
                pin = _pinned(X, j, p.x)
                if pin is None:
                    lits.append(("v", j, p.x, vlit))
                elif pin == vlit:
                    satisfied = True
            if satisfied:
                continue
            if not lits:
                result = None
                break
            result.append(tuple(lits))
        if result is not None and self.prune:
            result = list(dict.fromkeys(result))
        self._templates[key] = result
        return result

    @staticmethod
    def _pareto(pts: List[Point], hlit: Optional[bool], vlit: Optional[bool]) -> List[Point]:
        """Keep only points whose clause is not implied by a harder one.

        A literal "line above p" gets harder as p rises, "line below p" as p
        drops, and likewise horizontally; a clause whose literals are each
        implied by another clause's literals is redundant.
        """
        if not pts:
            return pts

        def hard(p: Point) -> Tuple[Fraction, Fraction]:
            u = Fraction(0)
            v = Fraction(0)
            if hlit is not None:
                u = p.y if hlit is False else -p.y
            if vlit is not None:
                v = p.x if vlit is False else -p.x
            return u, v

        keyed = sorted(((hard(p), p) for p in pts), key=lambda t: (-t[0][0], -t[0][1], t[1]))
        kept: List[Point] = []
        best_v: Optional[Fraction] = None
        for (u, v), p in keyed:
            if best_v is None or v > best_v:
                kept.append(p)
                best_v = v
        return kept

    def formula(self, spec: Specification) -> Tuple[Optional[TwoSatFormula], VariableMap]:
        hc_all, vc_all = spec.horiz_counts, spec.vert_counts
        hpre = [0]
        for c in hc_all:
            hpre.append(hpre[-1] + c)
        vpre = [0]
        for c in vc_all:
            vpre.append(vpre[-1] + c)
        sep: List[Tuple[LitKey, ...]] = []
        empty = False
        for bi in range(len(self.blues)):
            for i, j in self.candidate_cells[bi]:
                if not self.interesting(bi, i, j, spec, hpre, vpre):
                    continue
                cl = self.clauses_for(bi, i, j, hc_all[i], vc_all[j])
                if cl is None:
                    empty = True
                    break
                sep.extend(cl)
            if empty:
                break
        vmap = VariableMap()
        if empty and self.prune:
            return None, vmap
        if self.prune:
            used = {(lk[0], lk[1], lk[2]) for c in sep for lk in c}
        else:
            used = set()
            X, Y = self.strips.X, self.strips.Y
            for p in self.reds:
                vs, hs = self.strips.membership(p)
                for i in hs:
                    if hc_all[i] == 1 and _pinned(Y, i, p.y) is None:
                        used.add(("h", i, p.y))
                for j in vs:
                    if vc_all[j] == 1 and _pinned(X, j, p.x) is None:
                        used.add(("v", j, p.x))
        for key in sorted(used, key=lambda k: (k[0], k[1], k[2])):
            vmap.index[key] = len(vmap.index)
        f = TwoSatFormula(len(vmap.index))
        if empty:
            f.add_clause()
        # Coherence: the single line of a strip is below/left of a prefix.
        chain: Dict[Tuple[str, int], List[Fraction]] = {}
        for axis, strip, coord in vmap.index:
            chain.setdefault((axis, strip), []).append(coord)
        for (axis, strip), coords in sorted(chain.items()):
            coords.sort()
            for c1, c2 in zip(coords, coords[1:]):
                f.add_clause((vmap.index[(axis, strip, c1)], False), (vmap.index[(axis, strip, c2)], True))
        for clause in sep:
            f.add_clause(*[(vmap.index[(a, s, c)], pol) for a, s, c, pol in clause])
        return f, vmap


def build_formula(
    instance: Instance, strips: StripDecomposition, spec: Specification
) -> Tuple[TwoSatFormula, VariableMap]:
    """The literal encoding: one clause per separable, unseparated red point."""
    f, vmap = _Encoder(instance, strips, prune=False).formula(spec)
    assert f is not None
    return f, vmap


def interesting_cells(
    instance: Instance, strips: StripDecomposition, spec: Specification, p_b: Point
) -> List[Tuple[int, int]]:
    """Cells (i, j) interesting for blue point p_b under the given strip counts."""
    enc = _Encoder(instance, strips, prune=False)
    bi = enc.blues.index(p_b)
    hpre = [0]
    for c in spec.horiz_counts:
        hpre.append(hpre[-1] + c)
    vpre = [0]
    for c in spec.vert_counts:
        vpre.append(vpre[-1] + c)
    return [(i, j) for i, j in enc.candidate_cells[bi] if enc.interesting(bi, i, j, spec, hpre, vpre)]


def _axis_coords(instance: Instance, axis: str) -> List[Fraction]:
    pts = list(instance.red) + list(instance.blue)
    return sorted({p.y if axis == "h" else p.x for p in pts})


def _finite(bound: Bound, coords: List[Fraction], low: bool) -> Fraction:
    if isinstance(bound, Fraction):
        return bound
    if not coords:
        return Fraction(-1 if low else 1)
    return coords[0] - 1 if low else coords[-1] + 1


def extract_lines(
    spec: Specification,
    assignment: Sequence[bool],
    variable_map: VariableMap,
    strips: StripDecomposition,
    instance: Instance,
) -> List[Line]:
    """Concrete lines realizing a satisfying assignment of the spec's formula."""
    lines: List[Line] = []
    for axis, counts, bounds in (("v", spec.vert_counts, strips.X), ("h", spec.horiz_counts, strips.Y)):
        coords = _axis_coords(instance, axis)
        make = Line.vertical if axis == "v" else Line.horizontal
        for s, count in enumerate(counts):
            if count == 0:
                continue
            lo = _finite(bounds[s], coords, True)
            hi = _finite(bounds[s + 1], coords, False)
            if count == 2:
                inner = [c for c in coords if lo < c < hi]
                if inner:
                    lines.append(make((lo + inner[0]) / 2))
                    lines.append(make((inner[-1] + hi) / 2))
                else:
                    lines.append(make(lo + (hi - lo) / 3))
                    lines.append(make(lo + 2 * (hi - lo) / 3))
                continue
            for (ax, st, c), var in variable_map.index.items():
                if ax != axis or st != s:
                    continue
                if assignment[var]:
                    hi = min(hi, c)
                else:
                    lo = max(lo, c)
            nxt = min([hi] + [c for c in coords if c > lo])
            lines.append(make((lo + nxt) / 2))
    return sort_lines(lines)


class _Filter:
    """Necessary condition on the set of nonempty strips.

    Every red/blue pair needs some strip with at least one line whose open
    interior lies strictly between the two points along that axis.
    """

    def __init__(self, instance: Instance, strips: StripDecomposition):
        nh = strips.horizontal_count
        self.nh = nh
        self.size = nh + strips.vertical_count
        reqs = set()
        hmask_cache: Dict[Tuple[Fraction, Fraction], int] = {}
        vmask_cache: Dict[Tuple[Fraction, Fraction], int] = {}

        def mask(bounds, a, b, cache):
            key = (a, b)
            if key not in cache:
                m = 0
                for s in range(len(bounds) - 1):
                    if _open_overlap(bounds[s], bounds[s + 1], a, b):
                        m |= 1 << s
                cache[key] = m
            return cache[key]

        for r in set(instance.red):
            for b in set(instance.blue):
                hm = mask(strips.Y, r.y, b.y, hmask_cache)
                vm = mask(strips.X, r.x, b.x, vmask_cache)
                reqs.add(hm | (vm << nh))
        minimal = []
        for req in sorted(reqs, key=lambda m: (bin(m).count("1"), m)):
            if not any(m & req == m for m in minimal):
                minimal.append(req)
        self.reqs = minimal
        self._memo: Dict[int, bool] = {}

    def ok(self, pattern: int) -> bool:
        hit = self._memo.get(pattern)
        if hit is None:
            hit = all(pattern & r for r in self.reqs)
            self._memo[pattern] = hit
        return hit

    def specs_of_cost(self, cost: int) -> List[Tuple[int, ...]]:
        """All count vectors of this cost whose nonzero pattern passes."""
        out = []
        for nz in range((cost + 1) // 2, min(cost, self.size) + 1):
            twos = cost - nz
            for support in combinations(range(self.size), nz):
                pattern = sum(1 << s for s in support)
                if not self.ok(pattern):
                    continue
                for doubled in combinations(support, twos):
                    vec = [0] * self.size
                    for s in support:
                        vec[s] = 1
                    for s in doubled:
                        vec[s] = 2
                    out.append(tuple(vec))
        out.sort()
        return out


def solve_axis_parallel(instance: Instance) -> Solution:
    """Minimum axis-parallel separation.

    Raises InseparableError when a red point coincides with a blue point.
    """
    if instance.inseparable:
        raise InseparableError("a red point coincides with a blue point")
    if not instance.red or not instance.blue:
        return Solution((), 0, None, "fpt")
    work = instance if len(instance.red) >= len(instance.blue) else instance.swapped()
    strips = strip_decomposition(work)
    enc = _Encoder(work, strips, prune=True)
    filt = _Filter(work, strips)
    nh = strips.horizontal_count
    for cost in range(2 * filt.size + 1):
        for vec in filt.specs_of_cost(cost):
            spec = Specification(vec[:nh], vec[nh:])
            f, vmap = enc.formula(spec)
            if f is None:
                continue
            values = solve(f)
            if values is None:
                continue
            lines = extract_lines(spec, values, vmap, strips, work)
            report = is_feasible(instance, lines)
            assert report.feasible, f"internal error: {report.describe()} for {spec}"
            return Solution(tuple(lines), len(lines), spec, "fpt")
    raise AssertionError("no specification was satisfiable")


def solve_axis_parallel_literal(instance: Instance) -> Solution:
    """Reference path: every specification in order, unpruned encoding."""
    if instance.inseparable:
        raise InseparableError("a red point coincides with a blue point")
    if not instance.red or not instance.blue:
        return Solution((), 0, None, "fpt-literal")
    work = instance if len(instance.red) >= len(instance.blue) else instance.swapped()
    strips = strip_decomposition(work)
    enc = _Encoder(work, strips, prune=False)
    for spec in enumerate_specifications(strips):
        f, vmap = enc.formula(spec)
        assert f is not None
        values = solve(f)
        if values is None:
            continue
        lines = extract_lines(spec, values, vmap, strips, work)
        report = is_feasible(instance, lines)
        assert report.feasible, f"internal error: {report.describe()} for {spec}"
        return Solution(tuple(lines), len(lines), spec, "fpt-literal")
    raise AssertionError("no specification was satisfiable")
