"""Exact planar primitives, the instance model and the strict-separation checker.

All coordinates are :class:`fractions.Fraction` values, so every predicate is
decided without rounding.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union

Rational = Fraction
Number = Union[int, Fraction, str]


def rational(value: Number) -> Fraction:
    """Coerce an int, Fraction or decimal/``p/q`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not coordinates")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coordinate")


class Point(NamedTuple):
    x: Fraction
    y: Fraction

    @classmethod
    def of(cls, x: Number, y: Number) -> "Point":
        return cls(rational(x), rational(y))

    def __repr__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class Instance:
    """Red and blue point lists; same-colour duplicates are allowed."""

    red: Tuple[Point, ...]
    blue: Tuple[Point, ...]
    inseparable: bool = field(init=False)

    def __init__(self, red: Iterable[Point], blue: Iterable[Point]):
        red_t = tuple(Point.of(*p) for p in red)
        blue_t = tuple(Point.of(*p) for p in blue)
        object.__setattr__(self, "red", red_t)
        object.__setattr__(self, "blue", blue_t)
        object.__setattr__(self, "inseparable", not set(red_t).isdisjoint(blue_t))

    @property
    def n(self) -> int:
        return len(self.red) + len(self.blue)

    def swapped(self) -> "Instance":
        return Instance(self.blue, self.red)

    def coincident_pair(self) -> Optional[Tuple[Point, Point]]:
        common = sorted(set(self.red) & set(self.blue))
        return (common[0], common[0]) if common else None


@dataclass(frozen=True, order=True)
class Line:
    """The line a*x + b*y = c in canonical scaling.

    The first nonzero of (a, b) is 1, so equal lines compare equal.
    Vertical lines are (1, 0, x0) and horizontal lines (0, 1, y0).
    """

    a: Fraction
    b: Fraction
    c: Fraction

    def __init__(self, a: Number, b: Number, c: Number):
        a, b, c = rational(a), rational(b), rational(c)
        if a == 0 and b == 0:
            raise ValueError("degenerate line: a and b are both zero")
        lead = a if a != 0 else b
        object.__setattr__(self, "a", a / lead)
        object.__setattr__(self, "b", b / lead)
        object.__setattr__(self, "c", c / lead)

    @classmethod
    def vertical(cls, x0: Number) -> "Line":
        return cls(1, 0, x0)

    @classmethod
    def horizontal(cls, y0: Number) -> "Line":
        return cls(0, 1, y0)

    @classmethod
    def through(cls, p: Point, q: Point) -> "Line":
        """The line through two distinct points."""
        if p == q:
            raise ValueError("a line needs two distinct points")
        a = q.y - p.y
        b = p.x - q.x
        return cls(a, b, a * p.x + b * p.y)

    @property
    def is_vertical(self) -> bool:
        return self.b == 0

    @property
    def is_horizontal(self) -> bool:
        return self.a == 0

    @property
    def offset(self) -> Fraction:
        """x0 of a vertical line or y0 of a horizontal one."""
        if not (self.is_vertical or self.is_horizontal):
            raise ValueError("general lines have no single offset")
        return self.c

    @property
    def kind(self) -> str:
        if self.is_vertical:
            return "V"
        if self.is_horizontal:
            return "H"
        return "G"

    def value(self, p: Point) -> Fraction:
        return self.a * p.x + self.b * p.y - self.c

    def sort_key(self) -> tuple:
        return ("VHG".index(self.kind), self.a, self.b, self.c)

    def __repr__(self) -> str:
        if self.is_vertical:
            return f"x={self.c}"
        if self.is_horizontal:
            return f"y={self.c}"
        return f"{self.a}x+{self.b}y={self.c}"


def sort_lines(lines: Iterable[Line]) -> List[Line]:
    return sorted(set(lines), key=Line.sort_key)


def side_of(line: Line, p: Point) -> int:
    """Sign of a*x + b*y - c at p; zero exactly on incidence."""
    v = line.value(p)
    return (v > 0) - (v < 0)


def separates(line: Line, p: Point, q: Point) -> bool:
    return side_of(line, p) * side_of(line, q) == -1


class PointOnLine(NamedTuple):
    point: Point
    line: Line


class UnseparatedPair(NamedTuple):
    red: Point
    blue: Point


Violation = Union[PointOnLine, UnseparatedPair]


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    violation: Optional[Violation] = None

    def describe(self) -> str:
        v = self.violation
        if v is None:
            return "feasible"
        if isinstance(v, PointOnLine):
            return f"PointOnLine point={v.point!r} line={v.line!r}"
        return f"UnseparatedPair red={v.red!r} blue={v.blue!r}"


class _IntLine:
    """A line scaled to integer coefficients for fast exact sign tests."""

    __slots__ = ("A", "B", "C")

    def __init__(self, line: Line):
        d = lcm(line.a.denominator, line.b.denominator, line.c.denominator)
        self.A = line.a.numerator * (d // line.a.denominator)
        self.B = line.b.numerator * (d // line.b.denominator)
        self.C = line.c.numerator * (d // line.c.denominator)

    def sign(self, xn: int, xd: int, yn: int, yd: int) -> int:
        v = self.A * xn * yd + self.B * yn * xd - self.C * xd * yd
        return (v > 0) - (v < 0)


def sign_vectors(points: Sequence[Point], lines: Sequence[Line]) -> List[Tuple[int, ...]]:
    """Per point, the tuple of side_of values against every line."""
    ints = [_IntLine(l) for l in lines]
    out = []
    for p in points:
        xn, xd, yn, yd = p.x.numerator, p.x.denominator, p.y.numerator, p.y.denominator
        out.append(tuple(L.sign(xn, xd, yn, yd) for L in ints))
    return out


def is_feasible(instance: Instance, lines: Iterable[Line]) -> FeasibilityReport:
    """Check strict separation of the instance by the given lines.

    Violations are reported deterministically: first any point lying on a
    line (lines in the given order, points in lexicographic order), then the
    lexicographically smallest unseparated (red, blue) pair.
    Two points are unseparated exactly when their sign vectors agree.
    """
    line_list = list(dict.fromkeys(lines))
    points = sorted(set(instance.red) | set(instance.blue))
    vectors = dict(zip(points, sign_vectors(points, line_list)))
    for li, line in enumerate(line_list):
        for p in points:
            if vectors[p][li] == 0:
                return FeasibilityReport(False, PointOnLine(p, line))
    blue_by_cell: Dict[Tuple[int, ...], Point] = {}
    for b in sorted(set(instance.blue)):
        blue_by_cell.setdefault(vectors[b], b)
    for r in sorted(set(instance.red)):
        b = blue_by_cell.get(vectors[r])
        if b is not None:
            return FeasibilityReport(False, UnseparatedPair(r, b))
    return FeasibilityReport(True)


NEG_INF = float("-inf")
POS_INF = float("inf")
Bound = Union[Fraction, float]


@dataclass(frozen=True)
class StripDecomposition:
    """Strips cut by the distinct blue coordinates.

    ``X[j] <= x <= X[j+1]`` is vertical strip j for j in 0..k, and likewise
    ``Y`` for horizontal strips.  ``X[0]`` and ``X[-1]`` are -inf and +inf.
    """

    X: Tuple[Bound, ...]
    Y: Tuple[Bound, ...]

    @property
    def k(self) -> int:
        return len(self.X) - 2

    @property
    def l(self) -> int:
        return len(self.Y) - 2

    @property
    def vertical_count(self) -> int:
        return len(self.X) - 1

    @property
    def horizontal_count(self) -> int:
        return len(self.Y) - 1

    def vertical_strips_of(self, p: Point) -> Tuple[int, ...]:
        return _strips_containing(self.X, p.x)

    def horizontal_strips_of(self, p: Point) -> Tuple[int, ...]:
        return _strips_containing(self.Y, p.y)

    def membership(self, p: Point) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """(vertical strip indices, horizontal strip indices) containing p."""
        return self.vertical_strips_of(p), self.horizontal_strips_of(p)


def _strips_containing(bounds: Sequence[Bound], v: Fraction) -> Tuple[int, ...]:
    inner = bounds[1:-1]
    pos = bisect_left(inner, v)
    if pos < len(inner) and inner[pos] == v:
        return (pos, pos + 1)
    return (pos,)


def strip_decomposition(instance: Instance) -> StripDecomposition:
    xs = sorted({b.x for b in instance.blue})
    ys = sorted({b.y for b in instance.blue})
    return StripDecomposition((NEG_INF, *xs, POS_INF), (NEG_INF, *ys, POS_INF))


def orientation(o: Point, a: Point, b: Point) -> int:
    v = (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
    return (v > 0) - (v < 0)


def convex_hull(points: Iterable[Point]) -> List[Point]:
    """Monotone-chain hull, counter-clockwise, collinear points dropped."""
    pts = sorted(set(points))
    if len(pts) <= 2:
        return pts
    lower: List[Point] = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: List[Point] = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    return (
        orientation(a, b, p) == 0
        and min(a.x, b.x) <= p.x <= max(a.x, b.x)
        and min(a.y, b.y) <= p.y <= max(a.y, b.y)
    )


def _segments_meet(a: Point, b: Point, c: Point, d: Point) -> bool:
    o1, o2 = orientation(a, b, c), orientation(a, b, d)
    o3, o4 = orientation(c, d, a), orientation(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        _on_segment(c, a, b)
        or _on_segment(d, a, b)
        or _on_segment(a, c, d)
        or _on_segment(b, c, d)
    )


def _in_closed_hull(p: Point, hull: Sequence[Point]) -> bool:
    if len(hull) == 1:
        return p == hull[0]
    if len(hull) == 2:
        return _on_segment(p, hull[0], hull[1])
    m = len(hull)
    return all(orientation(hull[i], hull[(i + 1) % m], p) >= 0 for i in range(m))


def _edges(hull: Sequence[Point]) -> List[Tuple[Point, Point]]:
    if len(hull) == 2:
        return [(hull[0], hull[1])]
    if len(hull) < 2:
        return []
    return [(hull[i], hull[(i + 1) % len(hull)]) for i in range(len(hull))]


def hulls_strictly_disjoint(S: Iterable[Point], T: Iterable[Point]) -> bool:
    """True iff the closed convex hulls of S and T do not meet.

    For finite sets this is the same as S and T being strictly separable by
    one line.  An empty side is trivially separable.
    """
    hs, ht = convex_hull(S), convex_hull(T)
    if not hs or not ht:
        return True
    if any(_in_closed_hull(p, ht) for p in hs) or any(_in_closed_hull(p, hs) for p in ht):
        return False
    for a, b in _edges(hs):
        for c, d in _edges(ht):
            if _segments_meet(a, b, c, d):
                return False
    return True
