"""Hardness reduction from Structured 2-Track Hitting Set (S2-THS).

An S2-THS instance has k colour classes of t elements on each of two tracks.
Track A lists the classes in order 1..k, each class in order 1..t.  Track B
lists the classes in the order sigma(1), ..., sigma(k), and the elements of
class j in the order sigma_j(1), ..., sigma_j(t).  Element i of class j is the
2-element (a^j_i, b^j_i).  A solution picks one element u_j per class so that
every A-interval contains some a^j_{u_j} and every B-interval some b^j_{u_j}.

``build_rbs_instance`` turns such an instance into a red-blue point set that
6k+14 lines separate when the S2-THS instance has a solution;
``witness_lines`` constructs those lines from a solution.

Coordinates: A-element s = (j-1)t + i sits at position s of track A.
Positions on track B are computed by :meth:`S2THSInstance.b_position`.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .geometry import Instance, Line, Point

Interval = Tuple[int, int]
Transform = Callable[[Fraction, Fraction], Point]

DEFAULT_BIT_BUDGET = 4096
BRUTE_FORCE_LIMIT = 10**6


class LayoutOverflowError(ValueError):
    """Coordinates would exceed the configured bit budget."""


class LayoutError(RuntimeError):
    """The gadget placement failed an internal consistency check."""


def _check_perm(perm: Sequence[int], size: int, name: str) -> Tuple[int, ...]:
    perm = tuple(int(v) for v in perm)
    if sorted(perm) != list(range(1, size + 1)):
        raise ValueError(f"{name} is not a permutation of 1..{size}: {perm}")
    return perm


@dataclass(frozen=True)
class S2THSInstance:
    """An S2-THS instance; intervals are 1-based inclusive index pairs.

    The k full-class A-intervals [(j-1)t+1, jt] are appended to
    ``intervals_A`` when missing; they never change the answer.
    """

    k: int
    t: int
    sigma: Tuple[int, ...]
    sigmas: Tuple[Tuple[int, ...], ...]
    intervals_A: Tuple[Interval, ...] = ()
    intervals_B: Tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        if self.k < 1 or self.t < 1:
            raise ValueError("k and t must be positive")
        object.__setattr__(self, "sigma", _check_perm(self.sigma, self.k, "sigma"))
        if len(self.sigmas) != self.k:
            raise ValueError(f"expected {self.k} class permutations, got {len(self.sigmas)}")
        object.__setattr__(
            self,
            "sigmas",
            tuple(_check_perm(p, self.t, f"sigma_{j + 1}") for j, p in enumerate(self.sigmas)),
        )
        size = self.k * self.t
        checked = []
        for track, ivs in (("A", self.intervals_A), ("B", self.intervals_B)):
            out = []
            for a, b in ivs:
                a, b = int(a), int(b)
                if not 1 <= a <= b <= size:
                    raise ValueError(f"{track}-interval ({a}, {b}) outside 1..{size}")
                out.append((a, b))
            checked.append(out)
        ivs_a, ivs_b = checked
        for j in range(self.k):
            full = (j * self.t + 1, (j + 1) * self.t)
            if full not in ivs_a:
                ivs_a.append(full)
        object.__setattr__(self, "intervals_A", tuple(ivs_a))
        object.__setattr__(self, "intervals_B", tuple(ivs_b))

    @property
    def size(self) -> int:
        return self.k * self.t

    def class_position(self, j: int) -> int:
        """Block index (1-based) of class j on track B."""
        return self.sigma.index(j) + 1

    def b_position(self, j: int, i: int) -> int:
        """Position of b^j_i on track B."""
        return (self.class_position(j) - 1) * self.t + self.sigmas[j - 1].index(i) + 1

    def a_position(self, j: int, i: int) -> int:
        return (j - 1) * self.t + i

    def is_solution(self, witness: Sequence[int]) -> bool:
        if len(witness) != self.k or any(not 1 <= u <= self.t for u in witness):
            return False
        a_hits = [self.a_position(j + 1, u) for j, u in enumerate(witness)]
        b_hits = [self.b_position(j + 1, u) for j, u in enumerate(witness)]
        return all(any(a <= s <= b for s in a_hits) for a, b in self.intervals_A) and all(
            any(a <= s <= b for s in b_hits) for a, b in self.intervals_B
        )


def solve_s2ths_bruteforce(inst: S2THSInstance) -> Optional[Tuple[int, ...]]:
    """Lexicographically first solution, or None."""
    if inst.t**inst.k > BRUTE_FORCE_LIMIT:
        raise ValueError(f"t^k = {inst.t ** inst.k} exceeds the brute-force limit")
    for witness in product(range(1, inst.t + 1), repeat=inst.k):
        if inst.is_solution(witness):
            return witness
    return None


def random_planted_instance(
    k: int, t: int, rng: random.Random, intervals_per_track: int = 4
) -> Tuple[S2THSInstance, Tuple[int, ...]]:
    """A random instance with a planted solution, which is returned too."""
    sigma = list(range(1, k + 1))
    rng.shuffle(sigma)
    sigmas = []
    for _ in range(k):
        p = list(range(1, t + 1))
        rng.shuffle(p)
        sigmas.append(p)
    witness = tuple(rng.randint(1, t) for _ in range(k))
    base = S2THSInstance(k, t, tuple(sigma), tuple(map(tuple, sigmas)))
    size = k * t
    ivs = {}
    for track in ("A", "B"):
        hits = [
            base.a_position(j + 1, u) if track == "A" else base.b_position(j + 1, u)
            for j, u in enumerate(witness)
        ]
        out = []
        for _ in range(rng.randint(0, intervals_per_track)):
            s = rng.choice(hits)
            out.append((rng.randint(1, s), rng.randint(s, size)))
        ivs[track] = tuple(out)
    inst = S2THSInstance(k, t, tuple(sigma), tuple(map(tuple, sigmas)), ivs["A"], ivs["B"])
    return inst, witness


def parse_s2ths(text: str) -> S2THSInstance:
    """Read the plain-text S2-THS format.

    Records, one per line (``#`` starts a comment)::

        k 2
        t 3
        sigma 2 1
        sigmas 1 3 1 2        # class 1: sigma_1 = (3, 1, 2)
        A 1 4
        B 2 5
    """
    k = t = None
    sigma: Optional[List[int]] = None
    sigmas: Dict[int, List[int]] = {}
    ivs: Dict[str, List[Interval]] = {"A": [], "B": []}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, *rest = line.split()
        try:
            vals = [int(v) for v in rest]
        except ValueError as exc:
            raise ValueError(f"line {lineno}: expected integers: {raw!r}") from exc
        if head == "k" and len(vals) == 1:
            k = vals[0]
        elif head == "t" and len(vals) == 1:
            t = vals[0]
        elif head == "sigma":
            sigma = vals
        elif head == "sigmas" and len(vals) >= 2:
            sigmas[vals[0]] = vals[1:]
        elif head in ("A", "B") and len(vals) == 2:
            ivs[head].append((vals[0], vals[1]))
        else:
            raise ValueError(f"line {lineno}: unrecognized record: {raw!r}")
    if k is None or t is None or sigma is None:
        raise ValueError("missing k, t or sigma record")
    if sorted(sigmas) != list(range(1, k + 1)):
        raise ValueError("need one 'sigmas' record per class 1..k")
    return S2THSInstance(k, t, tuple(sigma), tuple(tuple(sigmas[j]) for j in range(1, k + 1)), tuple(ivs["A"]), tuple(ivs["B"]))


def emit_s2ths(inst: S2THSInstance) -> str:
    rows = [f"k {inst.k}", f"t {inst.t}", "sigma " + " ".join(map(str, inst.sigma))]
    for j, p in enumerate(inst.sigmas, 1):
        rows.append(f"sigmas {j} " + " ".join(map(str, p)))
    rows += [f"A {a} {b}" for a, b in inst.intervals_A]
    rows += [f"B {a} {b}" for a, b in inst.intervals_B]
    return "\n".join(rows) + "\n"


@dataclass
class GadgetPoints:
    red: List[Point] = field(default_factory=list)
    blue: List[Point] = field(default_factory=list)
    tag: str = ""

    def extend(self, other: "GadgetPoints") -> None:
        self.red.extend(other.red)
        self.blue.extend(other.blue)

    def box(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        pts = self.red + self.blue
        return (
            min(p.x for p in pts),
            min(p.y for p in pts),
            max(p.x for p in pts),
            max(p.y for p in pts),
        )


def _plain(x: Fraction, y: Fraction) -> Point:
    return Point(Fraction(x), Fraction(y))


def long_alley(
    origin: Point,
    orientation: str,
    length: int,
    red_side: str,
    width: Fraction = Fraction(1),
    transform: Transform = _plain,
    tag: str = "alley",
) -> GadgetPoints:
    """Two parallel runs of ``length`` unit-spaced points, one per colour.

    Horizontal alleys have rows at origin.y and origin.y + width and
    ``red_side`` is "above" or "below"; vertical alleys have columns at
    origin.x and origin.x + width and ``red_side`` is "left" or "right".
    ``transform`` maps the local coordinates to the plane.
    """
    ox, oy = Fraction(origin[0]), Fraction(origin[1])
    width = Fraction(width)
    if orientation == "h":
        if red_side not in ("above", "below"):
            raise ValueError("horizontal alleys have red above or below")
        first = [transform(ox + m, oy) for m in range(length)]
        second = [transform(ox + m, oy + width) for m in range(length)]
        red, blue = (second, first) if red_side == "above" else (first, second)
    elif orientation == "v":
        if red_side not in ("left", "right"):
            raise ValueError("vertical alleys have red left or right")
        first = [transform(ox, oy + m) for m in range(length)]
        second = [transform(ox + width, oy + m) for m in range(length)]
        red, blue = (first, second) if red_side == "left" else (second, first)
    else:
        raise ValueError("orientation must be 'h' or 'v'")
    return GadgetPoints(red, blue, tag)


def alley_length(k: int) -> int:
    return 100 * (k * k + 1)


def interval_gadget_points(s: int, s2: int, x0: Fraction, y0: Fraction, transform: Transform = _plain) -> GadgetPoints:
    """The red pair encoding the interval [s, s2] next to a track diagonal."""
    if s > s2:
        raise ValueError(f"empty interval [{s}, {s2}]")
    x0, y0 = Fraction(x0), Fraction(y0)
    red = [
        transform(x0 + 4 * s - 7, y0 + 4 * s2 - 5),
        transform(x0 + 4 * s2 - 5, y0 + 4 * s - 7),
    ]
    return GadgetPoints(red, [], f"interval:{s}-{s2}")


def track_diagonal(count: int, x0: Fraction, y0: Fraction, transform: Transform = _plain) -> GadgetPoints:
    """Blue points (x0 + 4(m-1), y0 + 4(m-1)) for m = 1..count."""
    blue = [transform(Fraction(x0) + 4 * m, Fraction(y0) + 4 * m) for m in range(count)]
    return GadgetPoints([], blue, "diagonal")


def simple_interval_gadget(t: int) -> GadgetPoints:
    """Diagonal of t-1 blue points with the red pair of the full interval [1, t]."""
    g = track_diagonal(t - 1, 0, 0)
    g.extend(interval_gadget_points(1, t, 0, 0))
    g.tag = "simple-interval"
    return g


def rotation_5deg() -> Tuple[Fraction, Fraction, Fraction]:
    """(u, cos, sin) of an exact rational rotation within 1e-4 rad of 5 degrees.

    cos = (1-u^2)/(1+u^2) and sin = 2u/(1+u^2) with u a rational close to
    tan(2.5 degrees), so cos^2 + sin^2 = 1 holds exactly.
    """
    u = Fraction(math.tan(math.radians(2.5))).limit_denominator(1000)
    den = 1 + u * u
    return u, (1 - u * u) / den, 2 * u / den


Box = Tuple[Fraction, Fraction, Fraction, Fraction]


@dataclass
class LayoutMetadata:
    k: int
    t: int
    z: int
    ell: int
    v_hat: int
    h_hat: int
    eps: Fraction
    x0A: int
    y0A: int
    y1: int
    rotation: Tuple[Fraction, Fraction]
    rotation_u: Fraction
    x_sigma: int
    y_id: int
    x_h: int
    origin_B: Point
    gap_B: int
    corner_offset: int
    alley_width_outer: Fraction
    catalogs: Dict[str, Tuple[Line, ...]]
    forced: Tuple[Line, ...]
    boxes: Dict[str, Box]
    point_count: int
    gadgets: Dict[str, Tuple[GadgetPoints, ...]] = field(repr=False, default_factory=dict)

    def catalog_line(self, family: str, s: int) -> Line:
        return self.catalogs[family][s - 1]


def expected_point_count(k: int, t: int, n_intervals_a: int, n_intervals_b: int) -> int:
    """Closed-form size of the built instance.

    ``n_intervals_a`` counts the A-intervals including the appended
    full-class ones.
    """
    ell = alley_length(k)
    K = k * t
    outer = 28 * 2 * ell
    inner_alleys = 12 * k * 2 * ell
    tracks = 2 * (K - 1) + 2 * n_intervals_a + 2 * n_intervals_b
    cells = 2 * k * ((t - 1) + 2)
    half_perm = 2 * k * (4 * t + 2)
    return outer + inner_alleys + tracks + cells + half_perm


# Super-cell grid: group tag -> (column, row).  Columns run west to east
# (A_W, G(A), G(sigma), G(B), G(~h), A_E), rows south to north
# (A_S, G(id), G(~v), G(B), G(A), A_N).
_GRID = {
    "A_W:A": (0, 4),
    "A_W:id": (0, 1),
    "G(A)": (1, 4),
    "A_N:A": (1, 5),
    "A_S:A": (1, 0),
    "G(sigma)": (2, 4),
    "A_N:sigma": (2, 5),
    "A_S:sigma": (2, 0),
    "G~v": (2, 2),
    "G(id)": (2, 1),
    "B_W": (2, 3),
    "G(B)": (3, 3),
    "B_N": (3, 4),
    "B_S": (3, 2),
    "B_E": (4, 3),
    "G~h": (4, 1),
    "A_E:A": (5, 4),
    "A_E:id": (5, 1),
}


def _bits(v: Fraction) -> int:
    return max(v.numerator.bit_length(), v.denominator.bit_length())


def _union_box(boxes: Sequence[Box]) -> Box:
    return (
        min(b[0] for b in boxes),
        min(b[1] for b in boxes),
        max(b[2] for b in boxes),
        max(b[3] for b in boxes),
    )


def build_rbs_instance(
    inst: S2THSInstance, bit_budget: int = DEFAULT_BIT_BUDGET
) -> Tuple[Instance, LayoutMetadata]:
    """Assemble the red-blue instance and its layout.

    The super-cell grid formed by the 14 forced lines is, west to east,
    A_W | G(A) | G(sigma) column | G(B) column | G(~h) column | A_E and,
    south to north, A_S | G(id) row | G(~v) row | G(B) row | G(A) row | A_N.
    Every distance below is a lower bound from the construction, raised
    where the local geometry needs more room (see LayoutMetadata).
    """
    k, t = inst.k, inst.t
    K = k * t
    ell = alley_length(k)
    v_hat = 100 * (K * K + 1)
    u, cos, sin = rotation_5deg()
    h_hat = math.ceil(v_hat / (cos * sin))
    z = 100 * (h_hat**5 + 1)
    if 10 * z.bit_length() + 16 > bit_budget:
        raise LayoutOverflowError(
            f"eps = z^-10 needs about {10 * z.bit_length()} bits, budget is {bit_budget}"
        )
    eps = Fraction(1, z**10)
    w_outer = Fraction(1, K**10)
    margin = 10 * t
    width = 4 * t - 2  # alley rows sit one unit outside the extreme candidate lines
    corner = 15 * (4 * t + 4)  # distance of half-permutation red corners from q
    guard_arm = 2  # distance along the slanted line of the extra blue guards

    # --- G(B) in local coordinates, rotated about its own origin -----------
    def rot(x: Fraction, y: Fraction) -> Point:
        return Point(cos * x + sin * y, -sin * x + cos * y)

    gap = margin + math.ceil(Fraction(4 * K + ell, 8))
    bottom = -(4 * K - 5)
    right = 4 * K - 5

    def b_local_groups(tf: Transform) -> Dict[str, List[GadgetPoints]]:
        groups: Dict[str, List[GadgetPoints]] = {"G(B)": [], "B_N": [], "B_S": [], "B_W": [], "B_E": []}
        diag = GadgetPoints([], [tf(Fraction(4 * m), Fraction(-4 * m)) for m in range(K - 1)], "G(B):diagonal")
        groups["G(B)"].append(diag)
        for a, b in inst.intervals_B:
            groups["G(B)"].append(
                GadgetPoints([tf(Fraction(4 * a - 7), Fraction(-(4 * b - 5))), tf(Fraction(4 * b - 5), Fraction(-(4 * a - 7)))], [], f"G(B):interval:{a}-{b}")
            )
        for c in range(1, k + 1):
            x_left = 4 * (c - 1) * t - 3
            odd = c % 2 == 1
            groups["B_N"].append(long_alley((x_left, 3 + gap), "v", ell, "left" if odd else "right", width, tf, f"B_N:{c}"))
            groups["B_S"].append(long_alley((x_left, bottom - gap - (ell - 1)), "v", ell, "right" if odd else "left", width, tf, f"B_S:{c}"))
            y_low = -(4 * c * t - 5)
            groups["B_W"].append(long_alley((-3 - gap - (ell - 1), y_low), "h", ell, "above" if odd else "below", width, tf, f"B_W:{c}"))
            groups["B_E"].append(long_alley((right + gap, y_low), "h", ell, "below" if odd else "above", width, tf, f"B_E:{c}"))
        return groups

    rel = b_local_groups(rot)
    rel_box = {name: _union_box([g.box() for g in gs]) for name, gs in rel.items()}

    # --- track A, G(sigma) -------------------------------------------------
    x0A = ell + margin + 4
    x_sigma = x0A + 4 * K + 2 * margin
    # G(B) row sits just below the G(A) row, and B_N shares the G(A) row,
    # so that row must be tall enough for B_N as well.
    row3_top = max(rel_box[n][3] for n in ("G(B)", "B_W", "B_E"))
    y0A = min(
        z - ell - margin - 4 * K,
        math.floor(z - ell - margin + 3 + 2 * margin + row3_top - rel_box["B_N"][3]),
    )
    oBy = Fraction(y0A - 3 - 2 * margin) - row3_top

    # SL fan: p_m on the bottom edge of G(B), q on the line y = y1 below
    # G(sigma).  The mean direction is the rotated vertical (sin, cos).
    p_mean_rel = rot(Fraction(2 * K - 4), Fraction(-4 * K + 4))
    p_mean_y = oBy + p_mean_rel.y
    q_mean_x = x_sigma + 2 * K - 4
    base_x = q_mean_x - p_mean_rel.x
    col3_min_rel = min(rel_box[n][0] for n in ("G(B)", "B_N", "B_S"))
    col3_max_rel = max(rel_box[n][2] for n in ("G(B)", "B_N", "B_S"))
    oBx_min = max(
        Fraction(x0A + 4 * K + margin) - rel_box["B_W"][0],
        Fraction(x_sigma + 4 * K + margin) - col3_min_rel,
    )
    v_fit = (oBx_min - base_x) * cos / sin
    spread = 4 * (t - 1) + 1 + K
    reach = gap + ell + 4 * K + 8
    v_drift = 2 * spread * reach
    v_needed = max(v_fit, Fraction(v_drift))
    y1 = min(y0A - 2 * v_hat, math.floor(p_mean_y - v_needed))
    oBx = base_x + (p_mean_y - y1) * sin / cos
    origin_B = Point(oBx, oBy)

    def in_B(x: Fraction, y: Fraction) -> Point:
        r = rot(x, y)
        return Point(oBx + r.x, oBy + r.y)

    # SL' fan: p'_m on the right edge of G(B), q' on the line x = x_h.
    pp_mean = in_B(Fraction(4 * K - 4), Fraction(-(2 * K - 4)))
    y_id_max = y1 - corner - 2 * margin - 4 * K
    x_from_rows = pp_mean.x + (pp_mean.y - (y_id_max + 2 * K - 4)) * cos / sin
    x_h = math.ceil(
        max(
            Fraction(x_sigma + 4 * K - 5 + h_hat),
            x_from_rows,
            oBx + col3_max_rel + margin + corner + 2,
        )
    )
    y_id = math.floor(pp_mean.y - (x_h - pp_mean.x) * sin / cos - (2 * K - 4))

    # --- catalogs ----------------------------------------------------------
    def p_point(m: int) -> Point:
        return in_B(Fraction(4 * m - 6), Fraction(-4 * K + 4))

    def pp_point(m: int) -> Point:
        return in_B(Fraction(4 * K - 4), Fraction(-(4 * m - 6)))

    cat: Dict[str, List[Line]] = {n: [] for n in ("HL", "VL", "VL'", "HL'", "SL", "SL'")}
    q_pts: Dict[int, Point] = {}
    qq_pts: Dict[int, Point] = {}
    for j in range(1, k + 1):
        c = inst.class_position(j)
        for i in range(1, t + 1):
            s = inst.a_position(j, i)
            m = inst.b_position(j, i)
            vx = x_sigma + 4 * (c - 1) * t + 4 * i - 6
            hy = y_id + 4 * (c - 1) * t + 4 * i - 6
            q_pts[s] = Point(Fraction(vx), Fraction(y1))
            qq_pts[s] = Point(Fraction(x_h), Fraction(hy))
            cat["HL"].append(Line.horizontal(y0A + 4 * s - 6))
            cat["VL"].append(Line.vertical(x0A + 4 * s - 6))
            cat["VL'"].append(Line.vertical(vx))
            cat["HL'"].append(Line.horizontal(hy))
            cat["SL"].append(Line.through(p_point(m), q_pts[s]))
            cat["SL'"].append(Line.through(pp_point(m), qq_pts[s]))

    # --- points ------------------------------------------------------------
    groups: Dict[str, List[GadgetPoints]] = {name: [] for name in _GRID}
    for j in range(1, k + 1):
        odd = j % 2 == 1
        lo_a = y0A + 4 * (j - 1) * t - 3
        lo_id = y_id + 4 * (j - 1) * t - 3
        groups["A_W:A"].append(long_alley((1, lo_a), "h", ell, "above" if odd else "below", width, tag=f"A_W:A:{j}"))
        groups["A_E:A"].append(long_alley((z - ell + 1, lo_a), "h", ell, "below" if odd else "above", width, tag=f"A_E:A:{j}"))
        groups["A_W:id"].append(long_alley((1, lo_id), "h", ell, "above" if odd else "below", width, tag=f"A_W:id:{j}"))
        groups["A_E:id"].append(long_alley((z - ell + 1, lo_id), "h", ell, "below" if odd else "above", width, tag=f"A_E:id:{j}"))
        for name, x0 in (("A", x0A), ("sigma", x_sigma)):
            left = x0 + 4 * (j - 1) * t - 3
            groups[f"A_N:{name}"].append(long_alley((left, z - ell + 1), "v", ell, "left" if odd else "right", width, tag=f"A_N:{name}:{j}"))
            groups[f"A_S:{name}"].append(long_alley((left, 1), "v", ell, "right" if odd else "left", width, tag=f"A_S:{name}:{j}"))

    groups["G(A)"].append(track_diagonal(K - 1, x0A, y0A))
    for a, b in inst.intervals_A:
        g = interval_gadget_points(a, b, x0A, y0A)
        g.tag = f"G(A):interval:{a}-{b}"
        groups["G(A)"].append(g)

    for j in range(1, k + 1):
        c = inst.class_position(j)
        for name, cx, cy in (
            ("G(sigma)", x_sigma + 4 * (c - 1) * t, y0A + 4 * (j - 1) * t),
            ("G(id)", x_sigma + 4 * (c - 1) * t, y_id + 4 * (c - 1) * t),
        ):
            cell = track_diagonal(t - 1, cx, cy)
            cell.extend(interval_gadget_points(1, t, cx, cy))
            cell.tag = f"{name}:cell:{j}"
            groups[name].append(cell)

    for j in range(1, k + 1):
        c = inst.class_position(j)
        gv = GadgetPoints(tag=f"G~v:{j}")
        gh = GadgetPoints(tag=f"G~h:{j}")
        for i in range(1, t + 1):
            s = inst.a_position(j, i)
            q, qq = q_pts[s], qq_pts[s]
            sl, slp = cat["SL"][s - 1], cat["SL'"][s - 1]
            gv.blue += [Point(q.x - eps, q.y), Point(q.x + eps, q.y)]
            up_y, down_y = q.y + guard_arm, q.y - guard_arm
            gv.blue += [
                Point((sl.c - sl.b * up_y) / sl.a + eps, up_y),
                Point((sl.c - sl.b * down_y) / sl.a - eps, down_y),
            ]
            gh.blue += [Point(qq.x, qq.y - eps), Point(qq.x, qq.y + eps)]
            left_x, right_x = qq.x - guard_arm, qq.x + guard_arm
            gh.blue += [
                Point(left_x, (slp.c - slp.a * left_x) / slp.b + eps),
                Point(right_x, (slp.c - slp.a * right_x) / slp.b - eps),
            ]
        band_x = x_sigma + 4 * (c - 1) * t
        gv.red += [
            Point(Fraction(band_x - 3), Fraction(y1 - corner)),
            Point(Fraction(band_x + 4 * t - 5), Fraction(y1 + corner)),
        ]
        band_y = y_id + 4 * (c - 1) * t
        gh.red += [
            Point(Fraction(x_h - corner), Fraction(band_y + 4 * t - 5)),
            Point(Fraction(x_h + corner), Fraction(band_y - 3)),
        ]
        groups["G~v"].append(gv)
        groups["G~h"].append(gh)

    for name, gs in b_local_groups(in_B).items():
        groups[name].extend(gs)

    # --- forced lines from the super-cell grid ------------------------------
    boxes = {name: _union_box([g.box() for g in gs]) for name, gs in groups.items() if gs}

    def cut(axis: int, index: int) -> Fraction:
        before = [boxes[n][axis + 2] for n in boxes if _GRID[n][axis] < index]
        after = [boxes[n][axis] for n in boxes if _GRID[n][axis] >= index]
        lo, hi = max(before), min(after)
        if not lo < hi:
            raise LayoutError(f"super-cell {'row' if axis else 'column'} {index} overlaps ({lo} >= {hi})")
        return (lo + hi) / 2

    half = Fraction(1, 2)
    vs = [half] + [cut(0, a) for a in range(1, 6)] + [z + half]
    hs = [half] + [cut(1, b) for b in range(1, 6)] + [z + half]
    if min(b[0] for b in boxes.values()) <= half or min(b[1] for b in boxes.values()) <= half:
        raise LayoutError("gadgets reach the south-west forced lines")
    if max(b[2] for b in boxes.values()) >= z + half or max(b[3] for b in boxes.values()) >= z + half:
        raise LayoutError("gadgets reach the north-east forced lines")
    forced = tuple(Line.vertical(x) for x in vs) + tuple(Line.horizontal(y) for y in hs)

    # 28 outer alleys, colours alternating clockwise around the grid.
    outer: List[GadgetPoints] = []
    ring = (
        [("top", x) for x in vs]
        + [("right", y) for y in reversed(hs)]
        + [("bottom", x) for x in reversed(vs)]
        + [("left", y) for y in hs]
    )
    for n, (side, off) in enumerate(ring):
        lead_red = n % 2 == 0
        lo, hi = off - w_outer / 2, off + w_outer / 2
        if side == "top":
            lead = [Point(lo, Fraction(z + m)) for m in range(1, ell + 1)]
            trail = [Point(hi, Fraction(z + m)) for m in range(1, ell + 1)]
        elif side == "right":
            lead = [Point(Fraction(z + m), hi) for m in range(1, ell + 1)]
            trail = [Point(Fraction(z + m), lo) for m in range(1, ell + 1)]
        elif side == "bottom":
            lead = [Point(hi, Fraction(1 - m)) for m in range(1, ell + 1)]
            trail = [Point(lo, Fraction(1 - m)) for m in range(1, ell + 1)]
        else:
            lead = [Point(Fraction(1 - m), lo) for m in range(1, ell + 1)]
            trail = [Point(Fraction(1 - m), hi) for m in range(1, ell + 1)]
        red, blue = (lead, trail) if lead_red else (trail, lead)
        outer.append(GadgetPoints(red, blue, f"outer:{n}:{side}"))
    groups["outer"] = outer
    for side in ("top", "right", "bottom", "left"):
        boxes[f"outer:{side}"] = _union_box([g.box() for g in outer if g.tag.endswith(side)])

    red: List[Point] = []
    blue: List[Point] = []
    for gs in groups.values():
        for g in gs:
            red.extend(g.red)
            blue.extend(g.blue)

    coord_bits = max(_bits(v) for p in red + blue for v in p)
    if coord_bits > bit_budget:
        raise LayoutOverflowError(f"coordinates need {coord_bits} bits, budget is {bit_budget}")

    instance = Instance(red, blue)
    meta = LayoutMetadata(
        k=k,
        t=t,
        z=z,
        ell=ell,
        v_hat=v_hat,
        h_hat=h_hat,
        eps=eps,
        x0A=x0A,
        y0A=y0A,
        y1=y1,
        rotation=(cos, sin),
        rotation_u=u,
        x_sigma=x_sigma,
        y_id=y_id,
        x_h=x_h,
        origin_B=origin_B,
        gap_B=gap,
        corner_offset=corner,
        alley_width_outer=w_outer,
        catalogs={n: tuple(ls) for n, ls in cat.items()},
        forced=forced,
        boxes=boxes,
        point_count=instance.n,
        gadgets={name: tuple(gs) for name, gs in groups.items()},
    )
    return instance, meta


def witness_lines(inst: S2THSInstance, layout: LayoutMetadata, witness: Sequence[int]) -> List[Line]:
    """The 6k+14 lines separating the built instance, given a solution."""
    if not inst.is_solution(witness):
        raise ValueError(f"{tuple(witness)} does not solve the S2-THS instance")
    lines = list(layout.forced)
    for j, u in enumerate(witness, 1):
        s = inst.a_position(j, u)
        for family in ("HL", "VL", "VL'", "HL'", "SL", "SL'"):
            lines.append(layout.catalog_line(family, s))
    if len(set(lines)) != 6 * inst.k + 14:
        raise LayoutError("witness lines are not pairwise distinct")
    return lines


def overlapping_boxes(layout: LayoutMetadata) -> List[Tuple[str, str]]:
    """Pairs of gadget groups whose closed bounding boxes intersect."""
    names = sorted(layout.boxes)
    out = []
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            A, B = layout.boxes[a], layout.boxes[b]
            if A[0] <= B[2] and B[0] <= A[2] and A[1] <= B[3] and B[1] <= A[3]:
                out.append((a, b))
    return out


def _line_record(line: Line) -> List[str]:
    return [str(line.a), str(line.b), str(line.c)]


def layout_sidecar(layout: LayoutMetadata) -> str:
    """JSON text with the scalars, catalogs, forced lines and boxes.

    Rationals are written as ``p/q`` strings so nothing is rounded.
    """
    doc = {
        "k": layout.k,
        "t": layout.t,
        "z": str(layout.z),
        "ell": layout.ell,
        "v_hat": layout.v_hat,
        "h_hat": layout.h_hat,
        "eps": str(layout.eps),
        "x0A": str(layout.x0A),
        "y0A": str(layout.y0A),
        "y1": str(layout.y1),
        "x_sigma": str(layout.x_sigma),
        "y_id": str(layout.y_id),
        "x_h": str(layout.x_h),
        "rotation": {"u": str(layout.rotation_u), "cos": str(layout.rotation[0]), "sin": str(layout.rotation[1])},
        "origin_B": [str(layout.origin_B.x), str(layout.origin_B.y)],
        "point_count": layout.point_count,
        "forced": [_line_record(l) for l in layout.forced],
        "catalogs": {n: [_line_record(l) for l in ls] for n, ls in sorted(layout.catalogs.items())},
        "boxes": {n: [str(v) for v in b] for n, b in sorted(layout.boxes.items())},
    }
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"
