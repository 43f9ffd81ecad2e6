"""Plain-text instance and solution files.

Instance files hold one point per record, ``R <x> <y>`` or ``B <x> <y>``.
Solution files hold one line per record, ``V <x>``, ``H <y>`` or
``G <a> <b> <c>`` for a*x + b*y = c, after a ``# cost N solver NAME`` header.
Coordinates are integers, decimals or ``p/q`` rationals; ``#`` starts a
comment and blank lines are skipped.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .geometry import Instance, Line, Point, sort_lines

_NUMBER = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?(/[+-]?\d+)?")


class ParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def parse_number(token: str, lineno: int = 0) -> Fraction:
    if not _NUMBER.fullmatch(token):
        raise ParseError(lineno, f"not a rational number: {token!r}")
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(lineno, f"not a rational number: {token!r}") from exc


def fmt(v: Fraction) -> str:
    return str(v)


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield lineno, body.split()


def parse_instance(text: str) -> Instance:
    red: List[Point] = []
    blue: List[Point] = []
    for lineno, tok in _records(text):
        if tok[0] not in ("R", "B"):
            raise ParseError(lineno, f"expected R or B, got {tok[0]!r}")
        if len(tok) != 3:
            raise ParseError(lineno, f"expected 3 fields, got {len(tok)}")
        p = Point(parse_number(tok[1], lineno), parse_number(tok[2], lineno))
        (red if tok[0] == "R" else blue).append(p)
    return Instance(red, blue)


def emit_instance(instance: Instance, comment: Optional[str] = None) -> str:
    """Canonical text: red points then blue points, each in stored order."""
    rows = []
    if comment:
        rows.extend(f"# {c}" for c in comment.splitlines())
    rows.extend(f"R {fmt(p.x)} {fmt(p.y)}" for p in instance.red)
    rows.extend(f"B {fmt(p.x)} {fmt(p.y)}" for p in instance.blue)
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class SolutionFile:
    lines: Tuple[Line, ...]
    cost: Optional[int] = None
    solver: Optional[str] = None


_HEADER = re.compile(r"#\s*cost\s+(\d+)\s+solver\s+(\S+)")


def parse_solution(text: str) -> SolutionFile:
    cost = solver = None
    lines: List[Line] = []
    for raw in text.splitlines():
        m = _HEADER.match(raw.strip())
        if m and cost is None:
            cost, solver = int(m.group(1)), m.group(2)
    for lineno, tok in _records(text):
        kind, args = tok[0], tok[1:]
        want = {"V": 1, "H": 1, "G": 3}.get(kind)
        if want is None:
            raise ParseError(lineno, f"expected V, H or G, got {kind!r}")
        if len(args) != want:
            raise ParseError(lineno, f"{kind} takes {want} value(s), got {len(args)}")
        vals = [parse_number(a, lineno) for a in args]
        if kind == "V":
            lines.append(Line.vertical(vals[0]))
        elif kind == "H":
            lines.append(Line.horizontal(vals[0]))
        else:
            try:
                lines.append(Line(*vals))
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from exc
    return SolutionFile(tuple(lines), cost, solver)


def emit_line(line: Line) -> str:
    if line.is_vertical:
        return f"V {fmt(line.c)}"
    if line.is_horizontal:
        return f"H {fmt(line.c)}"
    return f"G {fmt(line.a)} {fmt(line.b)} {fmt(line.c)}"


def emit_solution(lines: Sequence[Line], solver: str) -> str:
    """Header plus the lines in canonical order; cost counts distinct lines."""
    ordered = sort_lines(lines)
    rows = [f"# cost {len(ordered)} solver {solver}"]
    rows.extend(emit_line(l) for l in ordered)
    return "\n".join(rows) + "\n"
