"""Concave lattice paths: construction, two index computations, and action.

A path of degree ``d`` starts at ``(0, y0)`` and follows primitive integer
vectors ``(q, p)`` (``q >= 1``, ``p >= 0``, ``gcd(p, q) = 1``) in runs of
nondecreasing slope, ending at ``x = d``.  Runs of equal slope are merged, so
slopes strictly increase from run to run.

The index is ``I = 2 j - d`` where ``j = j_plus - j_minus`` counts lattice
points between the path and the x-axis.  :func:`index_by_area` computes the
same number from twice the signed area, the lowest and highest heights and
the number of primitive segments.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .errors import IncompatibleSlopeError, OracleLimitError, PathError
from .twist import TwistProfile, segment_action

__all__ = [
    "PrimitiveSegment", "LatticePath", "IndexBreakdown", "make_path", "parse_path",
    "format_path", "index_by_count", "index_by_area", "action", "farey_items",
    "enumerate_shapes", "enumerate_paths", "DEFAULT_ORACLE_DEGREE",
]

DEFAULT_ORACLE_DEGREE = 6


class PrimitiveSegment(NamedTuple):
    q: int
    p: int

    @property
    def slope(self) -> Fraction:
        return Fraction(self.p, self.q)


class IndexBreakdown(NamedTuple):
    j_plus: int
    j_minus: int
    j: int
    I: int
    A_twice: int
    y: int
    w: int
    e: int


@dataclass(frozen=True)
class LatticePath:
    y0: int
    runs: tuple  # ((PrimitiveSegment, m), ...)

    @property
    def degree(self) -> int:
        return sum(s.q * m for s, m in self.runs)

    d = degree

    @property
    def e(self) -> int:
        return sum(m for _, m in self.runs)

    @property
    def w(self) -> int:
        return self.y0 + sum(s.p * m for s, m in self.runs)

    @property
    def slopes(self) -> tuple:
        return tuple(s.slope for s, _ in self.runs)

    def segments(self) -> Iterator[PrimitiveSegment]:
        for s, m in self.runs:
            for _ in range(m):
                yield s

    def vertices(self) -> list:
        """Corner points, from ``(0, y0)`` to ``(d, w)``."""
        x, y = 0, self.y0
        out = [(x, y)]
        for s, m in self.runs:
            x += s.q * m
            y += s.p * m
            out.append((x, y))
        return out

    def height(self, x) -> Fraction:
        """Height of the path over abscissa ``x`` (exact)."""
        x0, y0 = 0, Fraction(self.y0)
        for s, m in self.runs:
            x1 = x0 + s.q * m
            if x <= x1:
                return y0 + s.slope * (x - x0)
            x0, y0 = x1, y0 + s.p * m
        if x == x0:
            return y0
        raise ValueError(f"x={x} beyond path end {x0}")

    def shifted(self, dy: int) -> "LatticePath":
        return LatticePath(self.y0 + dy, self.runs)

    def __str__(self) -> str:
        return format_path(self)


def make_path(y0: int, runs: Iterable) -> LatticePath:
    """Validate and build a path; runs are ``((q, p), m)`` or ``(q, p, m)``."""
    if isinstance(y0, bool) or int(y0) != y0:
        raise PathError("start height must be an integer")
    norm = []
    for r in runs:
        if len(r) == 2:
            (q, p), m = r
        elif len(r) == 3:
            q, p, m = r
        else:
            raise PathError(f"bad run {r!r}")
        q, p, m = int(q), int(p), int(m)
        if q < 1:
            raise PathError(f"segment ({q},{p}) must have q >= 1")
        if p < 0:
            raise PathError(f"segment ({q},{p}) has negative slope")
        if math.gcd(p, q) != 1:
            raise PathError(f"segment ({q},{p}) is not primitive")
        if m < 1:
            raise PathError("multiplicities must be >= 1")
        norm.append((PrimitiveSegment(q, p), m))
    if not norm:
        raise PathError("path has no segments")
    for (a, _), (b, _) in zip(norm, norm[1:]):
        if not a.slope < b.slope:
            raise PathError(f"slopes must increase strictly between runs ({a.slope} then {b.slope})")
    return LatticePath(int(y0), tuple(norm))


def parse_path(text: str) -> LatticePath:
    """Parse ``"y0; q:p*m, q:p*m, ..."`` (``*m`` optional)."""
    try:
        head, _, body = text.partition(";")
        y0 = int(head.strip())
        runs = []
        for tok in body.split(","):
            tok = tok.strip()
            if not tok:
                continue
            seg, _, mult = tok.partition("*")
            q, p = seg.split(":")
            runs.append((int(q), int(p), int(mult) if mult else 1))
    except ValueError as exc:
        raise PathError(f"cannot parse path literal {text!r}") from exc
    return make_path(y0, runs)


def format_path(P: LatticePath) -> str:
    return f"{P.y0}; " + ", ".join(f"{s.q}:{s.p}*{m}" for s, m in P.runs)


def path_from_json(obj) -> LatticePath:
    if isinstance(obj, str):
        return parse_path(obj)
    try:
        return make_path(obj["y0"], [tuple(r) for r in obj["runs"]])
    except (KeyError, TypeError) as exc:
        raise PathError(f"malformed path object {obj!r}") from exc


def path_to_json(P: LatticePath) -> dict:
    return {"y0": P.y0, "runs": [[s.q, s.p, m] for s, m in P.runs]}


# -- index -----------------------------------------------------------------

def index_by_count(P: LatticePath) -> IndexBreakdown:
    """Count lattice points column by column.

    ``j_plus`` counts points with ``0 <= Y < P(x)`` (strictly under the path,
    x-axis included) and ``j_minus`` counts points with ``P(x) <= Y < 0``
    (points on the path included, x-axis excluded), for integers
    ``0 <= x <= d``.
    """
    d = P.degree
    jp = jm = 0
    for x in range(d + 1):
        h = P.height(x)
        Y = 0
        while Y < h:
            jp += 1
            Y += 1
        Y = -1
        while Y >= h:
            jm += 1
            Y -= 1
    j = jp - jm
    ar = _area_parts(P)
    return IndexBreakdown(jp, jm, j, 2 * j - d, *ar)


def _area_parts(P: LatticePath):
    A2 = 0
    Y = P.y0
    for s in P.segments():
        A2 += s.q * (2 * Y + s.p)
        Y += s.p
    return A2, P.y0, P.w, P.e


def index_by_area(P: LatticePath) -> IndexBreakdown:
    """``I = 2A + y + w - e`` with e the number of primitive segments.

    ``j`` fields are filled from the identity ``I = 2j - d``; ``j_plus`` and
    ``j_minus`` are left as -1 because this method does not separate them.
    """
    A2, y, w, e = _area_parts(P)
    I = A2 + y + w - e
    d = P.degree
    if (I + d) % 2:  # pragma: no cover - parity holds for any integral path
        raise AssertionError("index parity violated")
    return IndexBreakdown(-1, -1, (I + d) // 2, I, A2, y, w, e)


# -- action ----------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _seg_action(tp: TwistProfile, q: int, p: int):
    return segment_action(tp, q, p)


def action(P: LatticePath, tp: TwistProfile):
    """``y0 + sum over runs of m (p(1 - z) + q h(z)) / 2`` with ``h'(z) = p/q``."""
    top = tp.max_slope
    tot = Fraction(P.y0)
    for s, m in P.runs:
        if s.slope > top:
            raise IncompatibleSlopeError(f"incompatible slope {s.slope} > {top}")
        tot = tot + m * _seg_action(tp, s.q, s.p)
    return tot


# -- enumeration -----------------------------------------------------------

def farey_items(d: int, max_slope) -> list:
    """Primitive ``(q, p)`` with ``q <= d`` and ``0 <= p/q <= max_slope``, by slope."""
    top = Fraction(max_slope)
    out = []
    for q in range(1, d + 1):
        pmax = math.floor(top * q)
        for p in range(pmax + 1):
            if math.gcd(p, q) == 1:
                out.append(PrimitiveSegment(q, p))
    out.sort(key=lambda s: (s.slope, s.q))
    return out


def _check_limit(d, max_slope, limit, slope_budget):
    if d < 1:
        raise ValueError("degree must be >= 1")
    if d > limit:
        raise OracleLimitError(f"oracle limit exceeded: d={d} > {limit}")
    if slope_budget is not None and Fraction(max_slope) * d > slope_budget:
        raise OracleLimitError(f"oracle limit exceeded: max_slope*d={Fraction(max_slope) * d} > {slope_budget}")


def enumerate_shapes(d: int, max_slope, limit: int = DEFAULT_ORACLE_DEGREE,
                     slope_budget=None) -> Iterator[tuple]:
    """All run tuples of total horizontal length ``d`` (start height omitted)."""
    _check_limit(d, max_slope, limit, slope_budget)
    items = farey_items(d, max_slope)

    def rec(start, remaining, acc):
        if remaining == 0:
            yield tuple(acc)
            return
        for t in range(start, len(items)):
            s = items[t]
            if s.q > remaining:
                continue
            for m in range(1, remaining // s.q + 1):
                acc.append((s, m))
                yield from rec(t + 1, remaining - m * s.q, acc)
                acc.pop()

    yield from rec(0, d, [])


def enumerate_paths(d: int, max_slope, y_range, limit: int = DEFAULT_ORACLE_DEGREE,
                    slope_budget=None) -> Iterator[LatticePath]:
    """Every concave degree-``d`` path with Farey slopes and ``y0`` in ``y_range``."""
    ys = list(y_range)
    for runs in enumerate_shapes(d, max_slope, limit, slope_budget):
        for y0 in ys:
            yield LatticePath(y0, runs)
