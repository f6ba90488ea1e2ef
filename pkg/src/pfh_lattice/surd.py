"""Exact arithmetic in the rational span of square roots.

Inverse slopes of cubic profile pieces are roots of quadratics, so actions of
lattice paths live in Q(sqrt(r1), sqrt(r2), ...).  A :class:`Surd` stores a
finite sum ``sum c_r * sqrt(r)`` with rational ``c_r`` and distinct squarefree
radicands ``r`` (``r = 1`` is the rational part).  Square roots of distinct
squarefree integers are linearly independent over Q, so a surd is zero exactly
when all of its coefficients vanish; nonzero signs are settled by interval
arithmetic at increasing precision.

Operations that produce a purely rational result return a
:class:`fractions.Fraction`, so ordinary rational code paths stay fast.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath

__all__ = ["Surd", "as_exact", "exact_sign", "sqrt_rational", "to_float", "format_exact"]


@lru_cache(maxsize=4096)
def squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, m)`` with ``n = k**2 * m`` and ``m`` squarefree."""
    if n <= 0:
        raise ValueError("radicand must be positive")
    k, m = 1, 1
    f = 2
    while f * f <= n:
        e = 0
        while n % f == 0:
            n //= f
            e += 1
        k *= f ** (e // 2)
        if e % 2:
            m *= f
        f += 1 if f == 2 else 2
    return k, m * n


def _clean(terms: dict[int, Fraction]):
    terms = {r: c for r, c in terms.items() if c != 0}
    if not terms:
        return Fraction(0)
    if len(terms) == 1 and 1 in terms:
        return terms[1]
    return Surd._from_terms(terms)


def _terms_of(x) -> dict[int, Fraction]:
    if isinstance(x, Surd):
        return x._terms
    if isinstance(x, (int, Fraction)):
        return {1: Fraction(x)} if x != 0 else {}
    return None


class Surd:
    """Exact real number ``sum c_r sqrt(r)``; immutable and hashable."""

    __slots__ = ("_terms", "_float")

    def __init__(self, terms):
        raw: dict[int, Fraction] = {}
        for r, c in dict(terms).items():
            k, m = squarefree_split(int(r))
            raw[m] = raw.get(m, Fraction(0)) + Fraction(c) * k
        self._terms = {r: c for r, c in raw.items() if c != 0}
        self._float = None

    @classmethod
    def _from_terms(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj._float = None
        return obj

    @property
    def terms(self) -> dict[int, Fraction]:
        return dict(self._terms)

    @property
    def radicands(self) -> tuple[int, ...]:
        return tuple(sorted(self._terms))

    def rational_part(self) -> Fraction:
        return self._terms.get(1, Fraction(0))

    def __float__(self) -> float:
        if self._float is None:
            self._float = float(sum(float(c) * math.sqrt(r) for r, c in self._terms.items()))
        return self._float

    def __repr__(self) -> str:
        return f"Surd({format_exact(self)})"

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # arithmetic

    def __add__(self, other):
        t = _terms_of(other)
        if t is None:
            return NotImplemented
        out = dict(self._terms)
        for r, c in t.items():
            out[r] = out.get(r, Fraction(0)) + c
        return _clean(out)

    __radd__ = __add__

    def __neg__(self):
        return Surd._from_terms({r: -c for r, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        t = _terms_of(other)
        if t is None:
            return NotImplemented
        out = dict(self._terms)
        for r, c in t.items():
            out[r] = out.get(r, Fraction(0)) - c
        return _clean(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        t = _terms_of(other)
        if t is None:
            return NotImplemented
        out: dict[int, Fraction] = {}
        for r1, c1 in self._terms.items():
            for r2, c2 in t.items():
                if r1 == r2:
                    key, coef = 1, c1 * c2 * r1
                else:
                    g = math.gcd(r1, r2)
                    # r1, r2 squarefree: sqrt(r1 r2) = g sqrt(r1 r2 / g^2)
                    key, coef = (r1 // g) * (r2 // g), c1 * c2 * g
                out[key] = out.get(key, Fraction(0)) + coef
        return _clean(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return _clean({r: c / other for r, c in self._terms.items()})
        if isinstance(other, Surd):
            return self * _inverse(other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return _inverse(self) * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = Fraction(1)
        for _ in range(n):
            out = out * self
        return out

    # comparisons

    def _cmp(self, other):
        diff = self - other if _terms_of(other) is not None else None
        if diff is None:
            return None
        return exact_sign(diff)

    def __eq__(self, other):
        t = _terms_of(other)
        if t is None:
            return NotImplemented
        return self._terms == {r: c for r, c in t.items() if c != 0}

    def __lt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s < 0

    def __le__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s <= 0

    def __gt__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s > 0

    def __ge__(self, other):
        s = self._cmp(other)
        return NotImplemented if s is None else s >= 0

    def __abs__(self):
        return -self if exact_sign(self) < 0 else self


def _inverse(x: Surd):
    # Only single-radical surds a + b sqrt(r) are inverted; that is all the
    # profile code ever needs.
    rads = [r for r in x._terms if r != 1]
    if len(rads) != 1:
        raise ArithmeticError("inverse only implemented for a + b*sqrt(r)")
    r = rads[0]
    a = x._terms.get(1, Fraction(0))
    b = x._terms[r]
    norm = a * a - b * b * r
    return _clean({1: a / norm, r: -b / norm})


def sqrt_rational(x) -> Fraction | Surd:
    """Exact square root of a nonnegative rational."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    if x == 0:
        return Fraction(0)
    num, den = x.numerator, x.denominator
    # sqrt(num/den) = sqrt(num*den)/den
    k, m = squarefree_split(num * den)
    if m == 1:
        return Fraction(k, den)
    return Surd._from_terms({m: Fraction(k, den)})


def _interval_sign(terms: dict[int, Fraction]) -> int:
    prec = 80
    while True:
        with mpmath.workprec(prec):
            acc = mpmath.iv.mpf(0)
            for r, c in terms.items():
                cv = mpmath.iv.mpf(c.numerator) / c.denominator
                acc += cv if r == 1 else cv * mpmath.iv.sqrt(mpmath.iv.mpf(r))
            if acc.a > 0:
                return 1
            if acc.b < 0:
                return -1
        prec *= 2
        if prec > 1 << 16:  # pragma: no cover - independence guarantees termination
            raise ArithmeticError("sign undetermined")


def exact_sign(x) -> int:
    """Sign of an exact number (int, Fraction or Surd), decided rigorously."""
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    terms = x._terms
    if not terms:
        return 0
    est = 0.0
    mag = 0.0
    for r, c in terms.items():
        v = float(c) * math.sqrt(r)
        est += v
        mag += abs(v)
    if abs(est) > 1e-9 * mag:
        return 1 if est > 0 else -1
    return _interval_sign(terms)


def as_exact(x) -> Fraction | Surd:
    """Coerce ints, strings and Fractions to Fraction; pass Surds through."""
    if isinstance(x, Surd):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError("non-finite value")
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact number")


def to_float(x) -> float:
    return float(x)


def format_exact(x) -> str:
    """Canonical string: ``p/q`` for rationals, ``a + b*sqrt(r)`` sums for surds."""
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    parts = []
    for r in sorted(x._terms):
        c = x._terms[r]
        parts.append(str(c) if r == 1 else f"{c}*sqrt({r})")
    return " + ".join(parts)
