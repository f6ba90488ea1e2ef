"""Homogenized and derived invariants of twist maps.

For a twist ``H = h/2`` the homogenized degree-``d`` invariant has the closed
form

    zeta_d = (1/2) sum_{i=1}^{d} h(-1 + 2i/(d+1)),

i.e. the sum of H over d equally spaced circles.  From it

    mu_d(t H) = zeta_d(t h) - t d mean(H),     mean(H) = (1/4) int h,
    eta_d     = c_{d,-d}(H) - (d/2) c_{2,-2}(H)   (d even).

Bounds are returned as :class:`Bound` pairs naming the inequality used.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Optional

from .errors import CertificateError, LemmaInapplicable
from .lattice import LatticePath, action, index_by_area, make_path
from .spectral import c_dk
from .surd import exact_sign
from .twist import TwistProfile, calabi, eval_dh, eval_h, mean, scale, support_area

__all__ = [
    "Bound", "InvariantBundle", "zeta_closed", "zeta_limit", "mu", "eta",
    "eta_lower_bound", "support_control", "invariant_bundle", "sample_points",
]


class Bound(NamedTuple):
    value: object
    certificate: str


def sample_points(d: int) -> list:
    """Heights ``-1 + 2i/(d+1)``, i = 1..d, of the equally spaced circles."""
    return [Fraction(-1) + Fraction(2 * i, d + 1) for i in range(1, d + 1)]


def zeta_closed(tp: TwistProfile, d: int) -> Fraction:
    if d < 1:
        raise ValueError("degree must be >= 1")
    return sum((eval_h(tp, z) for z in sample_points(d)), Fraction(0)) / 2


def zeta_limit(tp: TwistProfile, d: int, n_list: Iterable[int]) -> list:
    """Rows ``(n, c_{d,-d}(nH)/n, zeta_d)``; ratios never exceed the closed form."""
    z = zeta_closed(tp, d)
    rows = []
    for n in n_list:
        if n < 1:
            raise ValueError("n must be positive")
        c = c_dk(scale(tp, n), d, -d, witnesses=False).value
        r = c / n
        if exact_sign(r - z) > 0:
            raise CertificateError(f"c_d(nH)/n = {r} exceeds zeta_d = {z} at n={n}")
        rows.append((n, r, z))
    return rows


def mu(tp: TwistProfile, d: int, t=1) -> Fraction:
    t = Fraction(t)
    if t < 0:
        raise ValueError("t must be nonnegative")
    return zeta_closed(scale(tp, t), d) - t * d * mean(tp)


def eta(tp: TwistProfile, d: int):
    if d % 2:
        raise ValueError("eta is defined for even d only")
    cd = c_dk(tp, d, -d, witnesses=False).value
    c2 = c_dk(tp, 2, -2, witnesses=False).value
    if cd is None or c2 is None:
        raise ValueError("spectral value infeasible")
    return cd - Fraction(d, 2) * c2


def support_control(d: int, area, k: int) -> Bound:
    """``|c_{d,k}(H)| <= 2 d area`` for H supported in a disc of smaller area than ``1/(d+1)``."""
    area = Fraction(area)
    if not area < Fraction(1, d + 1):
        raise LemmaInapplicable(f"lemma inapplicable: area {area} is not below 1/{d + 1}")
    if abs(k) > d:
        raise LemmaInapplicable(f"lemma inapplicable: |k|={abs(k)} exceeds d={d}")
    return Bound(2 * d * area, "support control: |c_{d,k}| <= 2 d area")


@dataclass(frozen=True)
class EtaLowerBound:
    value: Fraction
    certificate: str
    witness: LatticePath
    witness_action: object
    z0: Fraction
    slope: Fraction
    a: int


def eta_lower_bound(tp: TwistProfile, d: int, require_small_support: bool = True) -> EtaLowerBound:
    """``eta_d >= H(z0) - d/6`` at ``z0 = 1 - 2/(d+1)`` for adapted slopes.

    Needs ``p = h'(z0)`` to be a multiple of ``d+1``.  The witness path goes
    from ``(0, -a)`` to ``(d-1, -a)`` and then to ``(d, p - a)`` with
    ``a = p/(d+1)``; its index is ``-d`` and its action is ``H(z0)``.  The
    ``d/6`` term bounds ``(d/2) c_2`` for supports of area at most ``1/12``;
    pass ``require_small_support=False`` to build the witness regardless.
    """
    if d < 4 or d % 2:
        raise ValueError("d must be even and >= 4")
    if require_small_support and support_area(tp) > Fraction(1, 12):
        raise LemmaInapplicable("lemma inapplicable: support area exceeds 1/12")
    z0 = 1 - Fraction(2, d + 1)
    p = eval_dh(tp, z0, side="left")
    if eval_dh(tp, z0, side="right") != p:
        raise LemmaInapplicable("lemma inapplicable: profile has a corner at z0")
    if p.denominator != 1 or p % (d + 1):
        raise LemmaInapplicable(f"lemma inapplicable: h'(z0) = {p} is not a multiple of {d + 1}")
    p = int(p)
    a = p // (d + 1)
    runs = [((1, 0), d - 1), ((1, p), 1)] if p > 0 else [((1, 0), d)]
    P = make_path(-a, runs)
    I = index_by_area(P).I
    A = action(P, tp)
    expect = Fraction(p, 2) * (1 - z0) + eval_h(tp, z0) / 2 - a
    if I != -d or A != expect:
        raise CertificateError(f"witness check failed: I={I}, action={A}, expected {expect}")
    return EtaLowerBound(eval_h(tp, z0) / 2 - Fraction(d, 6),
                         "eta_d >= H(z0) - d/6 via the index -d witness path",
                         P, A, z0, Fraction(p), a)


@dataclass(frozen=True)
class InvariantBundle:
    d: int
    zeta: Fraction
    mu: Fraction
    eta: Optional[object]
    calabi: Fraction
    mean: Fraction


def invariant_bundle(tp: TwistProfile, d: int, t=1, with_eta: bool = True) -> InvariantBundle:
    t = Fraction(t)
    stp = scale(tp, t)
    z = zeta_closed(stp, d)
    m = mean(stp)
    e = eta(stp, d) if (with_eta and d % 2 == 0) else None
    return InvariantBundle(d, z, z - d * m, e, calabi(stp), m)
