"""Monotone twist profiles on [-1, 1].

A twist is the autonomous Hamiltonian ``H(z, theta) = h(z)/2`` on the sphere
with height coordinate ``z`` and area form ``dtheta ^ dz / (4 pi)`` (total
area 1).  The profile ``h`` is stored exactly as a piecewise polynomial with
rational coefficients in powers of ``z``:

    h(-1) = h'(-1) = 0,   h is convex (so h' >= 0).

Pieces may meet with a derivative jump as long as the jump is upward, which
keeps corner profiles such as the hinge functions of the quasi-flat family
representable.  Smoothness (C^1) and niceness (h'' > 0, integer h'(1)) are
queries, not invariants.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import IncompatibleSlopeError, LemmaInapplicable, ProfileError
from .surd import Surd, as_exact, exact_sign, sqrt_rational

__all__ = [
    "Piece", "TwistProfile", "FamilyConfig", "InfiniteTwistSpec",
    "eval_h", "eval_dh", "inverse_slope", "scale", "calabi", "integral",
    "mean", "max_value", "support_start", "support_area", "hofer_upper_bound",
    "quadratic_profile", "cubic_profile", "zero_profile", "hinge_profile",
    "localized_quadratic", "convex_interpolant", "random_nice_profile", "add_profiles",
    "difference_extrema", "build_family", "default_infinite_twist",
    "profile_from_json", "profile_to_json", "load_profile",
]

ONE = Fraction(1)
MINUS_ONE = Fraction(-1)


# -- polynomial helpers (coefficients low degree first) ---------------------

def _trim(c):
    c = list(c)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_eval(c, z):
    acc = Fraction(0)
    for a in reversed(c):
        acc = acc * z + a
    return acc


def poly_deriv(c):
    if len(c) <= 1:
        return (Fraction(0),)
    return _trim(i * c[i] for i in range(1, len(c)))


def poly_add(a, b):
    n = max(len(a), len(b))
    return _trim((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n))


def poly_scale(c, t):
    return _trim(x * t for x in c)


def poly_antideriv(c):
    return (Fraction(0),) + tuple(x / (i + 1) for i, x in enumerate(c))


def poly_shift(c, z0):
    """Coefficients of ``p(z - z0)`` expanded in powers of ``z``."""
    out = [Fraction(0)] * len(c)
    for i, a in enumerate(c):
        # (z - z0)^i
        for j in range(i + 1):
            out[j] += a * math.comb(i, j) * (-z0) ** (i - j)
    return _trim(out)


def _real_roots_le2(c, lo, hi):
    """Roots in ``[lo, hi]`` of a polynomial of degree <= 2 (exact)."""
    c = _trim(c)
    if len(c) == 1:
        return []
    if len(c) == 2:
        r = -c[0] / c[1]
        return [r] if lo <= r <= hi else []
    a0, a1, a2 = c
    disc = a1 * a1 - 4 * a2 * a0
    if disc < 0:
        return []
    sq = sqrt_rational(disc)
    out = []
    for sgn in (1, -1):
        r = (-a1 + sgn * sq) / (2 * a2)
        if exact_sign(r - lo) >= 0 and exact_sign(hi - r) >= 0:
            if all(r != o for o in out):
                out.append(r)
    return out


# -- profile type ----------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    a: Fraction
    b: Fraction
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        object.__setattr__(self, "coeffs", _trim(Fraction(x) for x in self.coeffs))

    @property
    def deriv(self):
        return poly_deriv(self.coeffs)

    @property
    def deriv2(self):
        return poly_deriv(poly_deriv(self.coeffs))


@dataclass(frozen=True)
class TwistProfile:
    """Exact convex profile ``h`` on ``[-1, 1]``.

    Parameters
    ----------
    pieces
        Contiguous pieces covering ``[-1, 1]`` in increasing order.  Each
        polynomial has degree at most 3 and rational coefficients.
    name
        Free-form label used in reports.
    """

    pieces: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        pcs = tuple(p if isinstance(p, Piece) else Piece(*p) for p in self.pieces)
        object.__setattr__(self, "pieces", _merge_pieces(pcs))
        _validate(self.pieces)

    @property
    def max_slope(self) -> Fraction:
        return poly_eval(self.pieces[-1].deriv, ONE)

    @property
    def breakpoints(self) -> tuple:
        return tuple(p.a for p in self.pieces) + (ONE,)

    def is_c1(self) -> bool:
        return all(poly_eval(l.deriv, l.b) == poly_eval(r.deriv, r.a)
                   for l, r in zip(self.pieces, self.pieces[1:]))

    def is_nice(self) -> bool:
        """h'' > 0 on (-1, 1], C^1, and an integer slope at the top."""
        if self.max_slope.denominator != 1 or not self.is_c1():
            return False
        for p in self.pieces:
            lo, hi = poly_eval(p.deriv2, p.a), poly_eval(p.deriv2, p.b)
            if hi <= 0 or lo < 0 or (lo == 0 and p.a != MINUS_ONE):
                return False
        return True

    def piece_at(self, z) -> Piece:
        for p in self.pieces:
            if z <= p.b:
                return p
        return self.pieces[-1]

    def __call__(self, z):
        return eval_h(self, z)


def _merge_pieces(pcs):
    # glue adjacent pieces carrying the same polynomial
    out = []
    for p in pcs:
        if out and out[-1].coeffs == p.coeffs and out[-1].b == p.a:
            out[-1] = Piece(out[-1].a, p.b, p.coeffs)
        else:
            out.append(p)
    return tuple(out)


def _validate(pcs):
    if not pcs:
        raise ProfileError("profile has no pieces")
    if pcs[0].a != -1 or pcs[-1].b != 1:
        raise ProfileError("pieces must cover [-1, 1]")
    for p in pcs:
        if not p.a < p.b:
            raise ProfileError(f"empty piece [{p.a}, {p.b}]")
        if len(p.coeffs) > 4:
            raise ProfileError("piece degree exceeds 3")
        # h'' is affine on a piece of degree <= 3, so endpoint checks suffice
        if poly_eval(p.deriv2, p.a) < 0 or poly_eval(p.deriv2, p.b) < 0:
            raise ProfileError("profile is not convex (h'' < 0)")
    for l, r in zip(pcs, pcs[1:]):
        if l.b != r.a:
            raise ProfileError("pieces are not contiguous")
        if poly_eval(l.coeffs, l.b) != poly_eval(r.coeffs, r.a):
            raise ProfileError(f"profile is discontinuous at z={l.b}")
        if poly_eval(l.deriv, l.b) > poly_eval(r.deriv, r.a):
            raise ProfileError(f"derivative jumps down at z={l.b}")
    first = pcs[0]
    if poly_eval(first.coeffs, MINUS_ONE) != 0:
        raise ProfileError("h(-1) must vanish")
    if poly_eval(first.deriv, MINUS_ONE) != 0:
        raise ProfileError("h'(-1) must vanish")


def _check_z(z):
    if exact_sign(z - MINUS_ONE) < 0 or exact_sign(ONE - z) < 0:
        raise ValueError(f"z={z} outside [-1, 1]")


def eval_h(tp: TwistProfile, z):
    z = as_exact(z)
    _check_z(z)
    for p in tp.pieces:
        if exact_sign(p.b - z) >= 0:
            return poly_eval(p.coeffs, z)
    raise AssertionError("unreachable")


def eval_dh(tp: TwistProfile, z, side: str = "right"):
    """One-sided derivative; ``side='left'`` at a breakpoint uses the left piece."""
    z = as_exact(z)
    _check_z(z)
    for i, p in enumerate(tp.pieces):
        s = exact_sign(p.b - z)
        if s > 0 or (s == 0 and (side == "left" or i == len(tp.pieces) - 1)):
            return poly_eval(p.deriv, z)
    raise AssertionError("unreachable")


def inverse_slope(tp: TwistProfile, s):
    """Return ``z`` with ``s`` in the subdifferential of ``h`` at ``z``.

    On a plateau where ``h' = s`` on an interval, the midpoint is returned;
    the segment action ``p(1-z) + q h(z)`` is constant there.  At a corner
    every slope between the one-sided derivatives maps to the corner.
    """
    s = as_exact(s)
    if exact_sign(s) < 0 or exact_sign(tp.max_slope - s) < 0:
        raise IncompatibleSlopeError()
    cands = []
    prev_right = None
    for p in tp.pieces:
        d = p.deriv
        ga, gb = poly_eval(d, p.a), poly_eval(d, p.b)
        if prev_right is not None and prev_right <= s <= ga:
            cands.append(p.a)
        if ga <= s <= gb:
            if ga == gb:
                cands.extend([p.a, p.b])
            else:
                cands.extend(_real_roots_le2(poly_add(d, (-s,)), p.a, p.b))
        prev_right = gb
    if not cands:  # pragma: no cover - range check above makes this impossible
        raise IncompatibleSlopeError()
    # the candidate set is an interval; take its midpoint
    lo = _exact_min(cands)
    hi = _exact_max(cands)
    return lo if lo == hi else (lo + hi) / 2


def _exact_min(xs):
    best = xs[0]
    for x in xs[1:]:
        if exact_sign(x - best) < 0:
            best = x
    return best


def _exact_max(xs):
    best = xs[0]
    for x in xs[1:]:
        if exact_sign(x - best) > 0:
            best = x
    return best


def segment_action(tp: TwistProfile, q: int, p: int):
    """Action of one primitive segment ``(q, p)``: (p(1-z) + q h(z)) / 2."""
    z = inverse_slope(tp, Fraction(p, q))
    return (p * (1 - z) + q * eval_h(tp, z)) / 2


# -- arithmetic on profiles ------------------------------------------------

def scale(tp: TwistProfile, n) -> TwistProfile:
    """Profile ``n * h`` for a rational ``n >= 0``."""
    n = Fraction(n)
    if n < 0:
        raise ProfileError("scale factor must be nonnegative")
    if n == 0:
        return zero_profile()
    name = tp.name if n == 1 else f"{n}*{tp.name}" if tp.name else ""
    return TwistProfile(tuple(Piece(p.a, p.b, poly_scale(p.coeffs, n)) for p in tp.pieces), name)


def _common_breaks(a: TwistProfile, b: TwistProfile):
    return sorted(set(a.breakpoints) | set(b.breakpoints))


def add_profiles(a: TwistProfile, b: TwistProfile, name: str = "") -> TwistProfile:
    br = _common_breaks(a, b)
    pcs = []
    for lo, hi in zip(br, br[1:]):
        mid = (lo + hi) / 2
        pcs.append(Piece(lo, hi, poly_add(a.piece_at(mid).coeffs, b.piece_at(mid).coeffs)))
    return TwistProfile(tuple(pcs), name)


def difference_extrema(a: TwistProfile, b: TwistProfile):
    """Exact ``(min, max)`` of ``a - b`` over ``[-1, 1]``."""
    br = _common_breaks(a, b)
    vals = []
    for lo, hi in zip(br, br[1:]):
        mid = (lo + hi) / 2
        c = poly_add(a.piece_at(mid).coeffs, poly_scale(b.piece_at(mid).coeffs, -1))
        pts = [lo, hi] + _real_roots_le2(poly_deriv(c), lo, hi)
        vals.extend(poly_eval(c, z) for z in pts)
    return _exact_min(vals), _exact_max(vals)


def integral(tp: TwistProfile) -> Fraction:
    """Exact ``int_{-1}^{1} h(z) dz``."""
    tot = Fraction(0)
    for p in tp.pieces:
        F = poly_antideriv(p.coeffs)
        tot += poly_eval(F, p.b) - poly_eval(F, p.a)
    return tot


def mean(tp: TwistProfile) -> Fraction:
    """``int_{S^2} H omega = (1/4) int h``."""
    return integral(tp) / 4


def calabi(tp: TwistProfile) -> Fraction:
    """Calabi invariant of the time-one map; equals the mean for an autonomous H."""
    return mean(tp)


def max_value(tp: TwistProfile) -> Fraction:
    """max of ``H = h/2``; attained at ``z = 1`` because h is nondecreasing."""
    return eval_h(tp, ONE) / 2


def support_start(tp: TwistProfile) -> Fraction:
    """Largest ``z*`` with ``h = 0`` on ``[-1, z*]``."""
    for p in tp.pieces:
        if any(c != 0 for c in p.coeffs):
            return p.a
    return ONE


def support_area(tp: TwistProfile) -> Fraction:
    return (1 - support_start(tp)) / 2


def hofer_upper_bound(tp: TwistProfile, N: int) -> Fraction:
    """Bound ``max(H)/N + 2`` on the Hofer norm of the time-one map.

    Valid only when the support of H has area strictly below ``1/N``.
    """
    if N < 1:
        raise ValueError("N must be a positive integer")
    if not support_area(tp) < Fraction(1, N):
        raise LemmaInapplicable()
    return max_value(tp) / N + 2


# -- concrete profiles -----------------------------------------------------

def zero_profile() -> TwistProfile:
    return TwistProfile((Piece(-1, 1, (0,)),), "zero")


def quadratic_profile(m=2) -> TwistProfile:
    """``h = (m/4)(z+1)^2`` with ``h'(1) = m``."""
    m = Fraction(m)
    c = m / 4
    return TwistProfile((Piece(-1, 1, (c, 2 * c, c)),), f"quadratic(m={m})")


def cubic_profile(m=3) -> TwistProfile:
    """``h = (m/12)(z+1)^3`` with ``h'(1) = m``."""
    m = Fraction(m)
    c = m / 12
    return TwistProfile((Piece(-1, 1, (c, 3 * c, 3 * c, c)),), f"cubic(m={m})")


def hinge_profile(z_star, slope) -> TwistProfile:
    """``0`` on ``[-1, z*]`` then ``slope * (z - z*)``."""
    z_star, slope = Fraction(z_star), Fraction(slope)
    if z_star <= -1 or z_star >= 1:
        raise ProfileError("hinge point must lie in (-1, 1)")
    return TwistProfile((Piece(-1, z_star, (0,)), Piece(z_star, 1, (-slope * z_star, slope))),
                        f"hinge({z_star},{slope})")


def localized_quadratic(z_star, c) -> TwistProfile:
    """``0`` on ``[-1, z*]`` then ``c (z - z*)^2``; C^1 with support area ``(1-z*)/2``."""
    z_star, c = Fraction(z_star), Fraction(c)
    q = poly_shift((Fraction(0), Fraction(0), c), z_star)
    if z_star == -1:
        return TwistProfile((Piece(-1, 1, q),), f"quadratic_from({z_star})")
    return TwistProfile((Piece(-1, z_star, (0,)), Piece(z_star, 1, q)), f"quadratic_from({z_star})")


def _quad_piece(a, b, va, sa, sb):
    """Quadratic on [a, b] with value va and slope sa at a, slope sb at b."""
    k = (sb - sa) / (b - a)  # h''
    # h(z) = va + sa (z-a) + k/2 (z-a)^2
    return Piece(a, b, poly_shift((va, sa, k / 2), a))


def convex_interpolant(nodes: Sequence, name: str = "") -> TwistProfile:
    """C^1 convex piecewise-quadratic interpolant of ``(z, value, slope)`` nodes.

    Between consecutive nodes the derivative is piecewise linear, rising from
    the left slope to the secant slope at an interior knot and on to the right
    slope; the knot position is chosen so the integral of the derivative
    matches the value increment.  Requires ``s_a <= secant <= s_b``.
    """
    nodes = [tuple(Fraction(x) for x in n) for n in nodes]
    if nodes[0][0] != -1 or nodes[-1][0] != 1:
        raise ProfileError("interpolation nodes must start at -1 and end at 1")
    pcs = []
    for (a, va, sa), (b, vb, sb) in zip(nodes, nodes[1:]):
        if not a < b:
            raise ProfileError("nodes must be strictly increasing")
        sig = (vb - va) / (b - a)
        if not sa <= sig <= sb:
            raise ProfileError(f"nodes at {a}, {b} are not convex-compatible")
        if sa == sb:
            pcs.append(Piece(a, b, poly_shift((va, sa), a)))
            continue
        xi = a + (sb - sig) * (b - a) / (sb - sa)
        if xi > a:
            pcs.append(_quad_piece(a, xi, va, sa, sig))
        if xi < b:
            vxi = va + (xi - a) * (sa + sig) / 2
            pcs.append(_quad_piece(xi, b, vxi, sig, sb))
    return TwistProfile(tuple(pcs), name)


def random_nice_profile(rng, max_slope: int = 4, n_pieces: int = 3, den: int = 8) -> TwistProfile:
    """Random C^1 piecewise-quadratic profile with ``h'' > 0`` and integer ``h'(1)``.

    ``rng`` is a :class:`numpy.random.Generator`; breakpoints are multiples of
    ``1/den`` and the top slope is drawn from ``1..max_slope``.
    """
    cuts = sorted(set(int(c) for c in rng.integers(1, 2 * den, n_pieces - 1)))
    br = [Fraction(-1)] + [Fraction(-1) + Fraction(c, den) for c in cuts] + [ONE]
    curv = [Fraction(int(c)) for c in rng.integers(1, 9, len(br) - 1)]
    top = sum(k * (b - a) for k, a, b in zip(curv, br, br[1:]))
    m = int(rng.integers(1, max_slope + 1))
    curv = [k * m / top for k in curv]
    pcs = []
    v = s = Fraction(0)
    for k, a, b in zip(curv, br, br[1:]):
        pcs.append(_quad_piece(a, b, v, s, s + k * (b - a)))
        v += (b - a) * s + k * (b - a) ** 2 / 2
        s += k * (b - a)
    return TwistProfile(tuple(pcs), f"random(m={m})")


# -- quasi-flat family ------------------------------------------------------

@dataclass(frozen=True)
class FamilyConfig:
    """Hinge profiles ``f_i`` and their smoothings ``h_i``.

    ``f_i`` vanishes up to ``1 - 2/d_i`` and then rises with slope ``d_i^2``,
    so ``int f_i = 2`` and ``f_i(1) = 2 d_i``; degrees are ``d_i = 2^(iota+i+1)``.
    ``h_i`` starts a little later, ramps its slope up quadratically and ends
    with a slightly larger constant slope chosen so that ``int h_i = 2`` exactly.
    """

    iota: int
    n: int
    degrees: tuple
    exact: tuple
    smooth: tuple
    smoothing_window: Fraction

    @property
    def profiles(self):
        return self.exact + self.smooth

    def d(self, i: int) -> int:
        return self.degrees[i - 1]

    def f(self, i: int) -> TwistProfile:
        return self.exact[i - 1]

    def h(self, i: int) -> TwistProfile:
        return self.smooth[i - 1]

    def to_json(self) -> dict:
        return {"iota": self.iota, "n": self.n,
                "smoothing_window": str(self.smoothing_window),
                "profiles": [profile_to_json(p) for p in self.exact],
                "smoothed": [profile_to_json(p) for p in self.smooth]}


def _smoothed_hinge(d: int, window: Fraction) -> TwistProfile:
    z_star = 1 - Fraction(2, d)
    w = min(window, Fraction(1, 8 * d ** 3))
    a = z_star + w
    rho = w
    L = 1 - a
    slope = 4 / (L * L - L * rho + rho * rho / 3)
    k = slope / rho
    ramp = Piece(a, a + rho, poly_shift((0, 0, k / 2), a))
    v1 = k * rho * rho / 2
    lin = Piece(a + rho, 1, poly_shift((v1, slope), a + rho))
    return TwistProfile((Piece(-1, a, (0,)), ramp, lin), f"h_smooth(d={d})")


def build_family(iota: int, n: int, smoothing_window=Fraction(1, 64)) -> FamilyConfig:
    if iota < 1 or n < 1:
        raise ValueError("iota and n must be positive")
    window = Fraction(smoothing_window)
    if window <= 0:
        raise ValueError("smoothing window must be positive")
    degrees = tuple(2 ** (iota + i + 1) for i in range(1, n + 1))
    exact = tuple(hinge_profile(1 - Fraction(2, d), d * d) for d in degrees)
    exact = tuple(TwistProfile(f.pieces, f"f_{i}") for i, f in enumerate(exact, 1))
    smooth = tuple(TwistProfile(_smoothed_hinge(d, window).pieces, f"h_{i}")
                   for i, d in enumerate(degrees, 1))
    return FamilyConfig(iota, n, degrees, exact, smooth, window)


# -- infinite twist ---------------------------------------------------------

def _node_z(d: int) -> Fraction:
    return 1 - Fraction(2, d + 1)


@dataclass(frozen=True)
class InfiniteTwistSpec:
    """Unbounded convex envelope ``f`` described by its values at ``z_d = 1 - 2/(d+1)``.

    ``values[d]`` and ``slopes[d]`` give ``f(z_d)`` and ``f'(z_d)`` for
    ``2 <= d <= dmax``.  Truncations follow ``f`` up to ``z_D`` and then bend
    up with constant ``h''`` so the slope at ``z = 1`` is ``f'(z_D) + 1``.
    """

    values: dict
    slopes: dict
    name: str = "infinite_twist"

    @property
    def dmax(self) -> int:
        return max(self.values)

    def z(self, d: int) -> Fraction:
        return _node_z(d)

    def is_adapted(self, d: int) -> bool:
        return self.slopes[d] % (d + 1) == 0 and self.slopes[d] > 0

    def first_violation(self, ds: Iterable[int]):
        for d in ds:
            if d not in self.slopes or not self.is_adapted(d):
                return d
        return None

    def truncate_at(self, D: int) -> TwistProfile:
        if D < 2 or D > self.dmax:
            raise ValueError(f"truncation degree {D} outside [2, {self.dmax}]")
        nodes = [(MINUS_ONE, 0, 0)] + [(self.z(d), self.values[d], self.slopes[d]) for d in range(2, D + 1)]
        zD, vD, sD = nodes[-1]
        k = Fraction(D + 1, 2)
        if zD == nodes[-2][0]:
            nodes.pop()
        body = convex_interpolant(nodes + [(ONE, vD + sD * (1 - zD), sD)])
        pcs = [p for p in body.pieces if p.b <= zD]
        pcs.append(_quad_piece(zD, ONE, vD, sD, sD + k * (1 - zD)))
        return TwistProfile(tuple(pcs), f"{self.name}[D={D}]")

    def truncation(self, i: int) -> TwistProfile:
        """Profile agreeing with ``f`` on ``[-1, 1 - 1/i]``."""
        return self.truncate_at(2 * i - 1)


def default_infinite_twist(dmax: int = 1024) -> InfiniteTwistSpec:
    """Envelope with ``f = 0`` up to ``z_2 = 1/3`` and ``f(z_d) = d^2`` beyond.

    Each slope ``f'(z_d)`` is the smallest multiple of ``d+1`` exceeding the
    secant slope from the previous node, which keeps the nodes convex.
    """
    values = {2: Fraction(0)}
    slopes = {2: Fraction(0)}
    for d in range(3, dmax + 1):
        values[d] = Fraction(d * d)
        sec = (values[d] - values[d - 1]) / (_node_z(d) - _node_z(d - 1))
        slopes[d] = Fraction((d + 1) * (math.floor(sec / (d + 1)) + 1))
    return InfiniteTwistSpec(values, slopes)


# -- serialization ----------------------------------------------------------

def profile_to_json(tp: TwistProfile) -> dict:
    return {"pieces": [{"from": str(p.a), "to": str(p.b), "coeffs": [str(c) for c in p.coeffs]}
                       for p in tp.pieces]}


def profile_from_json(obj, name: str = "") -> TwistProfile:
    try:
        raw = obj["pieces"]
        pcs = tuple(Piece(Fraction(str(p["from"])), Fraction(str(p["to"])),
                          tuple(Fraction(str(c)) for c in p["coeffs"])) for p in raw)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ProfileError(f"malformed profile description: {exc}") from exc
    return TwistProfile(pcs, obj.get("name", name) if isinstance(obj, dict) else name)


def load_profile(path) -> TwistProfile:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if not text.strip():
        raise ProfileError(f"{path}: empty profile file")
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileError(f"{path}: invalid JSON ({exc})") from exc
    return profile_from_json(obj, name=str(path))
