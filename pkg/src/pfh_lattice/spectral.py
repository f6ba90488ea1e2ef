"""Spectral values ``c_{d,k}`` of monotone twists via concave lattice paths.

``c_{d,k}`` is the largest action of a compatible concave degree-``d`` path
with index ``k``.  Writing a path as a start height ``y0`` plus a shape (the
path with ``y0 = 0``), the index and the action shift as

    I = I0(shape) + (2d + 2) y0,      action = action0(shape) + y0,

so with ``M = 2d + 2``

    c_{d,k} = k/M + max { action0 - I0/M : I0 = k (mod M) }.

The quantity ``g = action0 - I0/M`` is additive over the primitive segments
of a shape once the current height is known, which gives a dynamic program
over states ``(x, Y, I0 mod M)`` with segments processed in increasing slope
order.  One run of the program answers every ``k`` for a given ``(h, d)``.

Values are exact: each is an integer vector over a basis of square roots,
scaled by a common denominator.  Floating point shadows are used only to
skip exact comparisons that are clearly decided.
"""
from __future__ import annotations

import math
import threading
from collections import OrderedDict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .errors import CertificateError, OracleLimitError, ParityError, ProfileError
from .lattice import (
    DEFAULT_ORACLE_DEGREE, LatticePath, PrimitiveSegment, action, enumerate_shapes,
    farey_items, index_by_area, index_by_count,
)
from .surd import Surd, exact_sign
from .twist import TwistProfile, difference_extrema, segment_action, zero_profile

__all__ = [
    "SpectralResult", "c_dk", "spectral_table", "oracle_c_dk", "oracle_table",
    "axiom_report", "AxiomReport", "check_parity", "ORACLE_SLOPE_BUDGET",
]

ORACLE_SLOPE_BUDGET = 64
WITNESS_CAP = 16
_WITNESS_SEARCH_CAP = 256
_REL_TOL = 1e-9


def check_parity(d: int, k: int):
    if d < 1:
        raise ValueError("degree must be >= 1")
    if (k - d) % 2:
        raise ParityError(f"parity mismatch: k={k} and d={d} must have the same parity")


@dataclass
class SpectralResult:
    d: int
    k: int
    value: object  # Fraction, Surd, or None when infeasible
    witnesses: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.value is not None

    def __float__(self):
        if self.value is None:
            raise ValueError("infeasible grading")
        return float(self.value)


# -- exact vector encoding -------------------------------------------------

def _terms(x) -> dict:
    if isinstance(x, Surd):
        return x.terms
    x = Fraction(x)
    return {1: x} if x else {}


class _Encoding:
    """Maps exact numbers in a fixed radical basis to scaled integer vectors."""

    def __init__(self, numbers, extra_den: int):
        rads = {1}
        den = extra_den
        for x in numbers:
            for r, c in _terms(x).items():
                rads.add(r)
                den = den * c.denominator // math.gcd(den, c.denominator)
        self.basis = sorted(rads)
        self.pos = {r: i for i, r in enumerate(self.basis)}
        self.L = den
        self.sqrt = np.array([math.sqrt(r) for r in self.basis])

    @property
    def nb(self):
        return len(self.basis)

    def encode(self, x) -> list:
        v = [0] * self.nb
        for r, c in _terms(x).items():
            v[self.pos[r]] = int(c * self.L)
        return v

    def decode(self, vec):
        out = Fraction(0)
        for r, c in zip(self.basis, vec):
            c = int(c)
            if c:
                term = Fraction(c, self.L)
                out = out + (term if r == 1 else Surd({r: term}))
        return out


# -- dynamic program -------------------------------------------------------

class _Program:
    def __init__(self, tp: TwistProfile, d: int, track: bool):
        self.tp, self.d = tp, d
        M = self.M = 2 * d + 2
        items = farey_items(d, tp.max_slope)
        self.items = items
        acts = [segment_action(tp, s.q, s.p) for s in items]
        enc = self.enc = _Encoding(acts, M)
        nb = enc.nb
        Ymax = self.Ymax = math.floor(tp.max_slope * d)
        unit = enc.L // M  # integer weight of 1/M in scaled units

        # worst-case magnitude decides the integer dtype
        amax = max((abs(c) for a in acts for c in enc.encode(a)), default=0)
        bound = d * amax + d * (3 * d * Ymax + Ymax + 2) * unit
        dtype = np.int64 if bound < 2 ** 62 else object

        V = np.zeros((d + 1, Ymax + 1, M, nb), dtype=dtype)
        F = np.zeros((d + 1, Ymax + 1, M))
        R = np.zeros((d + 1, Ymax + 1, M), dtype=bool)
        R[0, 0, 0] = True
        self.V, self.F, self.R = V, F, R
        recs_state, recs_item, recs_strict = [], [], []
        relax = exact_checks = 0
        rgrid = np.arange(M)

        for t, (s, a) in enumerate(zip(items, acts)):
            q, p = s.q, s.p
            avec = np.array(enc.encode(a), dtype=dtype)
            af = float(a)
            for x in range(0, d - q + 1):
                ysm = min(Ymax - p, math.floor(s.slope * x))
                if ysm < 0:
                    continue
                Ys = np.arange(ysm + 1)
                dI = 2 * q * Ys + q * p + p - 1
                src_r = (rgrid[None, :] - dI[:, None]) % M
                Yc = Ys[:, None]
                sreach = R[x, Yc, src_r]
                if not sreach.any():
                    continue
                cand = V[x, Yc, src_r] + avec
                if dtype is object:
                    cand[..., 0] -= np.array([int(v) * unit for v in dI], dtype=object)[:, None]
                else:
                    cand[..., 0] -= (dI * unit)[:, None]
                candF = F[x, Yc, src_r] + af - dI[:, None] / M
                tgt = slice(p, p + ysm + 1)
                tV, tF, tR = V[x + q, tgt], F[x + q, tgt], R[x + q, tgt]
                relax += int(sreach.sum())
                tol = _REL_TOL * np.maximum(1.0, np.abs(tF))
                diff = candF - tF
                better = sreach & (~tR | (diff > tol))
                near = sreach & tR & (np.abs(diff) <= tol)
                tie = np.zeros_like(near)
                if near.any():
                    eq = np.all(cand == tV, axis=-1)
                    tie = near & eq
                    amb = near & ~eq
                    if amb.any():
                        for idx in zip(*np.nonzero(amb)):
                            exact_checks += 1
                            dv = [int(u) - int(v) for u, v in zip(cand[idx], tV[idx])]
                            if exact_sign(enc.decode(dv)) > 0:
                                better[idx] = True
                if better.any():
                    tV[better] = cand[better]
                    tF[better] = candF[better]
                    tR[better] = True
                if track:
                    base = ((x + q) * (Ymax + 1) + p) * M
                    for mask, flag in ((better, True), (tie, False)):
                        iy, ir = np.nonzero(mask)
                        if len(iy):
                            recs_state.append(base + iy * M + ir)
                            recs_item.append(np.full(len(iy), t, dtype=np.int32))
                            recs_strict.append(np.full(len(iy), flag))
        self.stats = {
            "items": len(items),
            "states": int(R.sum()),
            "state_space": int(R.size),
            "relaxations": relax,
            "exact_checks": exact_checks,
            "radical_basis": len(enc.basis),
            "scale": str(enc.L),
        }
        self.tracked = track
        if track and recs_state:
            st = np.concatenate(recs_state)
            it = np.concatenate(recs_item)
            sf = np.concatenate(recs_strict)
            order = np.lexsort((it, st))
            self.rec_state, self.rec_item, self.rec_strict = st[order], it[order], sf[order]
        else:
            self.rec_state = np.zeros(0, dtype=np.int64)
            self.rec_item = np.zeros(0, dtype=np.int32)
            self.rec_strict = np.zeros(0, dtype=bool)

    # -- queries --

    def best_final(self, k: int):
        """Exact max of g over final states with residue ``k mod M`` and the argmax set."""
        d, M = self.d, self.M
        r = k % M
        reach = self.R[d, :, r]
        Ys = np.nonzero(reach)[0]
        if len(Ys) == 0:
            return None, []
        fs = self.F[d, Ys, r]
        top = fs.max()
        close = Ys[fs >= top - _REL_TOL * max(1.0, abs(top))]
        vals = [(int(Y), self.enc.decode(self.V[d, Y, r])) for Y in close]
        best = vals[0][1]
        for _, v in vals[1:]:
            if exact_sign(v - best) > 0:
                best = v
        return best, [Y for Y, v in vals if v == best]

    def _records(self, state: int, tmax: int):
        lo = np.searchsorted(self.rec_state, state, "left")
        hi = np.searchsorted(self.rec_state, state, "right")
        its = self.rec_item[lo:hi]
        sts = self.rec_strict[lo:hi]
        keep = its <= tmax
        its, sts = its[keep], sts[keep]
        if len(its) == 0:
            return []
        last = np.nonzero(sts)[0]
        start = last[-1] if len(last) else 0
        return [int(t) for t in its[start:]]

    def shapes_at(self, Y: int, r: int, cap: int):
        """Optimal shapes (as segment lists, last first) ending at ``(d, Y, r)``."""
        d, M, Ymax = self.d, self.M, self.Ymax
        out = []

        def rec(x, Y, r, tmax, acc):
            if len(out) >= cap:
                return
            if x == 0:
                if Y == 0 and r == 0:
                    out.append(list(reversed(acc)))
                return
            state = (x * (Ymax + 1) + Y) * M + r
            for t in reversed(self._records(state, tmax)):
                s = self.items[t]
                Yp = Y - s.p
                rp = (r - (2 * s.q * Yp + s.q * s.p + s.p - 1)) % M
                acc.append(s)
                rec(x - s.q, Yp, rp, t, acc)
                acc.pop()

        rec(d, Y, r, len(self.items) - 1, [])
        return out


def _runs(segs):
    runs = []
    for s in segs:
        if runs and runs[-1][0] == s:
            runs[-1][1] += 1
        else:
            runs.append([s, 1])
    return tuple((s, m) for s, m in runs)


_CACHE: "OrderedDict[tuple, _Program]" = OrderedDict()
_CACHE_SIZE = 32
_LOCK = threading.Lock()


def _get_program(tp: TwistProfile, d: int, track: bool) -> _Program:
    # a program built with witness tracking also answers untracked queries
    keys = [(tp, d, True)] if track else [(tp, d, False), (tp, d, True)]
    with _LOCK:
        for key in keys:
            if key in _CACHE:
                _CACHE.move_to_end(key)
                return _CACHE[key]
    prog = _Program(tp, d, track)
    with _LOCK:
        _CACHE[(tp, d, track)] = prog
        while len(_CACHE) > _CACHE_SIZE:
            _CACHE.popitem(last=False)
    return prog


def clear_cache():
    with _LOCK:
        _CACHE.clear()


def c_dk(tp: TwistProfile, d: int, k: int, witnesses: bool = True) -> SpectralResult:
    """Exact ``c_{d,k}`` with up to 16 optimal witness paths.

    Returns a result with ``value=None`` when no compatible path has index k.
    Witnesses are sorted by ``(y0, slopes)`` and each one is re-verified with
    the area index formula and the action formula.
    """
    check_parity(d, k)
    if not isinstance(tp, TwistProfile):
        raise ProfileError("expected a TwistProfile")
    prog = _get_program(tp, d, witnesses)
    M = prog.M
    g, Ys = prog.best_final(k)
    stats = dict(prog.stats)
    if g is None:
        return SpectralResult(d, k, None, [], stats)
    value = g + Fraction(k, M)
    paths = []
    if witnesses:
        for Y in Ys:
            for segs in prog.shapes_at(Y, k % M, _WITNESS_SEARCH_CAP - len(paths)):
                runs = _runs(segs)
                I0 = index_by_area(LatticePath(0, runs)).I
                paths.append(LatticePath((k - I0) // M, runs))
        paths.sort(key=lambda P: (P.y0, [(s.slope, m) for s, m in P.runs]))
        paths = paths[:WITNESS_CAP]
        for P in paths:
            if index_by_area(P).I != k or action(P, tp) != value:
                raise CertificateError(f"witness {P} does not reproduce c_{{{d},{k}}}")
    return SpectralResult(d, k, value, paths, stats)


def spectral_table(tp: TwistProfile, d: int, ks: Iterable[int]) -> dict:
    """``{k: value or None}`` from a single program run."""
    prog = _get_program(tp, d, False)
    out = {}
    for k in ks:
        check_parity(d, k)
        g, _ = prog.best_final(k)
        out[k] = None if g is None else g + Fraction(k, prog.M)
    return out


def shifted_value(value, d: int, const):
    """Spectral value of ``H + const``: adding a constant shifts ``c_{d,k}`` by ``d * const``."""
    return None if value is None else value + d * Fraction(const)


# -- brute-force oracle ----------------------------------------------------

def _column_heights(runs, d):
    """Scaled heights ``D * P(x)`` at integer x for a shape starting at 0."""
    D = 1
    for s, _ in runs:
        D = D * s.q // math.gcd(D, s.q)
    hs = []
    x = 0
    Y = Fraction(0)
    col = [0] * (d + 1)
    for s, m in runs:
        for _ in range(m):
            for dx in range(s.q):
                col[x + dx] = int((Y + Fraction(s.p * dx, s.q)) * D)
            x += s.q
            Y += s.p
    col[d] = int(Y * D)
    return np.array(col, dtype=np.int64), D


def oracle_table(tp: TwistProfile, d: int, ks: Iterable[int], limit: int = DEFAULT_ORACLE_DEGREE,
                 slope_budget=ORACLE_SLOPE_BUDGET) -> dict:
    """Brute-force ``{k: SpectralResult}`` by enumerating every compatible path.

    Each shape is tried at every start height in a window wide enough for all
    requested ``k``; indices are obtained by counting lattice points column by
    column, independently of the area formula used by :func:`c_dk`.
    """
    ks = sorted(set(ks))
    for k in ks:
        check_parity(d, k)
    top = tp.max_slope
    M = 2 * d + 2
    kmax = max((abs(k) for k in ks), default=0)
    ybound = (kmax + 2 * top * d * d + top * d + d) / M + 1
    yr = np.arange(-math.ceil(ybound), math.ceil(ybound) + 1)
    kset = set(ks)
    best = {k: None for k in ks}
    best_f = {k: -math.inf for k in ks}
    tied = {k: [] for k in ks}
    considered = 0
    shapes = 0
    for runs in enumerate_shapes(d, top, limit, slope_budget):
        shapes += 1
        a0 = action(LatticePath(0, runs), tp)
        f0 = float(a0)
        col, D = _column_heights(runs, d)
        # j = sum over columns of ceil(y0 + P(x)); see index_by_count
        num = yr[:, None] * D + col[None, :]
        j = (-((-num) // D)).sum(axis=1)
        I = 2 * j - d
        considered += len(yr)
        for y0, Iv in zip(yr.tolist(), I.tolist()):
            if Iv not in kset:
                continue
            f = f0 + y0
            bf = best_f[Iv]
            if f < bf - _REL_TOL * max(1.0, abs(bf)):
                continue
            v = a0 + y0
            cur = best[Iv]
            sgn = 1 if cur is None else exact_sign(v - cur)
            if sgn > 0:
                best[Iv], best_f[Iv], tied[Iv] = v, float(v), [(y0, runs)]
            elif sgn == 0:
                tied[Iv].append((y0, runs))
    out = {}
    for k in ks:
        paths = [LatticePath(y0, runs) for y0, runs in tied[k]]
        paths.sort(key=lambda P: (P.y0, [(s.slope, m) for s, m in P.runs]))
        paths = paths[:WITNESS_CAP]
        for P in paths:
            if index_by_count(P).I != k:
                raise CertificateError(f"oracle witness {P} has the wrong index")
        out[k] = SpectralResult(d, k, best[k], paths,
                                {"shapes": shapes, "paths_considered": considered,
                                 "y_window": [int(yr[0]), int(yr[-1])]})
    return out


def oracle_c_dk(tp: TwistProfile, d: int, k: int, limit: int = DEFAULT_ORACLE_DEGREE,
                slope_budget=ORACLE_SLOPE_BUDGET) -> SpectralResult:
    check_parity(d, k)
    return oracle_table(tp, d, [k], limit, slope_budget)[k]


# -- axioms ----------------------------------------------------------------

@dataclass
class AxiomReport:
    d: int
    checks: list = field(default_factory=list)  # (axiom, k, ok, detail)

    def add(self, name, k, ok, detail=""):
        self.checks.append((name, k, bool(ok), detail))

    @property
    def violations(self) -> list:
        return [c for c in self.checks if not c[2]]

    @property
    def ok(self) -> bool:
        return not self.violations

    def count(self, name) -> int:
        return sum(1 for c in self.checks if c[0] == name)


def axiom_report(tp: TwistProfile, tq: TwistProfile, d: int, ks: Optional[Iterable[int]] = None) -> AxiomReport:
    """Check the spectral axioms that can be stated inside the twist model.

    Monotonicity: ``h <= g`` implies ``c(H) <= c(G)``.
    Continuity: ``d min(H - G) <= c(H) - c(G) <= d max(H - G)``.
    Periodicity: ``c_{d,k+2d+2} = c_{d,k} + 1`` when both are feasible.
    Shift law: moving a witness up by one raises its index by ``2d+2`` and
    its action by 1.
    Normalization: for the zero profile ``c_{d,-d} = 0``.
    """
    M = 2 * d + 2
    ks = list(range(-d, d + 1, 2)) if ks is None else list(ks)
    rep = AxiomReport(d)
    lo, hi = difference_extrema(tp, tq)
    lo, hi = lo / 2, hi / 2  # H = h/2
    want = sorted(set(ks) | {k + M for k in ks})
    ct = spectral_table(tp, d, want)
    cq = spectral_table(tq, d, want)
    for k in ks:
        a, b = ct[k], cq[k]
        if a is None or b is None:
            rep.add("feasibility", k, a is None and b is None, "feasibility differs between profiles")
            continue
        diff = a - b
        if exact_sign(hi) <= 0:
            rep.add("monotonicity", k, exact_sign(diff) <= 0, f"h<=g but c diff {diff}")
        if exact_sign(lo) >= 0:
            rep.add("monotonicity", k, exact_sign(diff) >= 0, f"h>=g but c diff {diff}")
        rep.add("continuity", k, exact_sign(diff - d * lo) >= 0 and exact_sign(d * hi - diff) >= 0,
                f"diff {diff} outside [{d * lo}, {d * hi}]")
        for name, tbl in (("periodicity", ct), ("periodicity", cq)):
            if tbl[k + M] is not None:
                rep.add(name, k, tbl[k + M] == tbl[k] + 1, f"{tbl[k + M]} vs {tbl[k]} + 1")
        res = c_dk(tp, d, k)
        for P in res.witnesses[:2]:
            Q = P.shifted(1)
            rep.add("shift", k, index_by_area(Q).I == k + M and action(Q, tp) == action(P, tp) + 1)
    z = spectral_table(zero_profile(), d, [-d])[-d]
    rep.add("normalization", -d, z == 0, f"c_{{d,-d}}(0) = {z}")
    return rep
