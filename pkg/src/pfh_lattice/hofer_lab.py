"""Hofer-geometry certificates assembled from the invariants.

Nothing here computes a Hofer distance.  Lower bounds come from the
homogenized invariants (which are Lipschitz for the Hofer metric) and upper
bounds from explicit energy estimates; every number is labelled accordingly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import CertificateError, LemmaInapplicable
from .invariants import eta, eta_lower_bound, mu
from .twist import FamilyConfig, InfiniteTwistSpec, eval_h, scale

__all__ = [
    "QuasiFlatReport", "mu_matrix", "embedding_bounds", "inverse_inf_norm",
    "SeparationResult", "separation", "GrowthRow", "GrowthReport", "growth_table",
    "fold", "fold_vector", "random_pairs",
]


def _frac_vec(v) -> list:
    out = []
    for x in v:
        x = Fraction(x)
        if x < 0:
            raise ValueError("vectors must have nonnegative components")
        out.append(x)
    return out


@dataclass
class QuasiFlatReport:
    n: int
    degrees: tuple
    matrix_A: list  # n x n Fractions
    diag_ok: bool
    triangular_ok: bool
    diag_lower: list  # certified lower bounds for the diagonal
    offdiag_ok: bool  # entries below the diagonal are >= 3/16
    smoothing_slack: list  # |A_ij(h) - A_ij(f)| <= slack_j

    def lower(self, t, s) -> Fraction:
        diff = [a - b for a, b in zip(_frac_vec(t), _frac_vec(s))]
        return max(abs(sum(a * x for a, x in zip(row, diff))) for row in self.matrix_A)

    def upper(self, t, s) -> Fraction:
        diff = [a - b for a, b in zip(_frac_vec(t), _frac_vec(s))]
        n = self.n
        return 2 * n * (2 * max(abs(x) for x in diff) + 1 + Fraction(1, n))

    def as_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix_A])


def mu_matrix(fam: FamilyConfig) -> QuasiFlatReport:
    """Matrix ``A_ij = (mu_{d_i}(H_j) - mu_{d_i}(H_{n+1})) / d_i`` for i, j <= n.

    Uses the exact hinge profiles; ``fam`` must have ``n + 1`` members.  The
    last member only enters through ``mu_{d_i}(H_{n+1}) = -d_i/2``.
    """
    n = fam.n - 1
    if n < 1:
        raise ValueError("family too small: need at least two members")
    A = []
    for i in range(1, n + 1):
        di = fam.d(i)
        ref = mu(fam.f(n + 1), di)
        if ref != Fraction(-di, 2):
            raise CertificateError(f"mu_{di}(H_{n + 1}) = {ref}, expected {-di}/2")
        A.append([(mu(fam.f(j), di) - ref) / di for j in range(1, n + 1)])
    tri = all(A[i][j] == 0 for i in range(n) for j in range(i + 1, n))
    dl = [1 - Fraction(fam.d(i), fam.d(i) + 1) - Fraction(1, 2 * fam.d(i) ** 2) for i in range(1, n + 1)]
    diag = all(A[i][i] > 0 and A[i][i] >= dl[i] for i in range(n))
    off = all(A[i][j] >= Fraction(3, 16) for i in range(n) for j in range(i))
    # |zeta_d(h) - zeta_d(f)| <= d/(2 d_j) and the means agree, so entries move by <= 1/(2 d_j)
    slack = [Fraction(1, 2 * fam.d(j)) for j in range(1, n + 1)]
    return QuasiFlatReport(n, fam.degrees[:n], A, diag, tri, dl, off, slack)


def embedding_bounds(report: QuasiFlatReport, t: Sequence, s: Sequence):
    """``(||A(t - s)||_inf, 2n(2||t - s||_inf + 1 + 1/n))``."""
    if len(t) != report.n or len(s) != report.n:
        raise ValueError(f"vectors must have length {report.n}")
    lo, hi = report.lower(t, s), report.upper(t, s)
    if lo > hi:
        raise CertificateError(f"lower bound {lo} exceeds upper bound {hi}")
    return lo, hi


def inverse_inf_norm(A: list) -> Fraction:
    """Exact ``||A^{-1}||`` (max row sum) for a lower-triangular matrix."""
    n = len(A)
    inv = [[Fraction(0)] * n for _ in range(n)]
    for c in range(n):
        for i in range(n):
            acc = Fraction(1 if i == c else 0) - sum((A[i][k] * inv[k][c] for k in range(i)), Fraction(0))
            if A[i][i] == 0:
                raise ZeroDivisionError("singular matrix")
            inv[i][c] = acc / A[i][i]
    return max(sum(abs(x) for x in row) for row in inv)


def random_pairs(n: int, count: int, seed: int = 0, scale_max: int = 50):
    """Seeded random nonnegative rational vector pairs."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        t = [Fraction(int(v), 8) for v in rng.integers(0, 8 * scale_max, n)]
        s = [Fraction(int(v), 8) for v in rng.integers(0, 8 * scale_max, n)]
        yield t, s


@dataclass(frozen=True)
class SeparationResult:
    margin: Fraction
    bound: Fraction
    k: int
    certificate: str

    @property
    def ok(self) -> bool:
        return self.margin >= self.bound


def separation(fam: FamilyConfig, r, i: int, j: int) -> SeparationResult:
    """Lower bound on the Hofer distance between ``phi^r_{H_{2i}}`` and ``phi^r_{H_{2j}}``.

    Evaluates ``|mu_{d_k}(r H_{2i}) - mu_{d_k}(r H_{2j})| / d_k`` with the
    smallest ``k`` strictly between ``2i`` and ``2j``, which is at least ``3r/16``.
    """
    r = Fraction(r)
    if r < 0:
        raise ValueError("r must be nonnegative")
    if not 1 <= i < j:
        raise ValueError("need 1 <= i < j")
    if fam.n < 2 * j:
        raise ValueError(f"family has {fam.n} members, need {2 * j}")
    k = 2 * i + 1
    dk = fam.d(k)
    margin = abs(mu(fam.f(2 * i), dk, r) - mu(fam.f(2 * j), dk, r)) / dk
    bound = 3 * r / 16
    if margin < bound:
        raise CertificateError(f"separation margin {margin} below {bound}")
    return SeparationResult(margin, bound, k, f"|mu_{{d_{k}}} difference| / d_{k} >= 3r/16")


def fold(x) -> tuple:
    """``(0, -x)`` for ``x <= 0`` and ``(x, 0)`` for ``x >= 0``."""
    return (0, -x) if x <= 0 else (x, 0)


def fold_vector(v) -> tuple:
    out = []
    for x in v:
        out.extend(fold(x))
    return tuple(out)


@dataclass(frozen=True)
class GrowthRow:
    d: int
    value: Fraction  # f(z_d)
    slope: Fraction  # f'(z_d)
    eta_lower: Fraction
    ratio: Fraction
    eta_actual: Optional[object] = None
    truncation_degree: Optional[int] = None


@dataclass
class GrowthReport:
    rows: list = field(default_factory=list)

    @property
    def ratios(self) -> list:
        return [r.ratio for r in self.rows]

    @property
    def strictly_increasing(self) -> bool:
        rs = self.ratios
        return all(a < b for a, b in zip(rs, rs[1:]))

    @property
    def actual_ok(self) -> bool:
        return all(r.eta_actual >= r.eta_lower for r in self.rows if r.eta_actual is not None)


def growth_table(spec: InfiniteTwistSpec, d_list: Iterable[int], actual_max: int = 6) -> GrowthReport:
    """Rows ``(d, eta_lower = f(z_d)/2 - d/6, ratio = eta_lower/d)``.

    For ``d <= actual_max`` also runs the spectral engine on the truncation
    that follows ``f`` up to ``z_d`` and checks ``eta_actual >= eta_lower``.
    """
    ds = list(d_list)
    for d in ds:
        if d < 4 or d % 2:
            raise ValueError(f"degrees must be even and >= 4 (got {d})")
    bad = spec.first_violation(ds)
    if bad is not None:
        raise LemmaInapplicable(f"lemma inapplicable: envelope not adapted at d={bad}")
    rep = GrowthReport()
    for d in ds:
        v = spec.values[d]
        low = v / 2 - Fraction(d, 6)
        act = None
        D = None
        if d <= actual_max:
            D = d
            tr = spec.truncate_at(D)
            if eval_h(tr, spec.z(d)) != v:
                raise CertificateError("truncation does not follow the envelope")
            # the witness path certifies c_d >= H(z0); c_2 vanishes because f = 0 below z_2
            eta_lower_bound(tr, d, require_small_support=False)
            act = eta(tr, d)
            if act < low:
                raise CertificateError(f"eta_{d} = {act} below the lower bound {low}")
        rep.rows.append(GrowthRow(d, v, spec.slopes[d], low, low / d, act, D))
    return rep
