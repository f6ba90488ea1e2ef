from fractions import Fraction as F

import numpy as np
import pytest

from pfh_lattice import (
    ParityError, action, axiom_report, c_dk, cubic_profile, eval_h, hinge_profile, index_by_area,
    index_by_count, make_path, oracle_c_dk, oracle_table, quadratic_profile, scale,
    spectral_table, zero_profile, build_family,
)
from pfh_lattice.spectral import shifted_value
from pfh_lattice.twist import random_nice_profile

Q = quadratic_profile(2)


def test_worked_values():
    assert c_dk(Q, 1, -1).value == 0
    assert c_dk(Q, 1, 1).value == F(3, 4)
    assert c_dk(scale(Q, 2), 1, -1).value == F(1, 2)


def test_oracle_worked_values():
    assert oracle_c_dk(Q, 1, -1).value == 0
    assert oracle_c_dk(scale(Q, 2), 1, -1).value == F(1, 2)
    r = oracle_c_dk(Q, 2, -2)
    assert r.value is not None and r.witnesses


def test_parity_errors():
    with pytest.raises(ParityError):
        c_dk(Q, 1, 0)
    with pytest.raises(ParityError):
        oracle_c_dk(Q, 1, 0)


def test_witnesses_verified_and_sorted():
    r = c_dk(cubic_profile(6), 4, -2)
    assert 1 <= len(r.witnesses) <= 16
    for P in r.witnesses:
        assert index_by_count(P).I == -2
        assert action(P, cubic_profile(6)) == r.value
    keys = [(P.y0, P.slopes) for P in r.witnesses]
    assert keys == sorted(keys)


def test_flat_profile_has_many_ties():
    # every shape has action y0 for the zero profile; ties are all reported up to the cap
    r = c_dk(hinge_profile(F(1, 2), 1), 3, -3)
    assert r.value == 0 and r.witnesses


@pytest.mark.parametrize("tp", [Q, cubic_profile(3), scale(Q, 2)], ids=["quad", "cubic", "quad2"])
def test_matches_oracle_small(tp):
    for d in range(1, 5):
        ks = list(range(-3 * d, 3 * d + 1, 2))
        fast = spectral_table(tp, d, ks)
        slow = oracle_table(tp, d, ks)
        assert all(fast[k] == slow[k].value for k in ks)


def test_anchor_path_lower_bound():
    # nice profile with h'(z0) = 5 at z0 = 3/5 for d = 4
    tp = quadratic_profile(F(25, 8))  # h' = (25/16)(z+1): equals 5/2 at z0
    tp = scale(tp, 2)
    z0 = F(3, 5)
    P = make_path(-1, [((1, 0), 3), ((1, 5), 1)])
    assert index_by_area(P).I == -4
    bound = -1 + F(5, 2) * (1 - z0) + eval_h(tp, z0) / 2
    assert action(P, tp) == bound
    assert c_dk(tp, 4, -4).value >= bound


def test_zero_profile_normalization():
    z = zero_profile()
    for d in range(1, 5):
        t = spectral_table(z, d, range(-d, d + 1, 2))
        assert t[-d] == 0
        assert all(v is None for k, v in t.items() if k != -d)


def test_family_corner_profile():
    f = build_family(1, 1).f(1)
    assert c_dk(f, 1, -1).value == oracle_c_dk(f, 1, -1).value


def test_shift_property_reporting():
    assert shifted_value(F(1, 2), 3, F(1, 3)) == F(3, 2)
    assert shifted_value(None, 3, 1) is None


def test_axiom_report_examples():
    r = axiom_report(Q, scale(Q, 2), 2)
    assert r.ok and r.count("monotonicity") > 0
    r = axiom_report(Q, Q, 3, ks=[-3])
    assert r.ok and r.count("periodicity") >= 1
    r = axiom_report(cubic_profile(3), cubic_profile(3), 2)
    assert all(c[2] for c in r.checks if c[0] == "continuity")


def test_periodicity_direct():
    t = spectral_table(Q, 3, [-3, 5])
    assert t[5] == t[-3] + 1


def test_axioms_random_small():
    rng = np.random.default_rng(7)
    for _ in range(10):
        a, b = random_nice_profile(rng), random_nice_profile(rng)
        assert axiom_report(a, b, int(rng.integers(1, 4))).ok


def test_scaling_monotone_and_bounded():
    from pfh_lattice import zeta_closed
    for d in (1, 2, 3):
        ratios = [c_dk(scale(Q, n), d, -d, witnesses=False).value / n for n in (1, 2, 4, 8, 16, 32)]
        assert all(a <= b for a, b in zip(ratios, ratios[1:]))
        assert all(r <= zeta_closed(Q, d) for r in ratios)
