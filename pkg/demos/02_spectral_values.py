"""Spectral values of twist maps and the closed form they approach."""
from pfh_lattice import (
    c_dk, cubic_profile, oracle_c_dk, quadratic_profile, scale, spectral_table, zeta_closed,
)

h = quadratic_profile(2)          # h(z) = (z+1)^2 / 2

# c_{1,-1} for h and 2h; the witness path is returned with the value
for n in (1, 2):
    r = c_dk(scale(h, n), 1, -1)
    print(f"c_1,-1({n}H) = {r.value}   witnesses: {[str(w) for w in r.witnesses]}")

# a cubic profile has irrational inverse slopes; values stay exact
r = c_dk(cubic_profile(3), 3, -3)
print("cubic c_3,-3 =", r.value, "~", float(r.value))
print("brute force  =", oracle_c_dk(cubic_profile(3), 3, -3).value)

# every grading at once, and the period 2d+2
d = 2
print(spectral_table(h, d, range(-6, 13, 2)))

# c_d(nH)/n climbs towards the sum of H over d equally spaced circles
for d in (1, 2, 3):
    ratios = [float(c_dk(scale(h, n), d, -d, witnesses=False).value / n) for n in (1, 2, 4, 8, 16, 32)]
    print(f"d={d}", [round(x, 5) for x in ratios], "closed form", float(zeta_closed(h, d)))
