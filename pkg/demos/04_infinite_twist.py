"""Growth of eta_d for an unbounded twist envelope."""
from pfh_lattice import growth_table
from pfh_lattice.twist import default_infinite_twist

spec = default_infinite_twist(1024)
print("slopes at z_d:", [int(spec.slopes[d]) for d in range(2, 10)])

rep = growth_table(spec, [4, 6], actual_max=6)
for row in rep.rows:
    print(f"d={row.d}: lower bound {row.eta_lower}, spectral engine {row.eta_actual}")

rep = growth_table(spec, range(4, 1025, 4), actual_max=0)
for row in rep.rows[::32]:
    print(f"d={row.d:5d}  eta_lower/d = {float(row.ratio):9.3f}")
print("strictly increasing:", rep.strictly_increasing)
