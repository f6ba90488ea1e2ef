"""The hinge family: matrix of invariants, embedding sandwich, separation."""
import numpy as np

from pfh_lattice import build_family, embedding_bounds, inverse_inf_norm, mu_matrix, separation
from pfh_lattice.hofer_lab import random_pairs

fam = build_family(iota=3, n=4)
print("degrees d_i:", fam.degrees)

rep = mu_matrix(fam)   # uses members 1..3, member 4 as the reference
print("A =")
print(np.array([[str(x) for x in row] for row in rep.matrix_A]))
print("lower triangular:", rep.triangular_ok, " positive diagonal:", rep.diag_ok)
print("||A^-1|| =", inverse_inf_norm(rep.matrix_A))

# the invariants give a lower bound, the energy estimate an upper bound
for t, s in list(random_pairs(rep.n, 3, seed=1)):
    lo, hi = embedding_bounds(rep, t, s)
    print([str(x) for x in t], [str(x) for x in s], "->", float(lo), "<=", float(hi))

res = separation(fam, 1, 1, 2)
print("separation margin", res.margin, ">= 3/16 ?", res.ok)
