"""Concave lattice paths and their index, computed two ways."""
from pfh_lattice import enumerate_paths, index_by_area, index_by_count, make_path

# a degree 4 path: flat at height -1 for three steps, then up by 5
P = make_path(-1, [((1, 0), 3), ((1, 5), 1)])
print("path:", P, "vertices:", P.vertices())

# lattice points above the axis (j+) and below it (j-)
c = index_by_count(P)
print("j+ =", c.j_plus, " j- =", c.j_minus, " I = 2j - d =", c.I)

# the same index from twice the area, lowest/highest heights and segment count
a = index_by_area(P)
print("2A =", a.A_twice, " y =", a.y, " w =", a.w, " e =", a.e, " I =", a.I)

# raising a path by one adds 2d+2 to the index
print("shifted up:", index_by_area(P.shifted(1)).I)

# brute-force agreement on every small path
n = bad = 0
for d in range(1, 6):
    for Q in enumerate_paths(d, 3, range(-2, 3)):
        n += 1
        bad += index_by_count(Q).I != index_by_area(Q).I
print(f"{n} paths checked, {bad} disagreements")
