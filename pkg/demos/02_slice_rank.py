"""
Slice rank of the solution tensor
=================================

The AP tensor T(x, y, z) = [x + y + z = 0] over a point set, its exact
slice rank on tiny cases, and the polynomial decomposition that bounds
it by 3 times a monomial count on the full space.
"""

from almostcap.ap import CoeffTriple
from almostcap.bounds import monomial_count
from almostcap.field import PointSet
from almostcap.tensor import ap_tensor, clp_decomposition, diagonal_rank_certificate, slice_rank_exact_small

t = CoeffTriple(1, 1, 1, 3)

# on a cap the tensor is diagonal, so its slice rank is the set size
cap = PointSet.from_points(3, 2, [(0, 0), (0, 1), (1, 1)])
T = ap_tensor(cap, t)
print("cap tensor support:", sorted(T.entries))
print("slice rank:", slice_rank_exact_small(T), "certificate:", diagonal_rank_certificate(T, range(3)))

# F_3 itself is one line; its tensor has rank 3 although only 2 points are independent
line = ap_tensor(PointSet.full_space(3, 1), t)
print("F_3: rank", slice_rank_exact_small(line), "certificate from {0,1}:", diagonal_rank_certificate(line, {0, 1}))

# the polynomial decomposition grows like 3 * M_n, far slower than 3^n
for n in (1, 2, 3, 4):
    count = len(clp_decomposition(3, n, t)) if n <= 3 else None
    print(f"n={n}: 3^n = {3**n:3d}, 3*M_n = {3 * monomial_count(3, n):3d}, slices used = {count}")
