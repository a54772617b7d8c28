"""
Distinct solutions of longer equations
======================================

Search for x_1..x_d in A, all distinct, with a_1 x_1 + ... + a_d x_d = 0.
The search builds partial sums a_1 x_1 + ... + a_k x_k = b_k t_k one
coordinate at a time, after ordering the coefficients so no b_k vanishes.
"""

from almostcap.capsearch import random_subset
from almostcap.chain import CoeffVector, brute_force_solutions, find_distinct_solution, prefix_rearrange
from almostcap.errors import NoValidRearrangementError
from almostcap.field import Point, PointSet

# reorder coefficients so that every partial sum is nonzero
cv = CoeffVector((1, 2, 1, 2), 3)
print("prefix sums as given:", cv.prefix_sums(), "after reordering:", cv.prefix_sums(prefix_rearrange(cv)))
try:
    prefix_rearrange(CoeffVector((1, 1, 1, 1), 2))
except NoValidRearrangementError as exc:
    print("over F_2:", exc)

# a solution in a random subset of F_5^3
A = random_subset(5, 3, 0.15, seed=2)
cv = CoeffVector((1, 2, 3, 3, 1), 5)
res = find_distinct_solution(A, cv, check=True)
print(f"|A|={len(A)}, status={res.status}, phase={res.phase}, nodes={res.nodes}")
if res.found:
    print("solution:", [Point.from_code(c, 5, 3).digits for c in res.solution])

# small sets can avoid every distinct solution; brute force agrees
B = PointSet(5, 2, [10, 14, 18, 21])
cv = CoeffVector((2, 2, 4, 2), 5)
print(find_distinct_solution(B, cv).status, "brute force:", brute_force_solutions(B, cv))
