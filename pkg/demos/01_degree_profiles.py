"""
Solution-pair degrees and (eps, delta)-caps
===========================================

Each point x of a set A gets a degree: the number of pairs (y, z) in A^2
with x + y + z = 0 over F_3.  Points with few pairs are "light".
"""

import numpy as np

from almostcap.ap import CoeffTriple, classify_eps_delta, degree_profile, is_cap_set, pair_threshold
from almostcap.capsearch import random_subset
from almostcap.field import PointSet

t = CoeffTriple(1, 1, 1, 3)

# a cap set only has the constant solutions, so every degree is 1
cap = PointSet.from_points(3, 2, [(0, 0), (0, 1), (1, 0), (1, 1)])
print("cap degrees:", degree_profile(cap, t).degrees, "is cap:", is_cap_set(cap, t))

# the full space is as far from a cap as possible: d_x = 3^n for every x
full = PointSet.full_space(3, 3)
print("full space degrees:", set(degree_profile(full, t).degrees.tolist()))

# a random half of F_3^4 sits in between
A = random_subset(3, 4, 0.5, seed=1)
prof = degree_profile(A, t)
print(f"|A| = {len(A)}, degrees range {prof.degrees.min()}..{prof.degrees.max()}, mean {prof.degrees.mean():.1f}")

# light means fewer than ceil(|A|^eps) pairs; sweep eps to watch the light part shrink
for eps in (0.25, 0.5, 0.75, 0.9):
    res = classify_eps_delta(prof, eps, 0.5)
    light = len(res.witness) / len(A)
    print(f"eps={eps:4}: threshold {pair_threshold(len(A), eps):3d}, light fraction {light:.2f}, (eps,0.5)-cap: {res.is_cap}")

# the histogram of degrees is what the heavy/light split cuts through
values, counts = np.unique(prof.degrees, return_counts=True)
print(dict(zip(values.tolist(), counts.tolist())))
