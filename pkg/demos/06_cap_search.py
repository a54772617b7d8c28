"""
Exact caps and planted almost-caps
==================================

Largest caps in tiny spaces, and sets stripped of their heaviest points
until most of what remains is light.
"""

from almostcap.ap import CoeffTriple, classify_eps_delta, degree_profile
from almostcap.capsearch import light_fraction, max_cap_exact, planted_light_set
from almostcap.field import Point

t = CoeffTriple(1, 1, 1, 3)

for n in (1, 2, 3):
    res = max_cap_exact(3, n, t)
    print(f"F_3^{n}: max cap {res.size} ({res.nodes} nodes)", [Point.from_code(c, 3, n).digits for c in res.witness.codes])

# compare with another triple over F_5
print("F_5^2, 2x + y + 2z:", max_cap_exact(5, 2, CoeffTriple(2, 1, 2, 5)).size)

# planting: remove max-degree points until 90% are light
res = planted_light_set(3, 4, t, 0.9, seed=4, density=0.6)
print(f"removed {res.removed} points, {len(res.points)} left, light fraction {res.achieved:.2f}")
print("re-measured:", light_fraction(res.points, t), classify_eps_delta(degree_profile(res.points, t), 0.5, 0.85).is_cap)
