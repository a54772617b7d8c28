"""
Greedy independent sets in the support hypergraph
=================================================

Off-diagonal support entries of a tensor become 2- and 3-edges.  A random
greedy order picks an independent set whose size is compared with
sum_x (d_x + 1)^(-1/3).
"""

from almostcap.ap import CoeffTriple
from almostcap.capsearch import random_subset
from almostcap.hypergraph import caro_wei_bound, caro_wei_greedy, support_hypergraph
from almostcap.tensor import ap_tensor, diagonal_rank_certificate

t = CoeffTriple(1, 1, 1, 3)

for density in (0.1, 0.2, 0.4):
    A = random_subset(3, 4, density, seed=3)
    T = ap_tensor(A, t)
    H = support_hypergraph(T)
    chosen = caro_wei_greedy(H, trials=200, seed=0)
    bound = caro_wei_bound(H)
    # the chosen points are a cap inside A, and certify a slice-rank lower bound
    rank_lb = diagonal_rank_certificate(T, chosen)
    print(f"density {density}: |A|={len(A):3d}, edges={len(H.edges):4d}, |I|={len(chosen):3d}, "
          f"sum={bound:6.2f}, ratio={len(chosen) / bound:.2f}, rank >= {rank_lb}")

# more trials can only help, and the best is reproducible per seed
H = support_hypergraph(ap_tensor(random_subset(3, 4, 0.3, seed=5), t))
print([len(caro_wei_greedy(H, k, seed=11)) for k in (1, 10, 100, 1000)])
