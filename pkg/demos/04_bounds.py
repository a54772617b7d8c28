"""
From monomial counts to cap-set rates
=====================================

M_n counts monomials with degrees below q in each of n variables and total
degree at most (q-1)n/3.  Its growth rate b_q beats q, which is what
bounds caps; the gap also fixes how large eps may be.
"""

from almostcap.bounds import asymptotic_bq, bounds_report, finite_rate, monomial_count

# exact big-integer counts
print([monomial_count(3, n) for n in range(1, 9)])

# M_n^(1/n) approaches b_q slowly from below
b3 = asymptotic_bq(3)
for n in (10, 100, 300, 1000):
    print(f"n={n:5d}: M_n^(1/n) = {finite_rate(3, n):.5f}  (b_3 = {b3:.5f})")

# per field: rate, epsilon budget and resulting almost-cap rate
for q in (2, 3, 5, 7, 11):
    rep = bounds_report(q)
    print(f"q={q:2d}: b_q={rep.b_q:.4f}, eps_max={rep.eps_max:.4f}, eps={rep.eps:.4f}, c_q={rep.c_q:.4f}")
