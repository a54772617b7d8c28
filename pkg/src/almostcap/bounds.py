"""Monomial counts and the slice-rank exponents derived from them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

from .field import make_field

INV_PHI = (math.sqrt(5) - 1) / 2


def monomial_count(q: int, n: int) -> int:
    """Monomials in ``n`` variables, each degree <= q-1, total degree <= (q-1)n/3.

    Exact integer DP over the variables, indexed by total degree.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    counts = [1]
    for _ in range(n):
        nxt = [0] * (len(counts) + q - 1)
        for deg, c in enumerate(counts):
            for e in range(q):
                nxt[deg + e] += c
        counts = nxt
    return sum(c for deg, c in enumerate(counts) if 3 * deg <= (q - 1) * n)


def finite_rate(q: int, n: int) -> float:
    """``(3 M_n)^(1/n)``: the per-coordinate growth of the slice-rank witness."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.exp(math.log(3 * monomial_count(q, n)) / n)


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12) -> float:
    """Minimiser of a unimodal ``f`` on ``[lo, hi]`` to absolute tolerance ``tol``."""
    a, b = lo, hi
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    return (a + b) / 2


def rate_function(q: int) -> Callable[[float], float]:
    """``g(x) = (1 + x + ... + x^(q-1)) / x^((q-1)/3)``; ``g(x)^n`` bounds ``M_n`` for every x in (0, 1]."""
    expo = (q - 1) / 3

    def g(x: float) -> float:
        return sum(x**i for i in range(q)) / x**expo

    return g


def asymptotic_bq(q: int, tol: float = 1e-12) -> float:
    make_field(q)
    g = rate_function(q)
    x = golden_section(g, 1e-9, 1.0, tol)
    return g(x)


def epsilon_budget(q: int, bq: Optional[float] = None) -> dict:
    """Largest admissible eps with ``b_q^(1/(1-eps/3)) < q`` and a representative (eps, c_q)."""
    if bq is None:
        bq = asymptotic_bq(q)
    eps_max = 3 * (1 - math.log(bq) / math.log(q))
    eps = eps_max / 2
    lower = bq ** (1 / (1 - eps / 3))
    return {"eps_max": eps_max, "suggested_eps": eps, "suggested_cq": (lower + q) / 2, "cq_lower": lower}


@dataclass(frozen=True)
class BoundsReport:
    q: int
    n: Optional[int]
    M_n: Optional[int]
    finite_rate: Optional[float]
    b_q: float
    eps_max: float
    eps: float
    c_q: float
    c_q_lower: float

    def to_json(self) -> dict:
        out = asdict(self)
        if self.M_n is not None:
            out["M_n"] = str(self.M_n) if self.M_n >= 2**53 else self.M_n
        return out


def bounds_report(q: int, n: Optional[int] = None, tol: float = 1e-12) -> BoundsReport:
    bq = asymptotic_bq(q, tol)
    budget = epsilon_budget(q, bq)
    m = monomial_count(q, n) if n is not None else None
    rate = finite_rate(q, n) if n else None
    return BoundsReport(
        q=q,
        n=n,
        M_n=m,
        finite_rate=rate,
        b_q=bq,
        eps_max=budget["eps_max"],
        eps=budget["suggested_eps"],
        c_q=budget["suggested_cq"],
        c_q_lower=budget["cq_lower"],
    )
