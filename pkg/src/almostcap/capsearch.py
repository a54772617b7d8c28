"""Exact maximum cap sets for tiny spaces and instance generators."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .ap import CoeffTriple, degree_profile, light_set
from .errors import BudgetExhaustedError, FieldMismatchError, InfeasibleError, TooLargeError
from .field import PointSet, check_space, make_field, place_values

EXHAUSTIVE_CAP = 100
BNB_CAP = 10**4
GENERATE_CAP = 2**24


@dataclass(frozen=True)
class CapSearchResult:
    size: int
    witness: PointSet
    nodes: int
    mode: str

    def to_json(self) -> dict:
        return {"size": self.size, "witness": [int(c) for c in self.witness.codes], "nodes": self.nodes}


def _completions(q: int, n: int, t: CoeffTriple) -> np.ndarray:
    """``out[v, s]``: the up to six points w making ``{v, s, w}`` a solution in some order.

    A solution with two equal entries is constant (the coefficients are
    nonzero and sum to zero), so caps are exactly the sets avoiding
    solutions with three distinct points.
    """
    space = PointSet.full_space(q, n)
    digits = np.asarray(space.digits)
    powers = place_values(q, n)
    ctx = make_field(q)
    roles = sorted(set(itertools.permutations(t.as_tuple())))
    out = np.empty((len(space), len(space), len(roles)), dtype=np.int64)
    for r, (alpha, beta, gamma) in enumerate(roles):
        scale = ctx.neg(ctx.inv(gamma))
        lin = (alpha * digits[:, None, :] + beta * digits[None, :, :]) % q
        out[:, :, r] = ((scale * lin) % q) @ powers
    return out


def _is_cap_fast(members, comp: np.ndarray) -> bool:
    inside = set(members)
    for v, s in itertools.combinations(members, 2):
        for w in comp[v, s]:
            if w != v and w != s and int(w) in inside:
                return False
    return True


def max_cap_exact(
    q: int,
    n: int,
    t: Optional[CoeffTriple] = None,
    mode: str = "bnb",
    budget: Optional[int] = None,
) -> CapSearchResult:
    """Largest subset of F_q^n whose only solutions are constant triples.

    ``mode="bnb"`` branches on points in code order with the bound
    ``current size + remaining admissible points``; ``mode="exhaustive"``
    scans subsets from largest to smallest.
    """
    t = t if t is not None else CoeffTriple.default(q)
    if t.q != q:
        raise FieldMismatchError(f"triple over F_{t.q} used for q={q}")
    check_space(q, n)
    size = q**n
    cap = EXHAUSTIVE_CAP if mode == "exhaustive" else BNB_CAP
    if mode not in ("bnb", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    if size > cap:
        raise TooLargeError(f"q^n = {size} exceeds {cap} for mode {mode}")
    comp = _completions(q, n, t)
    if mode == "exhaustive":
        return _exhaustive(q, n, comp, budget)
    return _branch_and_bound(q, n, comp, budget)


def _exhaustive(q, n, comp, budget) -> CapSearchResult:
    size = q**n
    nodes = 0
    for k in range(size, -1, -1):
        for members in itertools.combinations(range(size), k):
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExhaustedError(f"exhaustive search exceeded {budget} subsets")
            if _is_cap_fast(members, comp):
                return CapSearchResult(k, PointSet(q, n, members), nodes, "exhaustive")
    raise AssertionError("the empty set is always a cap")


def _branch_and_bound(q, n, comp, budget) -> CapSearchResult:
    size = q**n
    forbid = np.zeros(size, dtype=np.int64)
    chosen: list = []
    best: list = []
    nodes = 0

    def branch(pos):
        nonlocal best, nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetExhaustedError(f"branch and bound exceeded {budget} nodes")
        if len(chosen) > len(best):
            best = list(chosen)
        free = np.flatnonzero(forbid[pos:] == 0)
        if len(chosen) + free.size <= len(best) or free.size == 0:
            return
        i = pos + int(free[0])
        blocked = [int(w) for s in chosen for w in comp[i, s] if w != i and w != s]
        np.add.at(forbid, blocked, 1)
        chosen.append(i)
        branch(i + 1)
        chosen.pop()
        np.subtract.at(forbid, blocked, 1)
        branch(i + 1)

    branch(0)
    return CapSearchResult(len(best), PointSet(q, n, best), nodes, "bnb")


def random_subset(q: int, n: int, density: float, seed: int) -> PointSet:
    """Each point of F_q^n kept independently with probability ``density``."""
    if not 0.0 <= density <= 1.0:
        raise ValueError(f"density={density} not in [0, 1]")
    make_field(q)
    check_space(q, n)
    if q**n > GENERATE_CAP:
        raise TooLargeError(f"q^n = {q**n} too large to sample point by point")
    rng = np.random.default_rng(seed)
    keep = rng.random(q**n) < density
    return PointSet(q, n, np.flatnonzero(keep))


@dataclass(frozen=True)
class PlantedResult:
    points: PointSet
    achieved: float
    removed: int


def light_fraction(points: PointSet, t: CoeffTriple, eps: float = 0.5) -> float:
    if len(points) == 0:
        return float("nan")
    return len(light_set(degree_profile(points, t), eps)) / len(points)


def planted_light_set(
    q: int,
    n: int,
    t: CoeffTriple,
    target: float,
    seed: int = 0,
    start: Optional[PointSet] = None,
    density: float = 0.5,
    eps: float = 0.5,
    max_removals: Optional[int] = None,
) -> PlantedResult:
    """Strip highest-degree points until the light fraction reaches ``target``.

    Starts from ``start`` or from ``random_subset(q, n, density, seed)``.
    Ties among highest degrees go to the smallest code.
    """
    points = start if start is not None else random_subset(q, n, density, seed)
    if (points.q, points.n) != (q, n):
        raise FieldMismatchError("start set is not a subset of F_q^n")
    limit = len(points) if max_removals is None else max_removals
    codes = list(int(c) for c in points.codes)
    removed = 0
    while True:
        current = PointSet(q, n, codes)
        if not codes:
            if target <= 0:
                return PlantedResult(current, float("nan"), removed)
            raise InfeasibleError("set emptied before reaching the target light fraction")
        profile = degree_profile(current, t)
        frac = len(light_set(profile, eps)) / len(codes)
        if frac >= target:
            return PlantedResult(current, frac, removed)
        if removed >= limit or len(codes) <= 1:
            raise InfeasibleError(f"light fraction {frac:.3f} after {removed} removals; target {target}")
        codes.pop(int(np.argmax(profile.degrees)))
        removed += 1
