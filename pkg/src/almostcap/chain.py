"""Distinct solutions of ``a_1 x_1 + ... + a_d x_d = 0`` (d >= 4) inside a point set.

The search follows the chain construction: with prefix sums
``b_k = a_1 + ... + a_k`` (all nonzero for 2 <= k <= d-2 after reordering),
it tracks auxiliary points ``t_k`` with ``b_k t_k = a_1 x_1 + ... + a_k x_k``:

* seed ``t_2 = (a_1 x_1 + a_2 x_2) / b_2``,
* extend ``t_{k+1} = (b_k t_k + a_{k+1} x_{k+1}) / b_{k+1}``,
* close with ``b_{d-2} t_{d-2} + a_{d-1} x_{d-1} + a_d x_d = 0``.

The first phase insists on ``t_k`` in ``A``.  Solutions whose auxiliary
points leave ``A`` are then picked up by a second phase that lets ``t_k``
range over F_q^n, which makes the search complete.
"""

from __future__ import annotations

import itertools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .ap import CoeffTriple, degree_profile
from .errors import (
    InvalidCoefficientsError,
    NoValidRearrangementError,
    TooLargeError,
    TooSmallError,
)
from .field import PointSet, decode, make_field, place_values

EXHAUSTIVE_MAX_D = 8
RANDOM_RESTARTS = 20000
BRUTE_FORCE_CAP = 10**8


@dataclass(frozen=True)
class CoeffVector:
    coeffs: tuple
    q: int

    def __post_init__(self):
        make_field(self.q)
        cs = tuple(int(c) % self.q for c in self.coeffs)
        if len(cs) < 4:
            raise InvalidCoefficientsError(f"need d >= 4 coefficients, got {len(cs)}")
        if 0 in cs:
            raise InvalidCoefficientsError(f"coefficients {tuple(self.coeffs)} must be nonzero mod {self.q}")
        if sum(cs) % self.q:
            raise InvalidCoefficientsError(f"coefficients {tuple(self.coeffs)} do not sum to 0 mod {self.q}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def d(self) -> int:
        return len(self.coeffs)

    def prefix_sums(self, perm: Optional[Sequence[int]] = None) -> dict:
        """``{k: b_k}`` for ``k = 2 .. d-2`` under the ordering ``perm``."""
        cs = self.coeffs if perm is None else [self.coeffs[i] for i in perm]
        return {k: sum(cs[:k]) % self.q for k in range(2, self.d - 1)}


def _valid(cs: Sequence[int], q: int) -> bool:
    total = 0
    for k, c in enumerate(cs[:-2], start=1):
        total = (total + c) % q
        if k >= 2 and total == 0:
            return False
    return True


def prefix_rearrange(coeffs: CoeffVector, seed: int = 0) -> tuple:
    """A permutation of ``0..d-1`` making every prefix sum ``b_2 .. b_{d-2}`` nonzero.

    Permutations are tried in lexicographic order (so the identity wins when
    it works) for ``d <= 8``; longer vectors use seeded random restarts.
    """
    q, d = coeffs.q, coeffs.d
    cs = coeffs.coeffs
    if d <= EXHAUSTIVE_MAX_D:
        for perm in itertools.permutations(range(d)):
            if _valid([cs[i] for i in perm], q):
                return perm
    else:
        if _valid(cs, q):
            return tuple(range(d))
        rng = np.random.default_rng(seed)
        for _ in range(RANDOM_RESTARTS):
            perm = tuple(int(i) for i in rng.permutation(d))
            if _valid([cs[i] for i in perm], q):
                return perm
    raise NoValidRearrangementError(f"no ordering of {cs} over F_{q} has nonzero prefix sums")


@dataclass
class ChainResult:
    found: bool
    solution: Optional[tuple]
    nodes: int
    permutation: tuple
    status: str
    phase: Optional[str] = None

    def to_json(self) -> dict:
        return {
            "found": self.found,
            "solution": list(self.solution) if self.solution else None,
            "nodes": self.nodes,
            "permutation": list(self.permutation),
            "status": self.status,
            "phase": self.phase,
        }


class _Budget:
    def __init__(self, limit):
        self.limit = limit
        self.used = 0
        self._lock = threading.Lock()

    def take(self) -> bool:
        with self._lock:
            if self.limit is not None and self.used >= self.limit:
                return False
            self.used += 1
            return True


class _Stop(Exception):
    pass


class _Search:
    """Backtracking over one coefficient ordering."""

    def __init__(self, points: PointSet, cs: Sequence[int], budget: _Budget, strict: bool, check: bool):
        self.points = points
        self.q = points.q
        self.cs = list(cs)
        self.d = len(cs)
        self.budget = budget
        self.strict = strict
        self.check = check
        ctx = make_field(self.q)
        self.inv = ctx.inv
        self.b = {k: sum(self.cs[:k]) % self.q for k in range(2, self.d - 1)}
        self.digits = np.asarray(points.digits)
        self.powers = place_values(self.q, points.n)
        self.codes = [int(c) for c in points.codes]
        self.weights = self._level_weights() if strict else None
        self.stop = threading.Event()

    def _level_weights(self) -> dict:
        # weight of t at level k: solution pairs available for the next step
        out = {}
        q = self.q
        for k in range(2, self.d - 1):
            if k < self.d - 2:
                t = CoeffTriple(self.b[k], self.cs[k], -self.b[k + 1], q)
            else:
                t = CoeffTriple(self.b[k], self.cs[k], self.cs[k + 1], q)
            out[k] = degree_profile(self.points, t).degrees
        return out

    def seeds(self) -> list:
        q, a1, a2, b2 = self.q, self.cs[0], self.cs[1], self.b[2]
        scale = self.inv(b2)
        out = []
        size = len(self.codes)
        for i in range(size):
            t = scale * (a1 * self.digits[i] + a2 * self.digits) % q
            tcodes = t @ self.powers
            tidx = self.points.index_of(tcodes)
            for j in range(size):
                if j == i:
                    continue
                if self.strict and tidx[j] < 0:
                    continue
                out.append((i, j, t[j], int(tidx[j])))
        if self.strict:
            w = self.weights[2]
            out.sort(key=lambda s: (-int(w[s[3]]), self.codes[s[0]], self.codes[s[1]]))
        return out

    def run_seed(self, seed) -> Optional[list]:
        i, j, tvec, tidx = seed
        if self.stop.is_set():
            raise _Stop
        if not self.budget.take():
            raise _Stop
        return self._extend([i, j], 2, tvec, tidx)

    def _extend(self, xs: list, k: int, tvec: np.ndarray, tidx: int) -> Optional[list]:
        q = self.q
        if self.check:
            lhs = sum(self.cs[m] * self.digits[xs[m]] for m in range(k)) % q
            assert np.array_equal(lhs, self.b[k] * tvec % q), "chain identity violated"
        if k == self.d - 2:
            return self._close(xs, tvec)
        scale = self.inv(self.b[k + 1])
        nxt = scale * (self.b[k] * tvec + self.cs[k] * self.digits) % q
        nidx = self.points.index_of(nxt @ self.powers)
        used = set(xs)
        cands = [x for x in range(len(self.codes)) if x not in used and (nidx[x] >= 0 or not self.strict)]
        if self.strict:
            w = self.weights[k + 1]
            cands.sort(key=lambda x: (-int(w[nidx[x]]), self.codes[x]))
        for x in cands:
            if self.stop.is_set() or not self.budget.take():
                raise _Stop
            found = self._extend(xs + [x], k + 1, nxt[x], int(nidx[x]))
            if found is not None:
                return found
        return None

    def _close(self, xs: list, tvec: np.ndarray) -> Optional[list]:
        q, d = self.q, self.d
        ad1, ad = self.cs[d - 2], self.cs[d - 1]
        scale = (-self.inv(ad)) % q
        last = scale * (self.b[d - 2] * tvec + ad1 * self.digits) % q
        lidx = self.points.index_of(last @ self.powers)
        used = set(xs)
        for x in range(len(self.codes)):
            y = int(lidx[x])
            if y < 0 or x in used or y in used or x == y:
                continue
            if not self.budget.take():
                raise _Stop
            return xs + [x, y]
        return None


def find_distinct_solution(
    points: PointSet,
    coeffs: CoeffVector,
    budget: Optional[int] = None,
    deterministic: bool = True,
    threads: int = 1,
    check: bool = False,
) -> ChainResult:
    """Find pairwise-distinct ``x_1..x_d`` in the set solving the equation.

    Returns a :class:`ChainResult`; ``status`` is ``"found"``,
    ``"search_exhausted"`` or ``"budget_exhausted"``.  The solution is
    reported as point codes in the caller's coefficient order.  With
    ``deterministic=False`` and ``threads > 1`` seed pairs are shared among
    workers and the first hit wins.
    """
    if coeffs.q != points.q:
        raise InvalidCoefficientsError(f"coefficients over F_{coeffs.q} used with a set over F_{points.q}")
    if len(points) < coeffs.d:
        raise TooSmallError(f"|A| = {len(points)} < d = {coeffs.d}")
    perm = prefix_rearrange(coeffs)
    cs = [coeffs.coeffs[i] for i in perm]
    tally = _Budget(budget)
    exhausted = False

    for phase, strict in (("chain", True), ("relaxed", False)):
        search = _Search(points, cs, tally, strict, check)
        try:
            hit = _run(search, deterministic, threads)
        except _Stop:
            exhausted = True
            hit = None
        if hit is not None:
            solution = [0] * coeffs.d
            for pos, idx in zip(perm, hit):
                solution[pos] = int(points.codes[idx])
            return ChainResult(True, tuple(solution), tally.used, perm, "found", phase)
        if exhausted:
            break
    status = "budget_exhausted" if exhausted else "search_exhausted"
    return ChainResult(False, None, tally.used, perm, status)


def _run(search: _Search, deterministic: bool, threads: int):
    seeds = search.seeds()
    if deterministic or threads <= 1:
        for s in seeds:
            hit = search.run_seed(s)
            if hit is not None:
                return hit
        return None

    def worker(chunk):
        for s in chunk:
            try:
                hit = search.run_seed(s)
            except _Stop:
                return "stop"
            if hit is not None:
                search.stop.set()
                return hit
        return None

    chunks = [seeds[w::threads] for w in range(threads)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(worker, chunks))
    hits = [r for r in results if isinstance(r, list)]
    if hits:
        return hits[0]
    if "stop" in results:
        raise _Stop
    return None


def brute_force_solutions(points: PointSet, coeffs: CoeffVector, limit: Optional[int] = None) -> list:
    """All tuples of pairwise-distinct points solving the equation, as code tuples.

    Enumerates distinct ``(x_1..x_{d-1})`` and solves for ``x_d``.
    """
    size, d, q = len(points), coeffs.d, points.q
    if limit is None and size**d > BRUTE_FORCE_CAP:
        raise TooLargeError(f"|A|^d = {size}^{d} exceeds 10^8; pass a limit")
    digits = np.asarray(points.digits)
    powers = place_values(q, points.n)
    scale = (-make_field(q).inv(coeffs.coeffs[-1])) % q
    out = []
    for head in itertools.permutations(range(size), d - 1):
        acc = sum(coeffs.coeffs[m] * digits[head[m]] for m in range(d - 1))
        last = int((scale * acc % q) @ powers)
        idx = int(points.index_of(np.array([last]))[0])
        if idx < 0 or idx in head:
            continue
        out.append(tuple(int(points.codes[i]) for i in head) + (last,))
        if limit is not None and len(out) >= limit:
            break
    return out


def verify_solution(q: int, n: int, coeffs: Sequence[int], codes: Sequence[int]) -> bool:
    """Check the equation and pairwise distinctness for a solution given as codes."""
    if len(set(codes)) != len(codes):
        return False
    acc = np.zeros(n, dtype=np.int64)
    for a, c in zip(coeffs, codes):
        acc += a * np.asarray(decode(c, q, n), dtype=np.int64)
    return not np.any(acc % q)
