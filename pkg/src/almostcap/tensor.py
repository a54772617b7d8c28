"""Solution tensors, tensor independence and slice rank.

Tensor indices are 0-based positions in the sorted point set the tensor was
built from.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .ap import CoeffTriple
from .errors import FieldMismatchError, NotIndependentError, TooLargeError
from .field import PointSet, make_field, place_values

RANK_SEARCH_CAP = 2**20
ENUMERATION_CAP = 2**16
CLP_CAP = 2**15


@dataclass(frozen=True, eq=False)
class SparseTensor:
    """An order-``d`` tensor over F_q stored as ``{index tuple: nonzero coeff}``."""

    d: int
    N: int
    q: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for alpha, c in self.entries.items():
            alpha = tuple(int(i) for i in alpha)
            if len(alpha) != self.d or not all(0 <= i < self.N for i in alpha):
                raise ValueError(f"index {alpha} outside [0, {self.N})^{self.d}")
            c = int(c) % self.q
            if c:
                clean[alpha] = c
        object.__setattr__(self, "entries", clean)

    @classmethod
    def from_dense(cls, arr: np.ndarray, q: int) -> "SparseTensor":
        arr = np.asarray(arr) % q
        nz = np.argwhere(arr)
        return cls(arr.ndim, arr.shape[0], q, {tuple(a): arr[tuple(a)] for a in nz})

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.N,) * self.d, dtype=np.int64)
        for alpha, c in self.entries.items():
            out[alpha] = c
        return out

    def restrict(self, indices: Iterable[int]) -> "SparseTensor":
        """The sub-tensor on ``indices`` (renumbered in the given order)."""
        order = list(indices)
        where = {v: i for i, v in enumerate(order)}
        sub = {
            tuple(where[i] for i in alpha): c
            for alpha, c in self.entries.items()
            if all(i in where for i in alpha)
        }
        return SparseTensor(self.d, len(order), self.q, sub)

    def is_diagonal(self) -> bool:
        return all(len(set(alpha)) == 1 for alpha in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, SparseTensor)
            and (self.d, self.N, self.q) == (other.d, other.N, other.q)
            and self.entries == other.entries
        )

    def to_json(self) -> dict:
        rows = sorted([*alpha, c] for alpha, c in self.entries.items())
        return {"d": self.d, "N": self.N, "q": self.q, "entries": rows}


def ap_tensor(points: PointSet, t: CoeffTriple) -> SparseTensor:
    """Order-3 tensor with coefficient 1 exactly on solutions of ``ax+by+cz=0`` in ``A^3``."""
    if t.q != points.q:
        raise FieldMismatchError(f"triple over F_{t.q} used with a set over F_{points.q}")
    q, size = points.q, len(points)
    ctx = make_field(q)
    scale = ctx.neg(ctx.inv(t.c))
    entries = {}
    for i in range(size):
        lin = (t.a * points.digits[i][None, :] + t.b * points.digits) % q
        z = points.index_of(((scale * lin) % q) @ place_values(q, points.n))
        for j in np.flatnonzero(z >= 0):
            entries[(i, int(j), int(z[j]))] = 1
    return SparseTensor(3, size, q, entries)


def independent_set_check(tensor: SparseTensor, indices: Iterable[int]) -> bool:
    """Independence with nonzero diagonal.

    Every nonzero coefficient supported inside ``indices`` must be diagonal,
    and every chosen index must carry a nonzero diagonal coefficient.  The
    second condition excludes e.g. the zero tensor, for which the bare
    condition would accept every index set.
    """
    chosen = set(int(i) for i in indices)
    for alpha in tensor.entries:
        if len(set(alpha)) > 1 and all(i in chosen for i in alpha):
            return False
    return all((i,) * tensor.d in tensor.entries for i in chosen)


def diagonal_rank_certificate(tensor: SparseTensor, indices: Iterable[int]) -> int:
    """Lower bound ``|I|`` on the slice rank from an independent index set.

    Restricted to ``I`` the tensor is diagonal with nonzero diagonal, which has
    slice rank exactly ``|I|``, and restriction cannot raise slice rank.
    """
    chosen = sorted(set(int(i) for i in indices))
    if not independent_set_check(tensor, chosen):
        raise NotIndependentError(f"index set {chosen} is not independent")
    return len(chosen)


# -- exact slice rank --------------------------------------------------------


def _rank_mod(mat: np.ndarray, q: int) -> int:
    m = np.array(mat, dtype=np.int64) % q
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        piv = np.flatnonzero(m[rank:, col])
        if piv.size == 0:
            continue
        p = rank + piv[0]
        m[[rank, p]] = m[[p, rank]]
        m[rank] = (m[rank] * pow(int(m[rank, col]), q - 2, q)) % q
        others = np.flatnonzero(m[:, col])
        others = others[others != rank]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, col], m[rank])) % q
        rank += 1
    return rank


@functools.lru_cache(maxsize=None)
def subspaces(q: int, dim: int) -> tuple[np.ndarray, ...]:
    """Every linear subspace of F_q^dim, as a reduced row-echelon basis matrix."""
    found = []
    for r in range(dim + 1):
        for pivots in itertools.combinations(range(dim), r):
            free = [
                (row, col)
                for row, p in enumerate(pivots)
                for col in range(p + 1, dim)
                if col not in pivots
            ]
            for values in itertools.product(range(q), repeat=len(free)):
                basis = np.zeros((r, dim), dtype=np.int64)
                for row, p in enumerate(pivots):
                    basis[row, p] = 1
                for (row, col), v in zip(free, values):
                    basis[row, col] = v
                basis.setflags(write=False)
                found.append(basis)
    return tuple(found)


def slice_rank_exact_small(tensor: SparseTensor) -> int:
    """Exact slice rank of an order-3 tensor over F_q.

    ``T`` is a sum of slices whose one-variable factors span ``W1, W2, W3``
    iff ``T`` vanishes on ``W1^0 x W2^0 x W3^0`` (annihilators).  So the
    slice rank is the minimum over subspaces ``U1, U2`` of
    ``(N - dim U1) + (N - dim U2) + rank(T(U1, U2, .))``, the last term being
    the codimension of the largest admissible ``U3``.
    """
    if tensor.d != 3:
        raise ValueError("exact slice rank is implemented for order 3 only")
    q, N = tensor.q, tensor.N
    if q ** (N * N) > RANK_SEARCH_CAP:
        raise TooLargeError(f"q^(N^2) = {q}^{N * N} exceeds 2^20 (N={N}, q={q})")
    if not tensor.entries:
        return 0
    dense = tensor.to_dense()
    spaces = subspaces(q, N)
    best = N
    for u1 in spaces:
        part = np.einsum("ia,abc->ibc", u1, dense) % q
        for u2 in spaces:
            if 2 * N - len(u1) - len(u2) >= best:
                continue
            m = np.einsum("jb,ibc->ijc", u2, part) % q
            k = 2 * N - len(u1) - len(u2) + _rank_mod(m.reshape(-1, N), q)
            best = min(best, k)
    return best


def _rank_one_family(q: int, N: int) -> np.ndarray:
    """Flattened digit vectors of every slice-rank-one order-3 tensor (deduplicated)."""
    vecs = np.array(list(itertools.product(range(q), repeat=N))[1:], dtype=np.int64)
    mats = np.array(list(itertools.product(range(q), repeat=N * N))[1:], dtype=np.int64)
    mats = mats.reshape(-1, N, N)
    out = set()
    for axis in range(3):
        terms = np.einsum("fa,gbc->fgabc", vecs, mats) % q
        terms = np.moveaxis(terms, 2, 2 + axis).reshape(-1, N**3)
        out.update(map(tuple, terms))
    return np.array(sorted(out), dtype=np.int64)


@functools.lru_cache(maxsize=None)
def _rank_table(q: int, N: int) -> np.ndarray:
    """Slice rank of every tensor in F_q^(N x N x N), by breadth-first sums of rank-one terms."""
    L = N**3
    powers = q ** np.arange(L, dtype=np.int64)
    size = q**L
    family = _rank_one_family(q, N)
    ranks = np.full(size, -1, dtype=np.int64)
    ranks[0] = 0
    frontier = np.zeros((1, L), dtype=np.int64)
    level = 0
    while frontier.size and (ranks < 0).any():
        level += 1
        reached = []
        step = max(1, (1 << 22) // (len(family) * L))
        for s in range(0, len(frontier), step):
            block = (frontier[s : s + step, None, :] + family[None, :, :]) % q
            codes = np.unique((block @ powers).ravel())
            reached.append(codes[ranks[codes] < 0])
        new = np.unique(np.concatenate(reached)) if reached else np.zeros(0, dtype=np.int64)
        ranks[new] = level
        frontier = (new[:, None] // powers[None, :]) % q
    ranks.setflags(write=False)
    return ranks


def slice_rank_enumerate(tensor: SparseTensor) -> int:
    """Slice rank by exhausting sums of rank-one tensors (for tiny ``q^(N^3)``).

    Independent of :func:`slice_rank_exact_small`; used to cross-check it.
    """
    if tensor.d != 3:
        raise ValueError("enumeration is implemented for order 3 only")
    q, N = tensor.q, tensor.N
    if q ** (N**3) > ENUMERATION_CAP:
        raise TooLargeError(f"q^(N^3) = {q}^{N**3} exceeds 2^16")
    if N == 0:
        return 0
    code = int((tensor.to_dense().ravel() * q ** np.arange(N**3, dtype=np.int64)).sum())
    return int(_rank_table(q, N)[code])


# -- Croot-Lev-Pach decomposition -------------------------------------------


@dataclass(frozen=True)
class Slice:
    """One rank-one term ``f(x_axis) * g(other two indices, in increasing axis order)``."""

    axis: int
    f: dict
    g: dict
    label: tuple = ()


@dataclass(frozen=True)
class SliceDecomposition:
    q: int
    N: int
    slices: tuple

    def __len__(self):
        return len(self.slices)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.N,) * 3, dtype=np.int64)
        for s in self.slices:
            f = np.zeros(self.N, dtype=np.int64)
            for i, v in s.f.items():
                f[i] = v
            g = np.zeros((self.N, self.N), dtype=np.int64)
            for (j, k), v in s.g.items():
                g[j, k] = v
            term = np.einsum("a,bc->abc", f, g)
            out += np.moveaxis(term, 0, s.axis)
        return out % self.q

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "N": self.N,
            "count": len(self.slices),
            "slices": [
                {
                    "axis": s.axis,
                    "monomial": list(s.label),
                    "f": sorted([i, v] for i, v in s.f.items()),
                    "g": sorted([j, k, v] for (j, k), v in s.g.items()),
                }
                for s in self.slices
            ],
        }


def _coordinate_polynomial(t: CoeffTriple) -> dict:
    """``1 - (a u + b v + c w)^(q-1)`` as ``{(i, j, k): coeff}``."""
    q = t.q
    m = q - 1
    poly = {(0, 0, 0): 1}
    for i in range(m + 1):
        for j in range(m + 1 - i):
            k = m - i - j
            mult = math.factorial(m) // (math.factorial(i) * math.factorial(j) * math.factorial(k))
            coeff = mult * pow(t.a, i, q) * pow(t.b, j, q) * pow(t.c, k, q)
            poly[(i, j, k)] = (poly.get((i, j, k), 0) - coeff) % q
    return {e: c for e, c in poly.items() if c}


def clp_polynomial(t: CoeffTriple, n: int) -> dict:
    """Expansion of the indicator of ``ax+by+cz = 0`` on F_q^n.

    Keys are tuples of ``n`` per-coordinate exponent triples; exponents never
    exceed ``q - 1`` so no reduction by ``u^q = u`` is needed.
    """
    q = t.q
    single = _coordinate_polynomial(t)
    poly = {(): 1}
    for _ in range(n):
        nxt = {}
        for key, c in poly.items():
            for e, c2 in single.items():
                k2 = key + (e,)
                nxt[k2] = (nxt.get(k2, 0) + c * c2) % q
        poly = {k: c for k, c in nxt.items() if c}
    return poly


def _monomial_values(digits: np.ndarray, exps: tuple, q: int) -> np.ndarray:
    powers = digits[:, :, None] ** np.arange(q, dtype=np.int64)[None, None, :] % q
    vals = np.ones(len(digits), dtype=np.int64)
    for i, e in enumerate(exps):
        vals = vals * powers[:, i, e] % q
    return vals


def clp_decomposition(q: int, n: int, t: CoeffTriple) -> SliceDecomposition:
    """Explicit slice decomposition of the solution tensor of F_q^n.

    Every monomial of the expanded indicator has total degree at most
    ``(q-1) n``, so one of its x-, y-, z-blocks has degree at most
    ``(q-1) n / 3``; monomials are grouped by the first such block and its
    block monomial, one slice per group.
    """
    if t.q != q:
        raise FieldMismatchError(f"triple over F_{t.q} used for q={q}")
    if q ** (3 * n) > CLP_CAP:
        raise TooLargeError(f"q^(3n) = {q}^{3 * n} exceeds 2^15")
    space = PointSet.full_space(q, n)
    digits = np.asarray(space.digits)
    N = len(space)
    groups: dict = {}
    for key, c in clp_polynomial(t, n).items():
        blocks = [tuple(e[b] for e in key) for b in range(3)]
        axis = next(b for b in range(3) if 3 * sum(blocks[b]) <= (q - 1) * n)
        rest = tuple(blocks[b] for b in range(3) if b != axis)
        bucket = groups.setdefault((axis, blocks[axis]), {})
        bucket[rest] = (bucket.get(rest, 0) + c) % q

    cache: dict = {}

    def values(exps):
        if exps not in cache:
            cache[exps] = _monomial_values(digits, exps, q)
        return cache[exps]

    slices = []
    for (axis, mono), rest in sorted(groups.items()):
        f = values(mono)
        g = np.zeros((N, N), dtype=np.int64)
        for (m1, m2), c in rest.items():
            g = (g + c * np.outer(values(m1), values(m2))) % q
        slices.append(
            Slice(
                axis,
                {int(i): int(f[i]) for i in np.flatnonzero(f)},
                {(int(j), int(k)): int(g[j, k]) for j, k in np.argwhere(g)},
                mono,
            )
        )
    return SliceDecomposition(q, N, tuple(slices))
