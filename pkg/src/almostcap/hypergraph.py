"""Support hypergraphs of tensors and randomized Caro-Wei greedy independent sets."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .tensor import SparseTensor


@dataclass(frozen=True)
class MixedHypergraph:
    """Vertices, 2- and 3-element edges, and first-coordinate degrees.

    ``degrees[v]`` counts the nonzero off-diagonal coefficient tuples whose
    first index is ``v`` (ordered tuples, so one 3-edge from an AP tensor
    contributes 2 to each of its vertices).
    """

    vertices: tuple
    edges: tuple
    degrees: dict

    def to_json(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "degrees": [[v, self.degrees[v]] for v in self.vertices],
        }


def support_hypergraph(tensor: SparseTensor, subset: Iterable[int] | None = None) -> MixedHypergraph:
    chosen = sorted(set(range(tensor.N) if subset is None else (int(i) for i in subset)))
    inside = set(chosen)
    degrees = {v: 0 for v in chosen}
    edges = set()
    for alpha in tensor.entries:
        distinct = set(alpha)
        if len(distinct) == 1 or not distinct <= inside:
            continue
        edges.add(tuple(sorted(distinct)))
        degrees[alpha[0]] += 1
    return MixedHypergraph(tuple(chosen), tuple(sorted(edges)), degrees)


def is_independent(h: MixedHypergraph, chosen: Iterable[int]) -> bool:
    s = set(chosen)
    return not any(all(v in s for v in e) for e in h.edges)


def _greedy_pass(h: MixedHypergraph, order) -> frozenset:
    incident: dict = {v: [] for v in h.vertices}
    for e in h.edges:
        for v in e:
            incident[v].append(e)
    chosen: set = set()
    for v in order:
        v = int(v)
        if all(any(u != v and u not in chosen for u in e) for e in incident[v]):
            chosen.add(v)
    return frozenset(chosen)


def caro_wei_greedy(h: MixedHypergraph, trials: int = 1, seed: int = 0, threads: int = 1) -> frozenset:
    """Best of ``trials`` random-order greedy passes.

    A pass scans a uniformly random vertex permutation and keeps a vertex
    unless it would complete an edge.  Trial ``i`` draws its permutation
    from the ``i``-th child of ``SeedSequence(seed)``, and ties go to the
    earliest trial, so the result does not depend on ``threads``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    children = np.random.SeedSequence(seed).spawn(trials)
    verts = np.array(h.vertices, dtype=np.int64)

    def run(child):
        rng = np.random.Generator(np.random.PCG64(child))
        return _greedy_pass(h, rng.permutation(verts))

    if threads > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, children))
    else:
        results = [run(c) for c in children]
    best = results[0]
    for r in results[1:]:
        if len(r) > len(best):
            best = r
    return best


def caro_wei_bound(h: MixedHypergraph, exponent: float = 1 / 3) -> float:
    """``sum over vertices of (d_x + 1) ** -exponent``."""
    d = np.array([h.degrees[v] for v in h.vertices], dtype=float)
    return float(np.sum((d + 1.0) ** -exponent))
