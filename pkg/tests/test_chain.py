import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostcap.chain import (
    CoeffVector,
    brute_force_solutions,
    find_distinct_solution,
    prefix_rearrange,
    verify_solution,
)
from almostcap.errors import (
    InvalidCoefficientsError,
    NoValidRearrangementError,
    TooLargeError,
    TooSmallError,
)
from almostcap.field import PointSet

from oracles import brute_distinct_solvable


def test_coeff_vector_validation():
    assert CoeffVector((1, 1, 2, 2), 3).coeffs == (1, 1, 2, 2)
    assert CoeffVector((1, 1, 1, -3), 7).coeffs == (1, 1, 1, 4)
    for bad, q in [((1, 1, 1), 3), ((1, 1, 1, 1), 3), ((1, 2, 0, 0), 3)]:
        with pytest.raises(InvalidCoefficientsError):
            CoeffVector(bad, q)


def test_prefix_rearrange_examples():
    assert prefix_rearrange(CoeffVector((1, 1, 1, 2), 5)) == (0, 1, 2, 3)
    with pytest.raises(NoValidRearrangementError):
        prefix_rearrange(CoeffVector((1, 1, 1, 1), 2))
    cv = CoeffVector((1, 1, 2, 1, 2, 2), 3)
    perm = prefix_rearrange(cv)
    assert cv.prefix_sums(perm) == {2: 2, 3: 1, 4: 2}


def test_prefix_rearrange_nontrivial_permutation():
    cv = CoeffVector((1, 2, 1, 2), 3)
    assert cv.prefix_sums() == {2: 0}
    perm = prefix_rearrange(cv)
    assert perm != (0, 1, 2, 3)
    assert all(b != 0 for b in cv.prefix_sums(perm).values())


def test_prefix_rearrange_long_vectors_use_restarts():
    cs = (1, 2) * 5  # d = 10 over F_3
    cv = CoeffVector(cs, 3)
    perm = prefix_rearrange(cv, seed=7)
    assert sorted(perm) == list(range(10))
    assert all(b != 0 for b in cv.prefix_sums(perm).values())


def test_find_solution_example():
    full = PointSet.full_space(3, 2)
    cv = CoeffVector((1, 1, 2, 2), 3)
    res = find_distinct_solution(full, cv, check=True)
    assert res.found and res.status == "found"
    assert verify_solution(3, 2, cv.coeffs, res.solution)
    assert res.solution in brute_force_solutions(full, cv)


def test_too_small():
    with pytest.raises(TooSmallError):
        find_distinct_solution(PointSet(5, 1, [0, 1, 2]), CoeffVector((1, 1, 1, 2), 5))


@pytest.mark.parametrize(
    "q,n,codes,coeffs",
    [
        (5, 2, [10, 14, 18, 21], (2, 2, 4, 2)),
        (5, 1, [0, 1, 2, 3, 4], (2, 2, 3, 2, 1)),
        (5, 3, [28, 32, 47, 52, 106, 120], (3, 2, 2, 3)),
    ],
)
def test_search_exhausted_matches_brute_force(q, n, codes, coeffs):
    pts, cv = PointSet(q, n, codes), CoeffVector(coeffs, q)
    assert not brute_distinct_solvable(codes, q, n, coeffs)
    assert brute_force_solutions(pts, cv) == []
    res = find_distinct_solution(pts, cv)
    assert not res.found and res.status == "search_exhausted"


def test_budget_exhausted():
    pts, cv = PointSet(5, 1, [0, 1, 2, 3, 4]), CoeffVector((2, 2, 3, 2, 1), 5)
    res = find_distinct_solution(pts, cv, budget=3)
    assert not res.found and res.status == "budget_exhausted" and res.nodes == 3


def test_brute_force_examples():
    assert brute_force_solutions(PointSet(5, 1, [0]), CoeffVector((1, 1, 1, 2), 5)) == []
    # symmetric equation on a set closed under negation: solutions closed under reordering
    pts = PointSet(5, 1, [0, 1, 4, 2, 3])
    sols = set(brute_force_solutions(pts, CoeffVector((1, 1, 1, 1, 1), 5)))
    assert sols
    for s in sols:
        assert set(itertools.permutations(s)) <= sols
    with pytest.raises(TooLargeError):
        brute_force_solutions(PointSet.full_space(3, 4), CoeffVector((1, 1, 1, 1, 2), 3))
    assert len(brute_force_solutions(PointSet.full_space(3, 4), CoeffVector((1, 1, 1, 1, 2), 3), limit=5)) == 5


def test_permutation_transparency():
    pts = PointSet.full_space(3, 2)
    cv = CoeffVector((1, 2, 1, 2), 3)
    res = find_distinct_solution(pts, cv, check=True)
    assert res.found and res.permutation != (0, 1, 2, 3)
    assert verify_solution(3, 2, cv.coeffs, res.solution)


def test_threaded_search_returns_valid_solution():
    pts = PointSet.full_space(5, 2)
    cv = CoeffVector((1, 2, 3, 4, 4, 1), 5)
    res = find_distinct_solution(pts, cv, deterministic=False, threads=4)
    assert res.found and verify_solution(5, 2, cv.coeffs, res.solution)
    a = find_distinct_solution(pts, cv)
    b = find_distinct_solution(pts, cv)
    assert a == b


def random_instance(rng):
    q = int(rng.choice([3, 5]))
    d = int(rng.choice([4, 5]))
    while True:
        n = int(rng.integers(1, 4))
        if q**n >= d:
            break
    size = int(rng.integers(d, min(12, q**n) + 1))
    codes = sorted(int(c) for c in rng.choice(q**n, size=size, replace=False))
    while True:
        cs = [int(c) for c in rng.integers(1, q, size=d - 1)]
        last = (-sum(cs)) % q
        if last:
            return q, n, codes, tuple(cs) + (last,)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_soundness_and_completeness(seed):
    q, n, codes, coeffs = random_instance(np.random.default_rng(seed))
    pts, cv = PointSet(q, n, codes), CoeffVector(coeffs, q)
    try:
        res = find_distinct_solution(pts, cv, check=True)
    except NoValidRearrangementError:
        return
    solvable = brute_distinct_solvable(codes, q, n, coeffs)
    assert res.found == solvable
    assert res.found == bool(brute_force_solutions(pts, cv, limit=1))
    if res.found:
        assert verify_solution(q, n, coeffs, res.solution)
        assert all(c in pts for c in res.solution)
    else:
        assert res.status == "search_exhausted"


def test_both_phases_occur():
    rng = np.random.default_rng(1)
    phases = set()
    for _ in range(200):
        q, n, codes, coeffs = random_instance(rng)
        try:
            res = find_distinct_solution(PointSet(q, n, codes), CoeffVector(coeffs, q))
        except NoValidRearrangementError:
            continue
        phases.add(res.phase)
    assert {"chain", "relaxed"} <= phases
