"""Brute-force reference computations, deliberately naive and independent of the library."""

import itertools


def decode(code, q, n):
    return tuple((code // q**i) % q for i in range(n))


def solves(coeffs, pts, q):
    n = len(pts[0])
    return all(sum(a * p[i] for a, p in zip(coeffs, pts)) % q == 0 for i in range(n))


def brute_degrees(codes, q, n, abc):
    pts = [decode(c, q, n) for c in codes]
    return [sum(1 for y in pts for z in pts if solves(abc, (x, y, z), q)) for x in pts]


def brute_solution_triples(codes, q, n, abc):
    pts = [decode(c, q, n) for c in codes]
    return {
        (i, j, k)
        for (i, x), (j, y), (k, z) in itertools.product(enumerate(pts), repeat=3)
        if solves(abc, (x, y, z), q)
    }


def brute_monomial_count(q, n):
    return sum(1 for e in itertools.product(range(q), repeat=n) if 3 * sum(e) <= (q - 1) * n)


def brute_distinct_solvable(codes, q, n, coeffs):
    pts = [decode(c, q, n) for c in codes]
    return any(solves(coeffs, tup, q) for tup in itertools.permutations(pts, len(coeffs)))


def max_independent(vertices, edges):
    for k in range(len(vertices), -1, -1):
        for chosen in itertools.combinations(vertices, k):
            s = set(chosen)
            if not any(set(e) <= s for e in edges):
                return k
    return 0


def brute_degrees_np(codes, q, n, abc):
    """Same count as brute_degrees, enumerating all of A^3 at once with numpy."""
    import numpy as np

    codes = np.asarray(codes, dtype=np.int64)
    digits = np.stack([(codes // q**i) % q for i in range(n)], axis=1) if n else np.zeros((len(codes), 0), np.int64)
    a, b, c = abc
    s = (a * digits[:, None, None, :] + b * digits[None, :, None, :] + c * digits[None, None, :, :]) % q
    return list(np.all(s == 0, axis=3).sum(axis=(1, 2)))
