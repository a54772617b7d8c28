"""Solution-pair degree profiles for ``ax + by + cz = 0`` on a point set.

For ``x`` in ``A`` the degree ``d_x`` is the number of ordered pairs
``(y, z)`` in ``A^2`` with ``ax + by + cz = 0``, degenerate pairs included.
Since ``z`` is determined by ``(x, y)``, a profile costs ``|A|^2`` membership
tests.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import FieldMismatchError, InvalidTripleError
from .field import PointSet, make_field, place_values

# rows of the (x, y) grid handled per vectorised block
_BLOCK_CELLS = 1 << 20


@dataclass(frozen=True)
class CoeffTriple:
    a: int
    b: int
    c: int
    q: int

    def __post_init__(self):
        make_field(self.q)
        a, b, c = (v % self.q for v in (self.a, self.b, self.c))
        if 0 in (a, b, c):
            raise InvalidTripleError(f"coefficients {self.as_tuple()} must be nonzero mod {self.q}")
        if (a + b + c) % self.q:
            raise InvalidTripleError(f"coefficients {self.as_tuple()} do not sum to 0 mod {self.q}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @classmethod
    def default(cls, q: int) -> "CoeffTriple":
        """The progression equation ``x + y - 2z = 0``."""
        return cls(1, 1, q - 2, q)


def _third_point_codes(points: PointSet, t: CoeffTriple, rows: np.ndarray) -> np.ndarray:
    """Codes of ``z = -(a x + b y) / c`` for x in ``rows`` and every y in the set."""
    q = points.q
    ctx = make_field(q)
    scale = ctx.neg(ctx.inv(t.c))
    lin = t.a * points.digits[rows][:, None, :] + t.b * points.digits[None, :, :]
    z = (scale * (lin % q)) % q
    return z @ place_values(q, points.n)


@dataclass(frozen=True, eq=False)
class DegreeProfile:
    points: PointSet
    triple: CoeffTriple
    degrees: np.ndarray

    @property
    def total(self) -> int:
        """Number of solution triples in ``A^3``."""
        return int(self.degrees.sum())

    def degree_of(self, code: int) -> int:
        i = int(self.points.index_of(np.array([code]))[0])
        if i < 0:
            raise KeyError(code)
        return int(self.degrees[i])

    def to_json(self) -> dict:
        return {
            "q": self.points.q,
            "n": self.points.n,
            "coeffs": list(self.triple.as_tuple()),
            "degrees": [[int(c), int(d)] for c, d in zip(self.points.codes, self.degrees)],
        }


def degree_profile(points: PointSet, t: CoeffTriple, threads: int = 1) -> DegreeProfile:
    """Count, for every x in the set, the ordered pairs (y, z) solving the equation.

    The work is split into blocks of x values; the result does not depend on
    ``threads``.
    """
    if t.q != points.q:
        raise FieldMismatchError(f"triple over F_{t.q} used with a set over F_{points.q}")
    size = len(points)
    if size == 0:
        return DegreeProfile(points, t, np.zeros(0, dtype=np.int64))
    per_block = max(1, _BLOCK_CELLS // max(1, size * max(points.n, 1)))
    blocks = [np.arange(s, min(size, s + per_block)) for s in range(0, size, per_block)]

    def count(rows):
        z = _third_point_codes(points, t, rows)
        return (points.index_of(z) >= 0).sum(axis=1)

    if threads > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(count, blocks))
    else:
        parts = [count(rows) for rows in blocks]
    degrees = np.concatenate(parts).astype(np.int64)
    degrees.setflags(write=False)
    return DegreeProfile(points, t, degrees)


def pair_threshold(size: int, eps: float) -> int:
    """Smallest integer ``k`` with ``k >= size**eps``.

    Near-integer powers are re-evaluated with 50-digit arithmetic so that
    e.g. ``4**0.5`` is not pushed to 3 by rounding.
    """
    if size <= 0:
        return 0
    value = float(size) ** eps
    if abs(value - round(value)) < 1e-9:
        with mpmath.workdps(50):
            exact = mpmath.power(mpmath.mpf(size), mpmath.mpf(eps))
            return int(mpmath.ceil(exact - mpmath.mpf(10) ** -40))
    return math.ceil(value)


def _select(profile: DegreeProfile, mask: np.ndarray) -> PointSet:
    pts = profile.points
    return PointSet(pts.q, pts.n, pts.codes[mask])


def heavy_set(profile: DegreeProfile, eps: float) -> PointSet:
    """Points with at least ``|A|**eps`` solution pairs."""
    k = pair_threshold(len(profile.points), eps)
    return _select(profile, profile.degrees >= k)


def light_set(profile: DegreeProfile, eps: float) -> PointSet:
    """Points with fewer than ``|A|**eps`` solution pairs (complement of the heavy set)."""
    k = pair_threshold(len(profile.points), eps)
    return _select(profile, profile.degrees < k)


@dataclass(frozen=True)
class Classification:
    is_cap: bool
    witness: PointSet
    threshold: int

    def to_json(self) -> dict:
        return {
            "is_cap": self.is_cap,
            "threshold": self.threshold,
            "light_count": len(self.witness),
            "witness": [int(c) for c in self.witness.codes],
        }


def classify_eps_delta(profile: DegreeProfile, eps: float, delta: float) -> Classification:
    """Decide whether the set is an (eps, delta)-cap set.

    The light set is the largest admissible sub-collection, so the set
    qualifies iff the light set has more than ``delta * |A|`` points.
    """
    if not 0 < eps < 1:
        raise ValueError(f"eps={eps} not in (0, 1)")
    if not 0 < delta < 1:
        raise ValueError(f"delta={delta} not in (0, 1)")
    light = light_set(profile, eps)
    size = len(profile.points)
    return Classification(len(light) > delta * size, light, pair_threshold(size, eps))


def is_cap_set(points: PointSet, t: CoeffTriple) -> bool:
    """True iff every solution in ``A^3`` is constant.

    The constant triple always solves the equation, so this is ``d_x == 1``
    for every x.
    """
    profile = degree_profile(points, t)
    return bool(np.all(profile.degrees == 1))


def nonconstant_solution(points: PointSet, t: CoeffTriple) -> tuple[int, int, int] | None:
    """Some solution ``(x, y, z)`` with distinct entries, as codes, or None."""
    for i in range(len(points)):
        z = _third_point_codes(points, t, np.array([i]))[0]
        hits = np.flatnonzero(points.index_of(z) >= 0)
        for j in hits:
            zc = int(z[j])
            x, y = int(points.codes[i]), int(points.codes[j])
            if len({x, y, zc}) == 3:
                return (x, y, zc)
    return None
