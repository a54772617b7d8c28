"""Prime-field arithmetic, points of F_q^n and finite point sets.

Points are stored by their canonical integer code, the little-endian base-q
number ``sum(digits[i] * q**i)``, so the whole space F_q^n is the range
``0 .. q**n - 1``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    BadDigitError,
    BadHeaderError,
    CodeOutOfRangeError,
    DigitOutOfRangeError,
    DimensionMismatchError,
    DuplicatePointError,
    NotPrimeError,
    OutOfRangeError,
    TooLargeError,
)

MAX_Q = 257
MAX_SPACE = 2**48


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    i = 2
    while i * i <= q:
        if q % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True, eq=False)
class FieldCtx:
    """The prime field F_q with lookup tables for its operations."""

    q: int
    add_table: np.ndarray = field(repr=False)
    mul_table: np.ndarray = field(repr=False)
    neg_table: np.ndarray = field(repr=False)
    inv_table: np.ndarray = field(repr=False)

    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a % self.q, b % self.q])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a % self.q, b % self.q])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a % self.q])

    def inv(self, a: int) -> int:
        a %= self.q
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_table[a])

    def __eq__(self, other):
        return isinstance(other, FieldCtx) and other.q == self.q

    def __hash__(self):
        return hash(("FieldCtx", self.q))


@functools.lru_cache(maxsize=None)
def make_field(q: int) -> FieldCtx:
    """Build the table-driven context for F_q; ``q`` must be a prime in [2, 257]."""
    q = int(q)
    if not 2 <= q <= MAX_Q:
        raise OutOfRangeError(f"q={q} outside [2, {MAX_Q}]")
    if not is_prime(q):
        raise NotPrimeError(f"q={q} is not prime")
    r = np.arange(q, dtype=np.int64)
    add = (r[:, None] + r[None, :]) % q
    mul = (r[:, None] * r[None, :]) % q
    neg = (-r) % q
    inv = np.zeros(q, dtype=np.int64)
    inv[1:] = [pow(int(a), q - 2, q) for a in range(1, q)]
    for t in (add, mul, neg, inv):
        t.setflags(write=False)
    return FieldCtx(q, add, mul, neg, inv)


def encode(digits: Sequence[int], q: int) -> int:
    code = 0
    for d in reversed(digits):
        d = int(d)
        if not 0 <= d < q:
            raise DigitOutOfRangeError(f"digit {d} not in 0..{q - 1}")
        code = code * q + d
    return code


def decode(code: int, q: int, n: int) -> tuple[int, ...]:
    code = int(code)
    if not 0 <= code < q**n:
        raise CodeOutOfRangeError(f"code {code} not in 0..{q**n - 1}")
    digits = []
    for _ in range(n):
        code, d = divmod(code, q)
        digits.append(d)
    return tuple(digits)


def decode_array(codes: np.ndarray, q: int, n: int) -> np.ndarray:
    """Vectorised decode: returns an ``(len(codes), n)`` digit matrix."""
    codes = np.asarray(codes, dtype=np.int64)
    powers = q ** np.arange(n, dtype=np.int64)
    return (codes[:, None] // powers[None, :]) % q


def place_values(q: int, n: int) -> np.ndarray:
    return q ** np.arange(n, dtype=np.int64)


def check_space(q: int, n: int) -> None:
    if n < 0:
        raise OutOfRangeError(f"n={n} must be non-negative")
    if q**n > MAX_SPACE:
        raise TooLargeError(f"q^n = {q}^{n} exceeds 2^48")


@dataclass(frozen=True)
class Point:
    digits: tuple[int, ...]
    q: int

    @classmethod
    def from_code(cls, code: int, q: int, n: int) -> "Point":
        return cls(decode(code, q, n), q)

    @property
    def n(self) -> int:
        return len(self.digits)

    @property
    def code(self) -> int:
        return encode(self.digits, self.q)


def vec_combine(ctx: FieldCtx, scalars: Sequence[int], points: Sequence[Point]) -> Point:
    """Coordinatewise ``sum(scalars[i] * points[i])`` over F_q."""
    if len(scalars) != len(points):
        raise DimensionMismatchError(f"{len(scalars)} scalars for {len(points)} points")
    if not points:
        raise DimensionMismatchError("empty combination")
    n = points[0].n
    if any(p.n != n for p in points):
        raise DimensionMismatchError("points of different dimensions")
    acc = np.zeros(n, dtype=np.int64)
    for s, p in zip(scalars, points):
        acc += (int(s) % ctx.q) * np.asarray(p.digits, dtype=np.int64)
    return Point(tuple(int(v) for v in acc % ctx.q), ctx.q)


class PointSet:
    """A finite subset of F_q^n held as a strictly increasing array of codes.

    Row ``i`` of :attr:`digits` is the point with index ``i``; tensors and
    hypergraphs built from a set use these sorted positions as indices.
    """

    __slots__ = ("q", "n", "codes", "_digits")

    def __init__(self, q: int, n: int, codes: Iterable[int]):
        check_space(q, n)
        arr = np.asarray(sorted(int(c) for c in codes), dtype=np.int64)
        if arr.size:
            if arr[0] < 0 or arr[-1] >= q**n:
                raise CodeOutOfRangeError(f"code outside 0..{q**n - 1}")
            if np.any(np.diff(arr) == 0):
                raise DuplicatePointError("duplicate point code")
        arr.setflags(write=False)
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "codes", arr)
        object.__setattr__(self, "_digits", None)

    def __setattr__(self, name, value):
        raise AttributeError("PointSet is immutable")

    @classmethod
    def full_space(cls, q: int, n: int) -> "PointSet":
        check_space(q, n)
        return cls(q, n, range(q**n))

    @classmethod
    def from_points(cls, q: int, n: int, points: Iterable[Sequence[int]]) -> "PointSet":
        codes = []
        for p in points:
            if len(p) != n:
                raise DimensionMismatchError(f"point {tuple(p)} is not of length {n}")
            codes.append(encode(p, q))
        return cls(q, n, codes)

    @property
    def field(self) -> FieldCtx:
        return make_field(self.q)

    @property
    def digits(self) -> np.ndarray:
        if self._digits is None:
            d = decode_array(self.codes, self.q, self.n)
            d.setflags(write=False)
            object.__setattr__(self, "_digits", d)
        return self._digits

    def __len__(self) -> int:
        return int(self.codes.size)

    def __iter__(self):
        for c in self.codes:
            yield Point.from_code(int(c), self.q, self.n)

    def __contains__(self, code) -> bool:
        if isinstance(code, Point):
            code = code.code
        i = np.searchsorted(self.codes, code)
        return bool(i < self.codes.size and self.codes[i] == code)

    def index_of(self, codes: np.ndarray) -> np.ndarray:
        """Positions of ``codes`` in the set, ``-1`` where absent."""
        codes = np.asarray(codes, dtype=np.int64)
        if self.codes.size == 0:
            return np.full(codes.shape, -1, dtype=np.int64)
        pos = np.searchsorted(self.codes, codes)
        pos_c = np.minimum(pos, self.codes.size - 1)
        return np.where(self.codes[pos_c] == codes, pos_c, -1)

    def subset(self, indices: Iterable[int]) -> "PointSet":
        idx = np.asarray(list(indices), dtype=np.int64)
        return PointSet(self.q, self.n, self.codes[idx] if idx.size else [])

    def __eq__(self, other):
        return (
            isinstance(other, PointSet)
            and (self.q, self.n) == (other.q, other.n)
            and np.array_equal(self.codes, other.codes)
        )

    def __hash__(self):
        return hash((self.q, self.n, self.codes.tobytes()))

    def __repr__(self):
        return f"PointSet(q={self.q}, n={self.n}, size={len(self)})"


def parse_set(text: str) -> PointSet:
    """Parse the set-file format.

    Line 1 is ``"<q> <n>"``; each later non-empty line holds ``n``
    comma-separated digits.  Lines starting with ``#`` are skipped.
    """
    header = None
    seen: dict[int, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 2 or not all(p.isdigit() for p in parts):
                raise BadHeaderError(f"expected '<q> <n>', got {line!r}", lineno)
            q, n = int(parts[0]), int(parts[1])
            try:
                make_field(q)
                check_space(q, n)
            except (NotPrimeError, OutOfRangeError, TooLargeError) as exc:
                raise BadHeaderError(str(exc), lineno) from exc
            header = (q, n)
            continue
        q, n = header
        fields = [f.strip() for f in line.split(",")] if n else []
        if n == 0 and line:
            raise BadDigitError("dimension 0 admits no digits", lineno)
        if len(fields) != n or not all(f.isdigit() for f in fields):
            raise BadDigitError(f"expected {n} comma-separated digits, got {line!r}", lineno)
        digits = [int(f) for f in fields]
        bad = [d for d in digits if d >= q]
        if bad:
            raise BadDigitError(f"digit {bad[0]} >= q={q}", lineno)
        code = encode(digits, q)
        if code in seen:
            raise DuplicatePointError(f"repeats the point on line {seen[code]}", lineno)
        seen[code] = lineno
    if header is None:
        raise BadHeaderError("missing header line")
    return PointSet(header[0], header[1], seen)


def serialize_set(points: PointSet) -> str:
    lines = [f"{points.q} {points.n}"]
    lines.extend(",".join(str(int(d)) for d in row) for row in points.digits)
    return "\n".join(lines) + "\n"
