"""Vectors over F_q^n with cyclic index semantics.

Coordinates are indexed ``0..n-1`` and every index is read modulo ``n``.
For ``q = 2`` a vector is a Python integer whose bit ``i`` is coordinate
``i``; for odd ``q`` it is a ``bytes`` object with one residue per byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .errors import AmbientMismatch, LiteralError, PreconditionError

SUPPORTED_Q = (2, 3, 5)


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Ambient:
    """The space F_q^n."""

    q: int
    n: int

    def __post_init__(self) -> None:
        if self.q not in SUPPORTED_Q:
            raise PreconditionError(f"q must be one of {SUPPORTED_Q}, got {self.q}")
        if self.n < 1:
            raise PreconditionError(f"n must be positive, got {self.n}")

    @property
    def size(self) -> int:
        return self.q ** self.n

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class CycVec:
    ambient: Ambient
    data: int | bytes

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_coords(cls, ambient: Ambient, coords: Iterable[int]) -> "CycVec":
        coords = [int(c) % ambient.q for c in coords]
        if len(coords) != ambient.n:
            raise PreconditionError(f"expected {ambient.n} coordinates, got {len(coords)}")
        if ambient.q == 2:
            bits = 0
            for i, c in enumerate(coords):
                if c:
                    bits |= 1 << i
            return cls(ambient, bits)
        return cls(ambient, bytes(coords))

    @classmethod
    def from_code(cls, ambient: Ambient, code: int) -> "CycVec":
        """Inverse of :attr:`code` (base-q digits, coordinate 0 least significant)."""
        if ambient.q == 2:
            return cls(ambient, int(code) & ambient.mask)
        digits = []
        code = int(code)
        for _ in range(ambient.n):
            code, d = divmod(code, ambient.q)
            digits.append(d)
        return cls(ambient, bytes(digits))

    @classmethod
    def parse(cls, literal: str, q: int = 2, n: int | None = None) -> "CycVec":
        """Parse a coordinate string such as ``"0110000"`` (index 0 first)."""
        text = literal.strip()
        if not text or any(ch not in "0123456789" for ch in text):
            raise LiteralError(f"malformed vector literal {literal!r}")
        digits = [int(ch) for ch in text]
        if any(d >= q for d in digits):
            raise LiteralError(f"digit out of range for q={q} in {literal!r}")
        if n is not None and len(digits) != n:
            raise LiteralError(f"literal {literal!r} has length {len(digits)}, expected {n}")
        return cls.from_coords(Ambient(q, len(digits)), digits)

    @classmethod
    def zero(cls, ambient: Ambient) -> "CycVec":
        return cls.from_coords(ambient, [0] * ambient.n)

    @classmethod
    def ones(cls, ambient: Ambient) -> "CycVec":
        return cls.from_coords(ambient, [1] * ambient.n)

    @classmethod
    def unit(cls, ambient: Ambient, i: int) -> "CycVec":
        coords = [0] * ambient.n
        coords[i % ambient.n] = 1
        return cls.from_coords(ambient, coords)

    @classmethod
    def e_hat(cls, ambient: Ambient) -> "CycVec":
        """The vector (0, 1, 1, ..., 1)."""
        return cls.from_coords(ambient, [0] + [1] * (ambient.n - 1))

    # -- views --------------------------------------------------------------

    @property
    def q(self) -> int:
        return self.ambient.q

    @property
    def n(self) -> int:
        return self.ambient.n

    @cached_property
    def coords(self) -> tuple[int, ...]:
        if self.q == 2:
            return tuple((self.data >> i) & 1 for i in range(self.n))
        return tuple(self.data)

    @cached_property
    def code(self) -> int:
        if self.q == 2:
            return self.data
        code = 0
        for d in reversed(self.data):
            code = code * self.q + d
        return code

    def __getitem__(self, i: int) -> int:
        return self.coords[i % self.n]

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords) if self.q != 2 else self.data == 0

    @property
    def weight(self) -> int:
        """Hamming weight (number of nonzero coordinates)."""
        if self.q == 2:
            return self.data.bit_count()
        return sum(1 for c in self.data if c)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, c in enumerate(self.coords) if c)

    def literal(self) -> str:
        return "".join(str(c) for c in self.coords)

    def __str__(self) -> str:
        return self.literal()

    def __repr__(self) -> str:
        return f"CycVec(q={self.q}, {self.literal()!r})"

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Minimum weight first, then lexicographically least coordinate string."""
        return (self.weight, self.coords)

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "CycVec") -> None:
        if self.ambient != other.ambient:
            raise AmbientMismatch(f"{self.ambient} vs {other.ambient}")

    def __add__(self, other: "CycVec") -> "CycVec":
        self._check(other)
        if self.q == 2:
            return CycVec(self.ambient, self.data ^ other.data)
        q = self.q
        return CycVec(self.ambient, bytes((a + b) % q for a, b in zip(self.data, other.data)))

    def __sub__(self, other: "CycVec") -> "CycVec":
        return self + other.scale(-1)

    def __neg__(self) -> "CycVec":
        return self.scale(-1)

    def scale(self, c: int) -> "CycVec":
        """Multiply every coordinate by the field element ``c``."""
        c %= self.q
        if self.q == 2:
            return self if c else CycVec.zero(self.ambient)
        return CycVec(self.ambient, bytes((a * c) % self.q for a in self.data))


# -- primitive operations ----------------------------------------------------


def shift(x: CycVec, k: int) -> CycVec:
    """Cyclic shift by ``k``: ``result[i] = x[i - k]``."""
    n = x.n
    k %= n
    if k == 0:
        return x
    if x.q == 2:
        mask = x.ambient.mask
        return CycVec(x.ambient, ((x.data << k) | (x.data >> (n - k))) & mask)
    return CycVec(x.ambient, x.data[n - k:] + x.data[: n - k])


def dot(v: CycVec, x: CycVec) -> int:
    v._check(x)
    if v.q == 2:
        return (v.data & x.data).bit_count() & 1
    return sum(a * b for a, b in zip(v.data, x.data)) % v.q


def weight_sum(v: CycVec) -> int:
    """The field sum of the coordinates, written |v| in the literature."""
    if v.q == 2:
        return v.data.bit_count() & 1
    return sum(v.data) % v.q


def scale_indices(v: CycVec, ell: int) -> CycVec:
    """``result[i] = v[ell * i mod n]``; ``ell`` must be coprime to ``n``."""
    n = v.n
    if n > 1 and gcd(ell, n) != 1:
        raise PreconditionError(f"scaling factor {ell} is not coprime to n={n}")
    c = v.coords
    return CycVec.from_coords(v.ambient, [c[(ell * i) % n] for i in range(n)])


def reverse(v: CycVec) -> CycVec:
    return scale_indices(v, -1)


def is_symmetric(v: CycVec) -> bool:
    c = v.coords
    n = v.n
    return all(c[i] == c[(-i) % n] for i in range(n))


def is_small(v: CycVec) -> bool:
    """True iff no index ``i`` has ``v_i = v_{-i} = 1`` (binary vectors only)."""
    if v.q != 2:
        raise PreconditionError("is_small is defined for q = 2 only")
    return v.data & reverse(v).data == 0


def units_mod(n: int) -> list[int]:
    """Residues ``1 <= l < n`` coprime to ``n`` (``[1]`` when ``n = 1``)."""
    if n == 1:
        return [1]
    return [ell for ell in range(1, n) if gcd(ell, n) == 1]


# -- row reduction -----------------------------------------------------------


def _rref_bits(rows: Iterable[int], n: int) -> list[int]:
    pivots: dict[int, int] = {}
    for r in rows:
        for col, p in pivots.items():
            if (r >> col) & 1:
                r ^= p
        if r:
            col = (r & -r).bit_length() - 1
            for c2 in list(pivots):
                if (pivots[c2] >> col) & 1:
                    pivots[c2] ^= r
            pivots[col] = r
    return [pivots[c] for c in sorted(pivots)]


def _rref_digits(rows: Iterable[Sequence[int]], q: int, n: int) -> list[list[int]]:
    pivots: dict[int, list[int]] = {}
    for row in rows:
        r = [x % q for x in row]
        for col, p in pivots.items():
            if r[col]:
                f = r[col]
                r = [(a - f * b) % q for a, b in zip(r, p)]
        nz = next((j for j in range(n) if r[j]), None)
        if nz is None:
            continue
        inv = pow(r[nz], q - 2, q)
        r = [(a * inv) % q for a in r]
        for c2 in list(pivots):
            f = pivots[c2][nz]
            if f:
                pivots[c2] = [(a - f * b) % q for a, b in zip(pivots[c2], r)]
        pivots[nz] = r
    return [pivots[c] for c in sorted(pivots)]


def rref(vectors: Sequence[CycVec], ambient: Ambient | None = None) -> list[CycVec]:
    """Reduced row-echelon form with pivot columns in ascending index order."""
    if ambient is None:
        if not vectors:
            raise PreconditionError("ambient required for an empty vector list")
        ambient = vectors[0].ambient
    for v in vectors:
        if v.ambient != ambient:
            raise AmbientMismatch(f"{v.ambient} vs {ambient}")
    if ambient.q == 2:
        return [CycVec(ambient, r) for r in _rref_bits((v.data for v in vectors), ambient.n)]
    return [
        CycVec.from_coords(ambient, r)
        for r in _rref_digits((v.coords for v in vectors), ambient.q, ambient.n)
    ]


def rank(vectors: Sequence[CycVec], ambient: Ambient | None = None) -> int:
    return len(rref(vectors, ambient))


def kernel(vectors: Sequence[CycVec], ambient: Ambient) -> list[CycVec]:
    """A basis of ``{x : v . x = 0 for every v}``."""
    q, n = ambient.q, ambient.n
    rows = rref(vectors, ambient)
    piv = {}
    for r in rows:
        c = r.coords
        piv[next(j for j in range(n) if c[j])] = c
    out = []
    for f in range(n):
        if f in piv:
            continue
        x = [0] * n
        x[f] = 1
        for pc, c in piv.items():
            x[pc] = (-c[f]) % q
        out.append(CycVec.from_coords(ambient, x))
    return out


@dataclass(frozen=True)
class Basis:
    """A canonical (RREF) basis of a subspace of F_q^n.

    Two bases compare equal exactly when they span the same subspace.
    """

    ambient: Ambient
    rows: tuple[CycVec, ...]

    @classmethod
    def span_of(cls, vectors: Sequence[CycVec], ambient: Ambient | None = None) -> "Basis":
        """Canonical basis of the span; dependent inputs are absorbed."""
        if ambient is None:
            if not vectors:
                raise PreconditionError("ambient required for an empty basis")
            ambient = vectors[0].ambient
        return cls(ambient, tuple(rref(vectors, ambient)))

    @classmethod
    def independent(cls, vectors: Sequence[CycVec], ambient: Ambient | None = None) -> "Basis":
        """Like :meth:`span_of` but rejects linearly dependent input."""
        b = cls.span_of(vectors, ambient)
        if b.m != len(vectors):
            raise PreconditionError("vectors are linearly dependent")
        return b

    @property
    def m(self) -> int:
        return len(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @cached_property
    def perp(self) -> tuple[CycVec, ...]:
        """Basis of the orthogonal complement of the span."""
        return tuple(kernel(self.rows, self.ambient))

    def contains(self, v: CycVec) -> bool:
        return rank(list(self.rows) + [v], self.ambient) == self.m

    def literals(self) -> list[str]:
        return [r.literal() for r in self.rows]
