"""Coverage predicates: works, works together, uncovered witnesses, W(n).

The kernel enumerates the orthogonal complement ``U`` of a span, marks
every cyclic shift of every element of ``U`` in a table of size ``q^n`` and
counts the marks.  ``x`` is covered exactly when some shift of ``x`` lies in
``U``, which is the same as some shift being orthogonal to every row.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .errors import BudgetExceeded, PreconditionError
from .gf import Ambient, Basis, CycVec

DEFAULT_BUDGET_BITS = 28


def default_budget_bits() -> int:
    env = os.environ.get("CYCCOVER_BUDGET_BITS")
    return int(env) if env else DEFAULT_BUDGET_BITS


def check_budget(ambient: Ambient, budget_bits: int | None = None) -> None:
    bits = default_budget_bits() if budget_bits is None else budget_bits
    if ambient.q ** ambient.n > 2 ** bits:
        raise BudgetExceeded(
            f"q^n = {ambient.q}^{ambient.n} exceeds the budget of 2^{bits} entries"
        )


@dataclass(frozen=True)
class CoverageReport:
    covers: bool
    covered_count: int
    witness: CycVec | None
    tested_space: int

    def to_json(self) -> dict:
        return {
            "covers": self.covers,
            "covered_count": self.covered_count,
            "tested_space": self.tested_space,
            "witness": None if self.witness is None else self.witness.literal(),
        }


# -- numpy helpers -------------------------------------------------------------


def _span_codes_bits(rows: Sequence[int]) -> np.ndarray:
    codes = np.zeros(1, dtype=np.int64)
    for r in rows:
        codes = np.concatenate([codes, codes ^ r])
    return codes


def _rotate_bits(codes: np.ndarray, k: int, n: int) -> np.ndarray:
    if k % n == 0:
        return codes
    mask = (1 << n) - 1
    return ((codes << k) | (codes >> (n - k))) & mask


def all_digits(q: int, n: int) -> np.ndarray:
    """Every vector of F_q^n as a ``(q^n, n)`` digit array, row index = code."""
    codes = np.arange(q ** n, dtype=np.int64)
    out = np.empty((q ** n, n), dtype=np.int8)
    for i in range(n):
        codes, out[:, i] = np.divmod(codes, q)
    return out


def _span_digits(rows: Sequence[Sequence[int]], q: int, n: int) -> np.ndarray:
    span = np.zeros((1, n), dtype=np.int64)
    for r in rows:
        r = np.asarray(r, dtype=np.int64)
        span = np.concatenate([(span + c * r) % q for c in range(q)])
    return span


def _codes_of_digits(digits: np.ndarray, q: int) -> np.ndarray:
    weights = q ** np.arange(digits.shape[1], dtype=np.int64)
    return digits.astype(np.int64) @ weights


def covered_map(basis: Basis, budget_bits: int | None = None) -> np.ndarray:
    """Boolean table over all codes: True where ``x`` has a shift in the complement."""
    amb = basis.ambient
    check_budget(amb, budget_bits)
    q, n = amb.q, amb.n
    seen = np.zeros(q ** n, dtype=bool)
    if q == 2:
        codes = _span_codes_bits([u.data for u in basis.perp])
        for k in range(n):
            seen[_rotate_bits(codes, k, n)] = True
    else:
        span = _span_digits([u.coords for u in basis.perp], q, n)
        for k in range(n):
            seen[_codes_of_digits(np.roll(span, k, axis=1), q)] = True
    return seen


def _bit_reverse(codes: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(codes)
    for i in range(n):
        out |= ((codes >> i) & 1) << (n - 1 - i)
    return out


def least_uncovered(seen: np.ndarray, ambient: Ambient) -> CycVec | None:
    """Minimum-weight, then lexicographically least (index 0 first) uncovered ``x``."""
    idx = np.flatnonzero(~seen).astype(np.int64)
    if idx.size == 0:
        return None
    q, n = ambient.q, ambient.n
    if q == 2:
        w = np.zeros(idx.size, dtype=np.int64)
        for i in range(n):
            w += (idx >> i) & 1
        best = idx[w == w.min()]
        # Lex order with coordinate 0 most significant.
        return CycVec(ambient, int(best[np.argmin(_bit_reverse(best, n))]))
    digits = all_digits(q, n)[idx]
    w = (digits != 0).sum(axis=1)
    cand = digits[w == w.min()]
    order = np.lexsort(cand.T[::-1])
    return CycVec.from_coords(ambient, cand[order[0]].tolist())


# -- public predicates -----------------------------------------------------------


def _as_basis(rows, ambient: Ambient | None = None) -> Basis:
    if isinstance(rows, Basis):
        return rows
    if isinstance(rows, CycVec):
        rows = [rows]
    return Basis.span_of(list(rows), ambient)


def works_together(basis, budget_bits: int | None = None) -> CoverageReport:
    """Decide whether the rows work together, with count and witness."""
    b = _as_basis(basis)
    seen = covered_map(b, budget_bits)
    count = int(seen.sum())
    witness = None if count == seen.size else least_uncovered(seen, b.ambient)
    return CoverageReport(count == seen.size, count, witness, int(seen.size))


def works(v: CycVec, budget_bits: int | None = None) -> bool:
    return works_together(Basis.span_of([v]), budget_bits).covers


def find_uncovered_witness(basis, budget_bits: int | None = None) -> CycVec | None:
    return works_together(basis, budget_bits).witness


def is_uncovered(rows: Sequence[CycVec], x: CycVec) -> bool:
    """Direct definition check: no shift of ``x`` is orthogonal to all rows."""
    from .gf import dot, shift

    return all(any(dot(v, shift(x, k)) for v in rows) for k in range(x.n))


# -- the polynomial route ---------------------------------------------------------


def poly_covered_map(basis, budget_bits: int | None = None) -> np.ndarray:
    """Covered table computed through products ``f_v * f_x`` in F_q[X]/(X^n - 1).

    ``x`` is covered when some coefficient index ``k`` is zero in every
    product ``f_v * f_{rev x}``; the reversal is applied when indexing the
    result so the table is indexed by ``x`` like :func:`covered_map`.
    """
    b = _as_basis(basis)
    amb = b.ambient
    check_budget(amb, budget_bits)
    q, n = amb.q, amb.n
    if q == 2:
        xs = np.arange(2 ** n, dtype=np.int64)
        acc = np.zeros_like(xs)
        for v in b.rows:
            prod = np.zeros_like(xs)
            for i in v.support:
                prod ^= _rotate_bits(xs, i, n)
            acc |= prod
        hit_by_rev = acc != (1 << n) - 1
        # hit_by_rev[c] concerns f_c as the second factor; c = rev(x).
        rev = _reverse_codes_bits(xs, n)
        return hit_by_rev[rev]
    digits = all_digits(q, n)
    zero_everywhere = np.ones((q ** n, n), dtype=bool)
    for v in b.rows:
        circ = np.zeros((n, n), dtype=np.int64)
        for i, c in enumerate(v.coords):
            for j in range(n):
                circ[j, (i + j) % n] = c
        prod = (digits.astype(np.int64) @ circ) % q
        zero_everywhere &= prod == 0
    hit_by_rev = zero_everywhere.any(axis=1)
    rev_digits = np.concatenate([digits[:, :1], digits[:, :0:-1]], axis=1)
    return hit_by_rev[_codes_of_digits(rev_digits, q)]


def _reverse_codes_bits(codes: np.ndarray, n: int) -> np.ndarray:
    """Codes of ``x -> (x_0, x_{n-1}, ..., x_1)``."""
    out = codes & 1
    for i in range(1, n):
        out |= ((codes >> i) & 1) << (n - i)
    return out


def works_together_poly(basis, budget_bits: int | None = None) -> CoverageReport:
    b = _as_basis(basis)
    seen = poly_covered_map(b, budget_bits)
    count = int(seen.sum())
    witness = None if count == seen.size else least_uncovered(seen, b.ambient)
    return CoverageReport(count == seen.size, count, witness, int(seen.size))


# -- the closed form for q = 2 -----------------------------------------------------


def is_in_W(v: CycVec) -> bool:
    """Membership in the set of binary vectors that work, by component parities."""
    if v.q != 2:
        raise PreconditionError("is_in_W is defined for q = 2 only")
    n = v.n
    step = n & -n
    c = v.coords
    return all(sum(c[t::step]) % 2 == 0 for t in range(step))


def W_basis(n: int) -> list[CycVec]:
    """A basis of W(n): ``e_j + e_{j - 2^b}`` for ``j >= 2^b``."""
    amb = Ambient(2, n)
    step = n & -n
    return [CycVec(amb, (1 << j) | (1 << (j - step))) for j in range(step, n)]


def enumerate_W(n: int, budget_bits: int | None = None) -> Iterator[CycVec]:
    """Yield the members of W(n) once each, in increasing code order."""
    amb = Ambient(2, n)
    rows = W_basis(n)
    bits = default_budget_bits() if budget_bits is None else budget_bits
    if len(rows) > bits:
        raise BudgetExceeded(f"|W({n})| = 2^{len(rows)} exceeds 2^{bits}")
    for code in np.sort(_span_codes_bits([r.data for r in rows])):
        yield CycVec(amb, int(code))
