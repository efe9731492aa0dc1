"""Exact computation of h_q(n) and the product construction.

Binary engine
-------------
A node is a subspace ``V`` (kept as a list of packed rows) together with
``P``, the elements of ``V^perp`` sorted by necklace (rotation orbit) id.
``V`` works together iff every necklace meets ``P``.  Extending by ``w``
keeps the elements of ``P`` orthogonal to ``w``, so:

* a necklace meeting ``P`` in a single element ``y`` forces ``w . y = 0``;
* ``w`` must work on its own, i.e. lie in W(n).

Extensions are therefore enumerated as nonzero cosets of ``(W cap C)/V``
where ``C`` collects the forced equations.  Each coset is encoded by its
coordinates ``a`` in a complement basis, and the parity ``w . y`` becomes
``popcount(a & syndrome(y))``, which lets whole necklace groups be tested
for all candidates at once.

Symmetry breaking
-----------------
Multiplying every row by a unit of F_2[X]/(X^n - 1) and scaling indices
both preserve working together.  Associates share ``gcd(f, X^n - 1)``, so
the orbit of a single vector is identified by that divisor up to index
scaling (its *class*).  Classes are ranked by (degree, value).  A working
subspace is searched only below the root of its lowest-ranked class, and
every element of a subspace explored under root ``r`` must have rank at
least ``r``.  Children are deduplicated by a canonical key: the least RREF
over all shifts and index scalings.
"""

from __future__ import annotations

import itertools
import logging
import os
import time
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .covering import default_budget_bits, works_together
from .errors import BudgetExceeded, PreconditionError
from .gf import Ambient, Basis, CycVec, rank, units_mod
from .polyring import irreducible_factors, x_pow_minus_one

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    max_map_bits: int = 28
    max_nodes: int = 10**9
    thread_count: int = 1
    time_limit: float = 1e9

    def __post_init__(self) -> None:
        for name in ("max_map_bits", "max_nodes", "thread_count", "time_limit"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"{name} must be positive")

    @classmethod
    def from_env(cls, **overrides) -> "SearchBudget":
        kw = {"max_map_bits": default_budget_bits()}
        threads = os.environ.get("CYCCOVER_THREADS")
        if threads:
            kw["thread_count"] = int(threads)
        kw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**kw)


@dataclass(frozen=True)
class Reductions:
    shift: bool = True
    scaling: bool = True
    unit: bool = True


@dataclass
class HResult:
    q: int
    n: int
    value: int
    witness: Basis
    complete: bool = True
    nodes: int = 0
    elapsed: float = 0.0
    stats: dict = field(default_factory=dict)

    def __iter__(self):
        # Allows ``value, witness = h_exact(...)``.
        yield self.value
        yield self.witness

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "n": self.n,
            "value": self.value,
            "complete": self.complete,
            "witness": self.witness.literals(),
            "nodes": self.nodes,
        }


def log_bound(q: int, n: int) -> int:
    """``floor(log_q n)`` computed exactly."""
    m = 0
    while q ** (m + 1) <= n:
        m += 1
    return m


class _Stop(Exception):
    pass


# -- packed binary helpers ---------------------------------------------------------


def _rref_int(rows: Sequence[int]) -> list[int]:
    """Fully reduced echelon form keyed by highest bit; returned sorted."""
    out: list[int] = []
    for r in rows:
        for p in out:
            if (r >> (p.bit_length() - 1)) & 1:
                r ^= p
        if r:
            hb = r.bit_length() - 1
            out = [p ^ r if (p >> hb) & 1 else p for p in out]
            out.append(r)
    return sorted(out)


def _perp_int(rows: Sequence[int], n: int) -> list[int]:
    piv = {r.bit_length() - 1: r for r in _rref_int(rows)}
    out = []
    for j in range(n):
        if j in piv:
            continue
        v = 1 << j
        for pc, r in piv.items():
            if (r >> j) & 1:
                v |= 1 << pc
        out.append(v)
    return out


def _span_np(rows: Sequence[int]) -> np.ndarray:
    arr = np.zeros(1, dtype=np.uint32)
    for v in rows:
        arr = np.concatenate([arr, arr ^ np.uint32(v)])
    return arr


def _basis_of_set(vecs: np.ndarray, n: int) -> list[int]:
    vecs = np.unique(vecs)
    vecs = vecs[vecs != 0]
    out = []
    for bit in range(n - 1, -1, -1):
        if vecs.size == 0:
            break
        sel = ((vecs >> bit) & 1).astype(bool)
        idx = np.flatnonzero(sel)
        if idx.size == 0:
            continue
        pv = vecs[idx[0]]
        out.append(int(pv))
        vecs = vecs.copy()
        vecs[sel] ^= pv
        vecs = vecs[vecs != 0]
    return out


def _popcount(a: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(a)
    a = a.astype(np.uint32)
    a = a - ((a >> 1) & 0x55555555)
    a = (a & 0x33333333) + ((a >> 2) & 0x33333333)
    a = (a + (a >> 4)) & 0x0F0F0F0F
    return ((a * 0x01010101) & 0xFFFFFFFF) >> 24


def _pmod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _linear_tables(images: Sequence[int]) -> list[np.ndarray]:
    """Byte lookup tables for the GF(2)-linear map sending bit i to images[i]."""
    tabs = []
    for k in range(0, len(images), 8):
        t = np.zeros(256, dtype=np.uint32)
        for b, img in enumerate(images[k:k + 8]):
            t[1 << b:2 << b] = t[:1 << b] ^ np.uint32(img)
        tabs.append(t)
    return tabs


def _apply_linear(arr: np.ndarray, tabs: list[np.ndarray]) -> np.ndarray:
    out = tabs[0][arr & np.uint32(255)]
    for k in range(1, len(tabs)):
        out ^= tabs[k][(arr >> np.uint32(8 * k)) & np.uint32(255)]
    return out


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _pmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _poly_to_int(f) -> int:
    return sum(1 << i for i, c in enumerate(f) if c)


def necklace_ids(n: int) -> np.ndarray:
    """For every n-bit code, the least rotation (its necklace representative)."""
    N = 1 << n
    mask = N - 1
    cur = np.arange(N, dtype=np.uint32)
    rep = cur.copy()
    for _ in range(1, n):
        cur = ((cur << np.uint32(1)) & np.uint32(mask)) | (cur >> np.uint32(n - 1))
        np.minimum(rep, cur, out=rep)
    return rep


class _BinaryEngine:
    def __init__(self, n: int, budget: SearchBudget, reductions: Reductions):
        self.n = n
        self.mask = (1 << n) - 1
        self.budget = budget
        self.red = reductions
        self.B = n & -n
        self.units = units_mod(n) if reductions.scaling else [1]
        self.shifts = range(n) if reductions.shift else range(1)
        self.cons = [sum(1 << j for j in range(n) if j % self.B == t) for t in range(self.B)]
        self.M = (1 << n) | 1
        self._cls_memo: dict[int, int] = {}
        self._scale_tab = [[(l * i) % n for i in range(n)] for l in self.units]
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit
        self.best: list[int] = []
        self.stats = {"candidates": 0, "after_class": 0, "after_stage": 0}
        self.rep = necklace_ids(n)
        self._setup_classes()

    # symmetry helpers

    def scale(self, v: int, li: int) -> int:
        tab = self._scale_tab[li]
        r = 0
        for i in range(self.n):
            if (v >> tab[i]) & 1:
                r |= 1 << i
        return r

    def rot(self, v: int, k: int) -> int:
        k %= self.n
        return ((v << k) | (v >> (self.n - k))) & self.mask

    def canon(self, V: Sequence[int]) -> tuple[int, ...]:
        best = None
        for li in range(len(self.units)):
            Vl = [self.scale(v, li) for v in V]
            for k in self.shifts:
                key = tuple(_rref_int([self.rot(v, k) for v in Vl]))
                if best is None or key < best:
                    best = key
        return best

    # classes of single vectors

    def vclass(self, v: int) -> int:
        d = _pgcd(self.M, v)
        c = self._cls_memo.get(d)
        if c is None:
            c = min(_pgcd(self.M, self.scale(d, li)) for li in range(len(self.units)))
            self._cls_memo[d] = c
        return c

    def _setup_classes(self) -> None:
        n, B = self.n, self.B
        odd = n // B
        facs = [_poly_to_int(g) for g, _ in irreducible_factors(x_pow_minus_one(odd, 2), 2)]
        self.irr = facs
        self.powers = []
        self._mod_tables: dict[int, list[np.ndarray]] = {}
        for g in facs:
            gp = [1]
            for _ in range(B):
                gp.append(_pmul(gp[-1], g))
            self.powers.append(gp)
        # Divisors of X^n - 1 = prod g^B that are multiples of (1 + X)^B,
        # excluding X^n - 1 itself (the zero element of the ring).
        one_plus_x = facs.index(0b11)
        ranges = [range(B, B + 1) if i == one_plus_x else range(B + 1) for i in range(len(facs))]
        divisors = []
        for exps in itertools.product(*ranges):
            if all(e == B for e in exps):
                continue
            d = 1
            for gp, e in zip(self.powers, exps):
                d = _pmul(d, gp[e])
            divisors.append(d)
        classes = sorted({self.vclass(d) for d in divisors}, key=lambda d: (d.bit_length(), d))
        self.classes = classes
        self.class_rank = {c: i for i, c in enumerate(classes)}
        ntypes = (B + 1) ** len(facs)
        tab = np.full(ntypes, len(classes) + 1, dtype=np.int64)
        for code in range(ntypes):
            c, vals = code, []
            for _ in facs:
                vals.append(c % (B + 1))
                c //= B + 1
            vals.reverse()
            d = 1
            for gp, e in zip(self.powers, vals):
                d = _pmul(d, gp[e])
            if d.bit_length() - 1 >= n:
                continue  # the zero element
            tab[code] = self.class_rank.get(self.vclass(d), len(classes))
        self.type_table = tab

    def _vmod(self, arr: np.ndarray, m: int) -> np.ndarray:
        # reduction mod m is linear over GF(2), so it is a few table gathers
        tabs = self._mod_tables.get(m)
        if tabs is None:
            tabs = self._mod_tables[m] = _linear_tables([_pmod(1 << i, m) for i in range(self.n)])
        return _apply_linear(arr, tabs)

    def class_rank_vec(self, arr: np.ndarray) -> np.ndarray:
        code = np.zeros(arr.size, dtype=np.int64)
        for gp in self.powers:
            val = np.zeros(arr.size, dtype=np.int64)
            for j in range(1, self.B + 1):
                val += self._vmod(arr, gp[j]) == 0
            code = code * (self.B + 1) + val
        return self.type_table[code]

    # search

    def _tick(self) -> None:
        self.nodes += 1
        if self.nodes > self.budget.max_nodes or time.monotonic() > self.deadline:
            raise _Stop

    def _stage_filter(self, cand, syn, starts, sizes):
        multi = np.flatnonzero(sizes > 1)
        for s in np.unique(sizes[multi]):
            gidx = multi[sizes[multi] == s]
            S = syn[starts[gidx][:, None] + np.arange(s)[None, :]]
            pos, chunk = 0, 8
            while pos < len(S) and cand.size:
                lim = max(1, int(2**24 // (cand.size * s)))
                ch = S[pos:pos + min(chunk, lim)]
                pos += len(ch)
                chunk *= 2
                par = _popcount(cand[:, None, None] & ch[None, :, :]) & 1
                dead = par.all(axis=2).any(axis=1)
                cand = cand[~dead]
        return cand

    def dfs(self, V: list[int], P: np.ndarray, depth: int, root_rank: int) -> None:
        self._tick()
        if depth > len(self.best):
            self.best = list(V)
            if depth >= self.maxdepth:
                raise _Stop
        if depth >= self.maxdepth:
            return
        r = self.rep[P]
        starts = np.flatnonzero(np.r_[True, r[1:] != r[:-1]])
        sizes = np.diff(np.r_[starts, len(r)])
        singles = P[starts[sizes == 1]]
        forced = _basis_of_set(singles, self.n) if singles.size else []
        allowed = _perp_int(forced + self.cons, self.n)
        cur = _rref_int(V)
        comp = []
        for c in allowed:
            r2 = _rref_int(cur + [c])
            if len(r2) > len(cur):
                comp.append(c)
                cur = r2
        rr = len(comp)
        if rr == 0:
            return
        if rr > 30:
            raise BudgetExceeded("extension space too large for the packed candidate encoding")
        syn = np.zeros(len(P), dtype=np.uint32)
        for i, c in enumerate(comp):
            syn |= (_popcount(P & np.uint32(c)) & 1).astype(np.uint32) << np.uint32(i)
        cand = np.arange(1, 1 << rr, dtype=np.uint32)
        self.stats["candidates"] += int(cand.size)
        if self.red.unit and root_rank > 0:
            words = _apply_linear(cand, _linear_tables(comp[:rr]))
            ok = np.ones(cand.size, dtype=bool)
            for x in _span_np(V).tolist():
                ok &= self.class_rank_vec(words ^ np.uint32(x)) >= root_rank
            cand = cand[ok]
        self.stats["after_class"] += int(cand.size)
        cand = self._stage_filter(cand, syn, starts, sizes)
        self.stats["after_stage"] += int(cand.size)
        for a in cand.tolist():
            w = 0
            for i in range(rr):
                if (a >> i) & 1:
                    w ^= comp[i]
            V2 = V + [w]
            key = self.canon(V2)
            if key in self.seen:
                continue
            self.seen.add(key)
            keep = (_popcount(P & np.uint32(w)) & 1) == 0
            self.dfs(V2, P[keep], depth + 1, root_rank)

    def roots(self) -> list[tuple[int, int]]:
        """(first vector, class rank) pairs to search from."""
        if self.red.unit:
            return [(d, i) for i, d in enumerate(self.classes)]
        Wrows = _perp_int(self.cons, self.n)
        out, seen = [], set()
        for v in _span_np(Wrows).tolist():
            if v == 0:
                continue
            key = self.canon([v])
            if key in seen:
                continue
            seen.add(key)
            out.append((v, 0))
        return out

    def run(self, maxdepth: int) -> bool:
        self.maxdepth = maxdepth
        self.seen: set = set()
        try:
            for v, rk in self.roots():
                P = _span_np(_perp_int([v], self.n))
                P = P[np.argsort(self.rep[P], kind="stable")]
                self.seen.add(self.canon([v]))
                self.dfs([v], P, 1, rk)
                log.info("n=%d root %s done: best %d, nodes %d", self.n, bin(v), len(self.best), self.nodes)
        except _Stop:
            return len(self.best) >= maxdepth
        return True


# -- generic reference search ----------------------------------------------------------


def _digits_table(q: int, n: int) -> np.ndarray:
    codes = np.arange(q ** n, dtype=np.int64)
    out = np.empty((q ** n, n), dtype=np.int64)
    for i in range(n):
        codes, out[:, i] = np.divmod(codes, q)
    return out


def _necklace_ids_q(q: int, n: int) -> np.ndarray:
    N = q ** n
    cur = np.arange(N, dtype=np.int64)
    rep = cur.copy()
    top = q ** (n - 1)
    for _ in range(1, n):
        cur = (cur * q) % N + cur // top
        np.minimum(rep, cur, out=rep)
    return rep


def _canon_vecs(V: Sequence[CycVec], amb: Ambient, red: Reductions) -> tuple:
    from .gf import rref, scale_indices, shift

    units = units_mod(amb.n) if red.scaling else [1]
    shifts = range(amb.n) if red.shift else range(1)
    best = None
    for l in units:
        Vl = [scale_indices(v, l) for v in V]
        for k in shifts:
            key = tuple(r.coords for r in rref([shift(v, k) for v in Vl], amb))
            if best is None or key < best:
                best = key
    return best


def h_exact_reference(
    q: int, n: int, budget: SearchBudget | None = None, reductions: Reductions | None = None
) -> HResult:
    """Plain depth-first search for any supported q.

    Every nonzero vector is a candidate extension; a node survives when every
    necklace meets the orthogonal complement.  No unit action or W(n)
    shortcut is used, which keeps this route independent of the binary
    engine.
    """
    budget = budget or SearchBudget()
    red = reductions or Reductions(unit=False)
    amb = Ambient(q, n)
    if q ** n > 2 ** budget.max_map_bits:
        raise BudgetExceeded(f"{q}^{n} exceeds 2^{budget.max_map_bits}")
    t0 = time.monotonic()
    digits = _digits_table(q, n)
    rep = _necklace_ids_q(q, n)
    n_orbits = np.unique(rep).size
    maxdepth = log_bound(q, n)
    best: list[CycVec] = []
    seen: set = set()
    nodes = [0]
    vecs = [CycVec.from_code(amb, c) for c in range(1, q ** n)]

    def dfs(V: list[CycVec], alive: np.ndarray) -> None:
        nonlocal best
        nodes[0] += 1
        if nodes[0] > budget.max_nodes or time.monotonic() - t0 > budget.time_limit:
            raise _Stop
        if len(V) > len(best):
            best = list(V)
            if len(best) >= maxdepth:
                raise _Stop
        if len(V) >= maxdepth:
            return
        for w in vecs:
            if V and rank(V + [w], amb) == len(V):
                continue
            keep = alive & ((digits @ np.asarray(w.coords, dtype=np.int64)) % q == 0)
            if np.unique(rep[keep]).size != n_orbits:
                continue
            key = _canon_vecs(V + [w], amb, red)
            if key in seen:
                continue
            seen.add(key)
            dfs(V + [w], keep)

    complete = True
    try:
        dfs([], np.ones(q ** n, dtype=bool))
    except _Stop:
        complete = len(best) >= maxdepth
    witness = Basis.span_of(best, amb)
    return HResult(q, n, len(best), witness, complete, nodes[0], time.monotonic() - t0)


# -- public entry point ------------------------------------------------------------------


def h_exact(
    q: int,
    n: int,
    budget: SearchBudget | None = None,
    reductions: Reductions | None = None,
    verify: bool = True,
) -> HResult:
    """Largest ``m`` admitting ``m`` independent vectors that work together.

    Raises :class:`BudgetExceeded` when ``q^n`` is over the map budget.  When
    the node or time limit interrupts the search, the returned result has
    ``complete = False`` and ``value`` is a verified lower bound.
    """
    budget = budget or SearchBudget.from_env()
    reductions = reductions or Reductions()
    amb = Ambient(q, n)
    if q ** n > 2 ** budget.max_map_bits:
        raise BudgetExceeded(f"{q}^{n} exceeds the budget of 2^{budget.max_map_bits} entries")
    if q != 2:
        res = h_exact_reference(q, n, budget, reductions)
    elif n > 31:
        raise BudgetExceeded("the binary engine packs vectors in 32-bit words")
    else:
        t0 = time.monotonic()
        eng = _BinaryEngine(n, budget, reductions)
        complete = eng.run(log_bound(2, n))
        rows = [CycVec(amb, v) for v in eng.best]
        res = HResult(
            2, n, len(rows), Basis.span_of(rows, amb), complete, eng.nodes,
            time.monotonic() - t0, dict(eng.stats),
        )
    if verify and res.value:
        if rank(list(res.witness.rows), amb) != res.value:
            raise AssertionError("search witness rows are dependent")
        if not works_together(res.witness, budget.max_map_bits).covers:
            raise AssertionError("search witness does not work together")
    return res


# -- product construction ----------------------------------------------------------------


def _lift_repeat_each(v: CycVec, copies: int, amb: Ambient) -> CycVec:
    """Each coordinate of ``v`` repeated ``copies`` times in a row."""
    return CycVec.from_coords(amb, [c for c in v.coords for _ in range(copies)])


def _lift_tile(w: CycVec, copies: int, amb: Ambient) -> CycVec:
    """``w`` written ``copies`` times end to end."""
    return CycVec.from_coords(amb, list(w.coords) * copies)


def product_construction(
    V: Basis | Sequence[CycVec],
    W: Basis | Sequence[CycVec],
    m: int | None = None,
    n: int | None = None,
    budget_bits: int | None = None,
    check: bool = True,
) -> Basis:
    """Working vectors for length ``m*n`` from working families at ``m`` and ``n``."""
    Vrows = list(V.rows if isinstance(V, Basis) else V)
    Wrows = list(W.rows if isinstance(W, Basis) else W)
    if m is None:
        m = V.ambient.n if isinstance(V, Basis) else Vrows[0].n
    if n is None:
        n = W.ambient.n if isinstance(W, Basis) else Wrows[0].n
    if any(r.q != 2 for r in Vrows + Wrows):
        raise PreconditionError("the product construction is binary")
    if any(r.n != m for r in Vrows) or any(r.n != n for r in Wrows):
        raise PreconditionError("row lengths do not match m and n")
    if m * n > 63:
        raise BudgetExceeded("m*n exceeds the single-word representation cap")
    big = Ambient(2, m * n)
    bits = default_budget_bits() if budget_bits is None else budget_bits
    if check:
        for rows, length in ((Vrows, m), (Wrows, n)):
            if rows and 2 ** length <= 2 ** bits:
                if not works_together(Basis.span_of(rows), bits).covers:
                    raise PreconditionError(f"the length-{length} family does not work together")
    out = [_lift_repeat_each(v, n, big) for v in Vrows] + [_lift_tile(w, m, big) for w in Wrows]
    if rank(out, big) != len(out):
        raise AssertionError("lifted vectors are dependent")
    if check and out and 2 ** (m * n) <= 2 ** bits:
        if not works_together(Basis.span_of(out), bits).covers:
            raise AssertionError("lifted family does not work together")
    return Basis.span_of(out, big) if out else Basis(big, ())
