"""Circulant digraphs G_v, girth, and bad-subgraph certificates.

For binary ``v`` with ``v_0 = 0`` the digraph ``G_v`` on ``Z/nZ`` has an arc
``i -> i + a`` for each ``a`` in ``A = supp(v)``.  At odd ``n`` the pair
``(ê, v)`` fails to work together exactly when some odd-order induced
subgraph has every outdegree odd (or every indegree odd).  Certificates are
extracted from an uncovered witness of the coverage oracle rather than by
enumerating subgraphs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .covering import find_uncovered_witness
from .errors import PreconditionError
from .gf import Ambient, CycVec, is_small

COLOURS = ("red", "blue", "green")


@dataclass(frozen=True)
class CirculantDigraph:
    n: int
    A: frozenset[int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "A", frozenset(a % self.n for a in self.A))
        if 0 in self.A:
            raise PreconditionError("0 cannot be a generator")

    @classmethod
    def from_vec(cls, v: CycVec) -> "CirculantDigraph":
        if v.q != 2:
            raise PreconditionError("Cayley digraphs are built from binary vectors")
        return cls(v.n, frozenset(v.support))

    @property
    def A0(self) -> frozenset[int]:
        return self.A | {0}

    def has_arc(self, i: int, j: int) -> bool:
        return (j - i) % self.n in self.A

    def girth(self) -> int:
        return girth(self)


def _mask(s: Iterable[int], n: int) -> int:
    m = 0
    for a in s:
        m |= 1 << (a % n)
    return m


def _members(mask: int) -> set[int]:
    out = set()
    i = 0
    while mask:
        if mask & 1:
            out.add(i)
        mask >>= 1
        i += 1
    return out


def _sum_masks(a: int, b: int, n: int) -> int:
    full = (1 << n) - 1
    out = 0
    i = 0
    while a:
        if a & 1:
            out |= ((b << i) | (b >> (n - i))) & full
        a >>= 1
        i += 1
    return out


def sumset(A: Iterable[int], B: Iterable[int], n: int) -> set[int]:
    return _members(_sum_masks(_mask(A, n), _mask(B, n), n))


def iterated_sumset(A: Iterable[int], k: int, n: int) -> set[int]:
    """``kA = A + ... + A`` (k copies); ``0A = {0}``."""
    a = _mask(A, n)
    acc = 1
    for _ in range(k):
        acc = _sum_masks(acc, a, n)
    return _members(acc)


def girth(g: CirculantDigraph) -> int:
    """Least ``k >= 1`` with ``0`` in the k-fold sumset of ``A``."""
    if not g.A:
        raise PreconditionError("girth needs a nonempty generator set")
    a = _mask(g.A, g.n)
    layer = a
    for k in range(1, g.n + 1):
        if layer & 1:
            return k
        layer = _sum_masks(layer, a, g.n)
    raise AssertionError("a nonempty generator set always closes a cycle within n steps")


def size_bounds_hold(g: CirculantDigraph) -> bool:
    """``n/k < |A| < n/(k-1)`` for girth ``k``."""
    k = girth(g)
    return g.n < len(g.A) * k and (k == 1 or len(g.A) * (k - 1) < g.n)


def zero_free_sum(g: CirculantDigraph) -> bool:
    """``0`` is not in ``(k-2)A_0 + A`` for girth ``k`` (``k >= 2``)."""
    k = girth(g)
    if k < 2:
        return False
    return 0 not in sumset(iterated_sumset(g.A0, k - 2, g.n), g.A, g.n)


# -- progressions ----------------------------------------------------------------


def _ap_start(s: set[int], d: int, n: int) -> int | None:
    """Start of ``s`` as a progression with difference ``d``, if it is one."""
    L = len(s)
    starts = [a for a in s if (a - d) % n not in s]
    if len(starts) > 1:
        return None
    # No start at all means s is a union of cosets of <d>; then only a single
    # coset qualifies and any element may serve as the start.
    start = starts[0] if starts else min(s)
    if {(start + j * d) % n for j in range(L)} == s:
        return start
    return None


def is_arithmetic_progression(A: Iterable[int], n: int) -> tuple[int, int, int] | None:
    """Return ``(start, diff, length)`` with ``diff`` in ``[1, n/2]`` if ``A`` is an AP mod n."""
    s = {a % n for a in A}
    if not s:
        raise PreconditionError("empty set")
    if len(s) == 1:
        return (next(iter(s)), 1, 1)
    for d in range(1, n // 2 + 1):
        start = _ap_start(s, d, n)
        if start is not None:
            return (start, d, len(s))
    return None


def is_almost_progression(
    A: Iterable[int], n: int
) -> tuple[int, int, int, int | None] | None:
    """An AP with at most one interior term missing.

    Returns ``(start, diff, length, missing)`` for the completed progression;
    ``missing`` is ``None`` when ``A`` is already an AP.
    """
    s = {a % n for a in A}
    ap = is_arithmetic_progression(s, n)
    if ap is not None:
        return (*ap, None)
    for d in range(1, n // 2 + 1):
        for t in range(n):
            if t in s:
                continue
            full = s | {t}
            start = _ap_start(full, d, n)
            if start is None:
                continue
            if t != start and t != (start + (len(full) - 1) * d) % n:
                return (start, d, len(full), t)
    return None


# -- bad subgraphs -------------------------------------------------------------------


@dataclass(frozen=True)
class BadSubgraphCert:
    n: int
    vertices: tuple[int, ...]
    mode: str = "out"
    colors: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]] | None = None

    def to_json(self) -> dict:
        colors = None
        if self.colors is not None:
            colors = {c: list(g) for c, g in zip(COLOURS, self.colors)}
        return {"n": self.n, "vertices": list(self.vertices), "mode": self.mode, "colors": colors}

    @classmethod
    def from_json(cls, d: dict) -> "BadSubgraphCert":
        colors = d.get("colors")
        if colors is not None:
            colors = tuple(tuple(colors[c]) for c in COLOURS)
        return cls(int(d["n"]), tuple(d["vertices"]), d.get("mode", "out"), colors)


def _degree(S: frozenset[int], i: int, gens: Iterable[int], n: int, mode: str) -> int:
    if mode == "out":
        return sum(1 for a in gens if (i + a) % n in S)
    return sum(1 for a in gens if (i - a) % n in S)


def verify_bad_subgraph(v: CycVec, cert: BadSubgraphCert) -> bool:
    """Check cardinality parity and the per-vertex degree condition.

    Uncoloured certificates need every vertex of odd degree in ``G_v``.
    Coloured certificates carry their generator classes; the red and green
    classes together must equal ``supp(v)``, and at every vertex the three
    colour degrees must not share a parity.
    """
    n = cert.n
    if v.q != 2 or v.n != n or cert.mode not in ("out", "in"):
        return False
    S = frozenset(x % n for x in cert.vertices)
    if len(S) != len(cert.vertices) or len(S) % 2 == 0:
        return False
    if cert.colors is None:
        A = v.support
        return all(_degree(S, i, A, n, cert.mode) % 2 == 1 for i in S)
    red, blue, green = (frozenset(c) for c in cert.colors)
    if red | green != frozenset(v.support) or red & green or red & blue or blue & green:
        return False
    if 0 in red | blue | green:
        return False
    for i in S:
        par = {_degree(S, i, cls, n, cert.mode) % 2 for cls in (red, blue, green)}
        if len(par) == 1:
            return False
    return True


def negate_vertices(cert: BadSubgraphCert, n: int | None = None) -> BadSubgraphCert:
    """Map ``S`` to ``-S`` and swap out/in degrees; validity is preserved."""
    n = cert.n if n is None else n
    verts = tuple(sorted((-x) % n for x in cert.vertices))
    return BadSubgraphCert(n, verts, "in" if cert.mode == "out" else "out", cert.colors)


def _check_pair_input(v: CycVec) -> None:
    if v.q != 2:
        raise PreconditionError("bad subgraphs are defined for q = 2")
    if v.n % 2 == 0:
        raise PreconditionError("the bad-subgraph equivalence needs odd n")
    if v[0] != 0:
        raise PreconditionError("v_0 must be 0")


def _odd_support(x: CycVec, adjust: bool) -> tuple[int, ...]:
    if x.weight % 2 == 0:
        if not adjust:
            raise AssertionError("uncovered witness of even weight cannot be adjusted")
        x = x + CycVec.ones(x.ambient)
    return x.support


def find_bad_subgraph(v: CycVec, budget_bits: int | None = None) -> BadSubgraphCert | None:
    """A bad subgraph of ``G_v`` or ``None`` when ``(ê, v)`` work together."""
    _check_pair_input(v)
    amb = v.ambient
    x = find_uncovered_witness([CycVec.e_hat(amb), v], budget_bits)
    if x is None:
        return None
    n = v.n
    if v.weight % 2 == 1:
        cert = BadSubgraphCert(n, tuple(range(n)), "out")
    else:
        cert = BadSubgraphCert(n, _odd_support(x, adjust=True), "out")
    if not verify_bad_subgraph(v, cert):
        raise AssertionError("extracted certificate does not validate")
    return cert


def find_bad_subgraph_colored(
    v: CycVec, w: CycVec, budget_bits: int | None = None
) -> BadSubgraphCert | None:
    """Coloured certificate for the triple ``(ê, v, w)``, or ``None`` if it works."""
    _check_pair_input(v)
    _check_pair_input(w)
    if v.ambient != w.ambient:
        raise PreconditionError("v and w live in different ambient spaces")
    for u in (v, w, v + w):
        if not is_small(u):
            raise PreconditionError(f"{u.literal()} is not small")
    amb = v.ambient
    x = find_uncovered_witness([CycVec.e_hat(amb), v, w], budget_bits)
    if x is None:
        return None
    Av, Aw = set(v.support), set(w.support)
    colors = (
        tuple(sorted(Av - Aw)),
        tuple(sorted(Aw - Av)),
        tuple(sorted(Av & Aw)),
    )
    n = v.n
    if v.weight % 2 or w.weight % 2:
        verts = tuple(range(n))
    else:
        verts = _odd_support(x, adjust=True)
    cert = BadSubgraphCert(n, verts, "out", colors)
    if not verify_bad_subgraph(v, cert):
        raise AssertionError("extracted coloured certificate does not validate")
    return cert


def parse_generators(text: str, n: int) -> frozenset[int]:
    from .errors import LiteralError

    try:
        gens = [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise LiteralError(f"malformed generator list {text!r}") from exc
    return frozenset(g % n for g in gens)


def vec_from_generators(A: Iterable[int], n: int) -> CycVec:
    amb = Ambient(2, n)
    coords = [0] * n
    for a in A:
        coords[a % n] = 1
    return CycVec.from_coords(amb, coords)
