"""Search for non-symmetric binary ``v`` that work together with ê.

Candidates are processed in vectorized chunks through a chain of filters,
each one a necessary condition for ``(ê, v)`` to work together:

1. ``v_0 = 0``;
2. even weight (``v`` must work on its own);
3. ``v`` not symmetric (symmetric ones are not exceptions);
4. ``v`` is the least element of its orbit under index scaling and
   ``v -> v + ê`` (orbits are expanded again when reporting);
5. weight-3 probes ``x = e_0 + e_a + e_b``: at odd n the only shifts with
   ``ê . s^k x = 0`` are ``k in {0, -a, -b}``, so ``x`` is uncovered when
   ``v`` has odd inner product with all three of those shifts;
6. replay of uncovered witnesses found by earlier oracle calls;
7. the full coverage oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .covering import check_budget, works_together
from .errors import PreconditionError
from .gf import Ambient, CycVec, is_symmetric, scale_indices, units_mod
from .search import _popcount

FILTERS = ("v0", "even", "nonsymmetric", "orbit", "probes", "witnesses", "oracle")
CHUNK = 1 << 20


@dataclass
class ConjectureReport:
    n: int
    candidates_scanned: int
    exceptions: list[CycVec]
    orbits: list[list[CycVec]]
    filter_stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "exceptions": [v.literal() for v in self.exceptions],
            "orbits": [[v.literal() for v in o] for o in self.orbits],
            "scanned": self.candidates_scanned,
            "filter_stats": dict(self.filter_stats),
        }


def _bit(arr: np.ndarray, i: int) -> np.ndarray:
    return (arr >> np.uint32(i)) & np.uint32(1)


def _scale_codes(arr: np.ndarray, ell: int, n: int) -> np.ndarray:
    out = np.zeros_like(arr)
    for i in range(n):
        out |= _bit(arr, (ell * i) % n) << np.uint32(i)
    return out


def _rot_codes(arr: np.ndarray, k: int, n: int) -> np.ndarray:
    k %= n
    if k == 0:
        return arr
    mask = np.uint32((1 << n) - 1)
    return ((arr << np.uint32(k)) | (arr >> np.uint32(n - k))) & mask


def _uncovered_by(cand: np.ndarray, x: CycVec) -> np.ndarray:
    """Mask of candidates ``v`` for which ``x`` is uncovered by ``(ê, v)``."""
    n = x.n
    xs = x.data
    wx = x.weight
    dead = np.ones(cand.size, dtype=bool)
    for k in range(n):
        # shift(x, k) has coordinate 0 equal to x_{-k}.
        e_dot = (wx - ((xs >> ((-k) % n)) & 1)) % 2
        if e_dot:
            continue
        rot = np.uint32((((xs << k) | (xs >> (n - k))) & ((1 << n) - 1)) if k else xs)
        dead &= (_popcount(cand & rot) & 1).astype(bool)
    return dead


def exception_orbits(exceptions: list[CycVec]) -> list[list[CycVec]]:
    """Group exceptions under index scalings and adding ê."""
    remaining = set(exceptions)
    orbits = []
    for v in sorted(exceptions, key=CycVec.sort_key):
        if v not in remaining:
            continue
        orb = orbit_of(v)
        orbits.append(sorted(orb, key=CycVec.sort_key))
        remaining -= orb
    return orbits


def orbit_of(v: CycVec) -> set[CycVec]:
    e = CycVec.e_hat(v.ambient)
    out = set()
    for ell in units_mod(v.n):
        s = scale_indices(v, ell)
        out.add(s)
        out.add(s + e)
    return out


def verify_conjecture(
    n: int,
    budget_bits: int | None = None,
    filters: tuple[str, ...] = FILTERS,
) -> ConjectureReport:
    """All non-symmetric ``v`` with ``v_0 = 0`` that work together with ê.

    ``filters`` selects which optional stages run; ``v0`` and ``oracle`` are
    part of the definition and always apply.
    """
    if n % 2 == 0 or n < 1:
        raise PreconditionError("the conjecture concerns odd n")
    amb = Ambient(2, n)
    check_budget(amb, budget_bits)
    if n > 31:
        raise PreconditionError("n too large for packed candidates")
    e = CycVec.e_hat(amb)
    ecode = np.uint32(e.data)
    units = units_mod(n)
    pairs = [(a, b) for a in range(1, n) for b in range(a + 1, n)]
    stats = {f: 0 for f in FILTERS}
    witnesses: list[CycVec] = []
    reps: list[CycVec] = []
    scanned = 0
    total = 1 << (n - 1)
    for start in range(0, total, CHUNK):
        t = np.arange(start, min(total, start + CHUNK), dtype=np.uint32)
        cand = t << np.uint32(1)  # v_0 = 0
        scanned += cand.size
        stats["v0"] += cand.size
        if "even" in filters:
            cand = cand[(_popcount(cand) & 1) == 0]
            stats["even"] += cand.size
        if "nonsymmetric" in filters:
            cand = cand[_scale_codes(cand, -1, n) != cand]
            stats["nonsymmetric"] += cand.size
        if "orbit" in filters:
            keep = np.ones(cand.size, dtype=bool)
            for ell in units:
                s = _scale_codes(cand, ell, n)
                keep &= (s >= cand) & ((s ^ ecode) >= cand)
            cand = cand[keep]
            stats["orbit"] += cand.size
        if "probes" in filters:
            for a, b in pairs:
                if cand.size == 0:
                    break
                s1 = _bit(cand, a) ^ _bit(cand, b)
                s2 = _bit(cand, (-a) % n) ^ _bit(cand, (b - a) % n)
                s3 = _bit(cand, (-b) % n) ^ _bit(cand, (a - b) % n)
                cand = cand[(s1 & s2 & s3) == 0]
            stats["probes"] += cand.size
        for code in cand.tolist():
            v = CycVec(amb, code)
            if "witnesses" in filters and any(
                _uncovered_by(np.array([code], dtype=np.uint32), x)[0] for x in witnesses
            ):
                continue
            stats["witnesses"] += 1
            rep = works_together([e, v], budget_bits)
            if rep.covers:
                stats["oracle"] += 1
                reps.append(v)
            elif "witnesses" in filters:
                witnesses.append(rep.witness)
                witnesses.sort(key=CycVec.sort_key)
    if "orbit" in filters:
        expanded = set()
        for v in reps:
            expanded |= orbit_of(v)
    else:
        expanded = set(reps)
    # Symmetry is invariant under both orbit actions, so whole orbits drop
    # out here when the nonsymmetric filter was skipped.
    expanded = {v for v in expanded if not is_symmetric(v)}
    exceptions = sorted(
        (v for v in expanded if works_together([e, v], budget_bits).covers),
        key=CycVec.sort_key,
    )
    if len(exceptions) != len(expanded):
        raise AssertionError("an orbit image failed the oracle")
    return ConjectureReport(n, scanned, exceptions, exception_orbits(exceptions), stats)
