"""Rule engine for intervals containing h_q(n).

Each rule contributes a lower or an upper bound together with a tag that
names the rule and its parameters.  Rules only look at proper divisors of
``n``, so a single pass over the divisors in increasing order reaches the
fixed point; the loop still iterates until nothing changes, which keeps it
correct if a rule that looks sideways is ever added.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .errors import BudgetExceeded, PreconditionError
from .gf import SUPPORTED_Q, is_prime
from .polyring import multiplicative_order
from .search import HResult, SearchBudget, h_exact, log_bound

DIVISOR_CAP = 10**6


@dataclass
class BoundsRecord:
    q: int
    n: int
    lower: int
    upper: int
    lower_rules: list[str] = field(default_factory=list)
    upper_rules: list[str] = field(default_factory=list)
    incomplete: bool = False

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def to_json(self) -> dict:
        d = {
            "q": self.q,
            "n": self.n,
            "lower": self.lower,
            "upper": self.upper,
            "lower_rules": list(self.lower_rules),
            "upper_rules": list(self.upper_rules),
        }
        if self.incomplete:
            d["incomplete"] = True
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "BoundsRecord":
        return cls(
            int(d["q"]), int(d["n"]), int(d["lower"]), int(d["upper"]),
            list(d.get("lower_rules", [])), list(d.get("upper_rules", [])),
            bool(d.get("incomplete", False)),
        )


def divisors(n: int) -> list[int]:
    if n < 1 or n > DIVISOR_CAP:
        raise PreconditionError(f"n must lie in [1, {DIVISOR_CAP}]")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def _power_of(n: int, q: int) -> int | None:
    d = 0
    while n % q == 0:
        n //= q
        d += 1
    return d if n == 1 else None


def _geometric_params(q: int, n: int) -> list[tuple[int, int]]:
    """All ``(k, d)`` with ``d >= 1``, ``n = sum_{r<=d} q^(kr)`` and ``gcd(d+1, q^k-1) = 1``."""
    out = []
    k = 1
    while q ** k < n:
        total, d = 1, 0
        while total < n:
            d += 1
            total += q ** (k * d)
        if total == n and d >= 1 and math.gcd(d + 1, q ** k - 1) == 1:
            out.append((k, d))
        k += 1
    return out


def _theorem_bounds(q: int, n: int) -> tuple[list[tuple[int, str]], list[tuple[int, str]]]:
    """Bounds that need no other rows: returns (lowers, uppers)."""
    lows: list[tuple[int, str]] = [(0, "Trivial")]
    ups: list[tuple[int, str]] = [(log_bound(q, n), "LogBound")]
    if _power_of(n, q) is not None:
        ups.append((0, "PowerOfCharZero"))
    d = _power_of(n + 1, q)
    if d is not None and d >= 1:
        lows.append((d - 1, f"QdMinusOne({d})"))
        ups.append((d - 1, f"QdMinusOne({d})"))
    for k, dd in _geometric_params(q, n):
        lows.append((k * dd, f"GeometricSeries({k},{dd})"))
        ups.append((k * dd, f"GeometricSeries({k},{dd})"))
    if q == 2:
        if n % 2 == 1 and n > 3:
            lows.append((2, "OddAtLeastTwo"))
        if _power_of(n, 2) is None:
            lows.append((1, "NonzeroWorks"))
        if n > 2 and is_prime(n) and multiplicative_order(2, n) == n - 1:
            ups.append((2, "ArtinExact"))
            if n > 3:
                lows.append((2, "ArtinExact"))
    elif is_prime(n) and n > q and multiplicative_order(q, n) == n - 1:
        ups.append((0, "ArtinZero"))
    return lows, ups


def _combine(cands: list[tuple[int, str]], best: Callable) -> tuple[int, list[str]]:
    value = best(v for v, _ in cands)
    tags = [t for v, t in cands if v == value]
    return value, sorted(set(tags), key=tags.index)


def bounds(
    q: int,
    n: int,
    known: Mapping[tuple[int, int], BoundsRecord] | None = None,
) -> BoundsRecord:
    """Best interval for ``h_q(n)`` from the rules plus ``known`` records."""
    return _bounds_all(q, n, known or {})[n]


def _bounds_all(q: int, n: int, known: Mapping) -> dict[int, BoundsRecord]:
    if q not in SUPPORTED_Q:
        raise PreconditionError(f"unsupported q={q}")
    divs = divisors(n)
    recs: dict[int, BoundsRecord] = {}
    changed = True
    while changed:
        changed = False
        for d in divs:
            lows, ups = _theorem_bounds(q, d)
            for m in divisors(d):
                k = d // m
                if m == 1 or k == 1 or m > k:
                    continue
                if m in recs and k in recs:
                    lows.append((recs[m].lower + recs[k].lower, f"ProductBound({m},{k})"))
            if d % q == 0 and d // q in recs:
                tag = "Halving" if q == 2 else "CharMultiple"
                ups.append((q * recs[d // q].upper, f"{tag}({d // q})"))
            rec = known.get((q, d))
            if rec is not None:
                lows.append((rec.lower, _known_tag(rec.lower_rules)))
                ups.append((rec.upper, _known_tag(rec.upper_rules)))
            lo, lo_tags = _combine(lows, max)
            up, up_tags = _combine(ups, min)
            if lo > up:
                raise AssertionError(f"inconsistent bounds for h_{q}({d}): {lo} > {up}")
            old = recs.get(d)
            new = BoundsRecord(q, d, lo, up, lo_tags, up_tags)
            if old is None or (old.lower, old.upper) != (lo, up):
                changed = True
            recs[d] = new
    return recs


def _known_tag(rules: list[str]) -> str:
    for r in rules:
        if r.startswith("BruteForce"):
            return r
    return rules[0] if rules else "Cached"


def brute_force_tag(res: HResult) -> str:
    return "BruteForce(" + ",".join(res.witness.literals()) + ")"


def table(
    q: int,
    max_n: int,
    escalate: bool = False,
    budget: SearchBudget | None = None,
    known: Mapping[tuple[int, int], BoundsRecord] | None = None,
    progress: Callable[[BoundsRecord], None] | None = None,
) -> list[BoundsRecord]:
    """Rows ``n = 1..max_n``; escalation settles open rows by exact search."""
    budget = budget or SearchBudget.from_env()
    cache: dict[tuple[int, int], BoundsRecord] = dict(known or {})
    rows = []
    for n in range(1, max_n + 1):
        rec = bounds(q, n, cache)
        if escalate and rec.lower < rec.upper:
            try:
                res = h_exact(q, n, budget)
            except BudgetExceeded:
                rec.incomplete = True
            else:
                tag = brute_force_tag(res)
                if res.complete:
                    exact = BoundsRecord(q, n, res.value, res.value, [tag], [tag])
                else:
                    exact = BoundsRecord(q, n, res.value, rec.upper, [tag], rec.upper_rules)
                cache[(q, n)] = exact
                rec = bounds(q, n, cache)
                rec.incomplete = not res.complete
        if rec.exact or (q, n) in cache:
            cache[(q, n)] = rec
        rows.append(rec)
        if progress:
            progress(rec)
    return rows


def table_csv(rows: Iterable[BoundsRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["q", "n", "lower", "upper", "lower_rules", "upper_rules"])
    for r in rows:
        w.writerow([r.q, r.n, r.lower, r.upper, ";".join(r.lower_rules), ";".join(r.upper_rules)])
    return buf.getvalue()
