import re

import pytest

from cyccover.bounds import BoundsRecord, bounds, divisors, table, table_csv
from cyccover.errors import PreconditionError
from cyccover.search import SearchBudget, h_exact

# (lower, upper) for h_2(n), n = 1..29, as published.
TABLE1 = {
    1: (0, 0), 2: (0, 0), 3: (1, 1), 4: (0, 0), 5: (2, 2), 6: (2, 2), 7: (2, 2),
    8: (0, 0), 9: (3, 3), 10: (2, 2), 11: (2, 2), 12: (3, 3), 13: (2, 2), 14: (3, 3),
    15: (3, 3), 16: (0, 0), 17: (4, 4), 18: (3, 3), 19: (2, 2), 20: (3, 3), 21: (3, 4),
    22: (2, 4), 23: (3, 3), 24: (3, 3), 25: (4, 4), 26: (2, 4), 27: (4, 4), 28: (3, 4),
    29: (2, 2),
}
# Rows whose published reasons are theorems only, plus the open rows 21, 22, 26.
THEOREM_ROWS = [3, 4, 5, 7, 8, 9, 11, 13, 15, 16, 17, 19, 21, 22, 25, 26, 27, 29]


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(49) == [1, 7, 49]
    with pytest.raises(PreconditionError):
        divisors(0)


def test_bounds_examples():
    assert (bounds(2, 21).lower, bounds(2, 21).upper) == (3, 4)
    r = bounds(2, 29)
    assert (r.lower, r.upper) == (2, 2) and "ArtinExact" in r.upper_rules
    assert (bounds(2, 16).lower, bounds(2, 16).upper) == (0, 0)
    r = bounds(2, 25)
    assert (r.lower, r.upper) == (4, 4) and "ProductBound(5,5)" in r.lower_rules
    assert (bounds(2, 22).lower, bounds(2, 22).upper) == (2, 4)


def test_rule_engine_matches_theorem_rows():
    for n in THEOREM_ROWS:
        r = bounds(2, n)
        assert (r.lower, r.upper) == TABLE1[n], n


def test_rule_engine_sound_for_open_rows():
    for n, (lo, up) in TABLE1.items():
        r = bounds(2, n)
        assert r.lower <= lo and up <= r.upper, n


def test_general_q_rules():
    assert (bounds(3, 4).lower, bounds(3, 4).upper) == (0, 1)
    r = bounds(3, 8)
    assert (r.lower, r.upper) == (1, 1) and "QdMinusOne(2)" in r.lower_rules
    r = bounds(3, 5)
    assert r.upper == 0 and "ArtinZero" in r.upper_rules
    assert bounds(3, 9).upper == 0
    assert bounds(3, 27).upper == 0


def test_rule_tags_are_well_formed():
    pattern = re.compile(r"^[A-Z][A-Za-z]+(\([^()]*\))?$")
    for n in range(1, 30):
        r = bounds(2, n)
        for tag in r.lower_rules + r.upper_rules:
            assert pattern.match(tag), tag
    assert "ProductBound(3,5)" in bounds(2, 15).lower_rules
    assert "GeometricSeries(4,1)" in bounds(2, 17).lower_rules


@pytest.mark.parametrize("n", range(1, 15))
def test_rule_engine_contains_exact_value(n):
    r = bounds(2, n)
    v = h_exact(2, n).value
    assert r.lower <= v <= r.upper
    for q in (3, 5):
        if q ** n <= 2 ** 14:
            r = bounds(q, n)
            assert r.lower <= h_exact(q, n).value <= r.upper


def test_known_records_tighten():
    known = {(2, 10): BoundsRecord(2, 10, 2, 2, ["BruteForce(x)"], ["BruteForce(x)"])}
    r = bounds(2, 20, known)
    assert r.upper == 4 and "Halving(10)" in r.upper_rules


def test_table_without_escalation():
    rows = table(2, 29)
    assert [r.n for r in rows] == list(range(1, 30))
    for r in rows:
        if r.n in THEOREM_ROWS:
            assert (r.lower, r.upper) == TABLE1[r.n]


def test_table_escalation_small():
    rows = table(2, 14, escalate=True)
    for r in rows:
        assert r.exact and (r.lower, r.upper) == TABLE1[r.n]
    assert any(t.startswith("BruteForce(") for t in rows[5].lower_rules)


def test_table_escalation_budget_marks_incomplete():
    rows = table(2, 12, escalate=True, budget=SearchBudget(max_map_bits=8))
    assert rows[9].incomplete and not rows[9].exact  # 2^10 > 2^8
    assert rows[5].exact and not rows[5].incomplete


def test_csv_and_json():
    rows = table(2, 5)
    text = table_csv(rows)
    assert text.splitlines()[0] == "q,n,lower,upper,lower_rules,upper_rules"
    assert len(text.splitlines()) == 6
    for r in rows:
        assert BoundsRecord.from_json(r.to_json()) == r
