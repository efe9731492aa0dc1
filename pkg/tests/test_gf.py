import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyccover.errors import AmbientMismatch, LiteralError, PreconditionError
from cyccover.gf import (
    Ambient,
    Basis,
    CycVec,
    dot,
    is_small,
    is_symmetric,
    kernel,
    rank,
    reverse,
    scale_indices,
    shift,
    units_mod,
    weight_sum,
)

from oracles import dot_coords, shift_coords


def V(s, q=2):
    return CycVec.parse(s, q)


@st.composite
def vectors(draw, q=None, n=None, max_n=10):
    q = q or draw(st.sampled_from([2, 3, 5]))
    n = n or draw(st.integers(1, max_n))
    coords = draw(st.lists(st.integers(0, q - 1), min_size=n, max_size=n))
    return CycVec.from_coords(Ambient(q, n), coords)


def test_shift_examples():
    assert shift(V("100"), 1) == V("010")
    x = V("0110000")
    assert shift(x, 7) == x
    # support {1, 2} moves to {4, 5}
    assert shift(x, 3).literal() == "0000110"


def test_shift_matches_index_formula():
    x = V("0110000")
    assert shift(x, 3).coords == shift_coords(x.coords, 3)
    assert shift(V("0110000"), -4) == shift(x, 3)


def test_dot_and_weight_examples():
    amb = Ambient(2, 7)
    e = CycVec.e_hat(amb)
    assert dot(e, CycVec.unit(amb, 0)) == 0
    assert dot(e, CycVec.ones(amb)) == 0
    assert dot(V("120", 3), V("221", 3)) == 0
    assert weight_sum(e) == 0
    assert weight_sum(V("100")) == 1
    assert weight_sum(CycVec.ones(Ambient(3, 5))) == 2


def test_dot_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        dot(V("10"), V("100"))


def test_scale_indices_examples():
    x = V("0110000")
    assert scale_indices(x, 1) == x
    assert scale_indices(x, -1).literal() == "0000011"
    # result[i] = x[3i mod 7]: indices 3 and 5 pick up x_2 and x_1.
    assert scale_indices(x, 3).literal() == "0001010"
    assert scale_indices(x, 3).coords == tuple(x.coords[(3 * i) % 7] for i in range(7))
    with pytest.raises(PreconditionError):
        scale_indices(V("011000"), 2)


def test_symmetric_and_small_examples():
    assert is_symmetric(V("01001"))
    for n in range(1, 12):
        assert is_symmetric(CycVec.e_hat(Ambient(2, n)))
    assert not is_symmetric(V("0110000"))
    assert is_small(V("0110000"))
    assert not is_small(CycVec.e_hat(Ambient(2, 5)))
    assert is_small(CycVec.zero(Ambient(2, 6)))
    with pytest.raises(PreconditionError):
        is_small(V("012", 3))


def test_literal_parsing():
    assert V("0110000").coords == (0, 1, 1, 0, 0, 0, 0)
    assert V("0110000").data == 0b0000110  # bit 0 is coordinate 0
    assert V("0120", 3).literal() == "0120"
    for bad in ["", "01a", "012"]:
        with pytest.raises(LiteralError):
            CycVec.parse(bad)
    with pytest.raises(LiteralError):
        CycVec.parse("0101", n=5)


def test_shift_composition_exhaustive():
    for n in range(1, 9):
        amb = Ambient(2, n)
        for code in range(2 ** n):
            x = CycVec(amb, code)
            for a in range(n):
                sa = shift(x, a)
                for b in range(n):
                    assert shift(sa, b) == shift(x, a + b)


@given(vectors(), st.integers(-50, 50))
def test_dot_shift_adjoint(v, k):
    rng = random.Random(k)
    x = CycVec.from_coords(v.ambient, [rng.randrange(v.q) for _ in range(v.n)])
    assert dot(v, shift(x, k)) == dot(shift(v, -k), x)
    assert dot(v, x) == dot_coords(v.coords, x.coords, v.q)


@given(vectors())
def test_scaling_composition(v):
    us = units_mod(v.n)
    for a in us:
        for b in us:
            assert scale_indices(scale_indices(v, a), b) == scale_indices(v, (a * b) % v.n or 1)


@given(vectors())
def test_symmetric_iff_reverse_fixed(v):
    assert is_symmetric(v) == (v == scale_indices(v, -1))
    assert reverse(reverse(v)) == v


@given(st.lists(vectors(q=3, n=6), min_size=1, max_size=4), st.randoms())
def test_basis_is_span_identity(rows, rnd):
    b1 = Basis.span_of(rows)
    mixed = list(rows)
    rnd.shuffle(mixed)
    # random row operations keep the span
    for _ in range(5):
        i, j = rnd.randrange(len(mixed)), rnd.randrange(len(mixed))
        if i != j:
            mixed[i] = mixed[i] + mixed[j].scale(rnd.randrange(1, 3))
    assert Basis.span_of(mixed) == b1


@given(st.lists(vectors(q=2, n=9), min_size=0, max_size=5))
def test_kernel_is_orthogonal_complement(rows):
    amb = Ambient(2, 9)
    ker = kernel(rows, amb)
    assert len(ker) == 9 - rank(rows, amb)
    assert all(dot(r, k) == 0 for r in rows for k in ker)


def test_basis_independent_rejects_dependent():
    with pytest.raises(PreconditionError):
        Basis.independent([V("110"), V("011"), V("101")])
    b = Basis.independent([V("110"), V("011")])
    assert b.m == 2 and b.contains(V("101"))


def test_rref_pivots_ascending():
    b = Basis.span_of([V("0011"), V("1100"), V("0110")])
    pivots = [next(i for i in range(4) if r[i]) for r in b.rows]
    assert pivots == sorted(pivots)
