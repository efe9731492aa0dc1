"""Polynomials over F_q, plain and modulo X^n - 1.

Plain polynomials are tuples of coefficients, constant term first, with no
trailing zeros (the zero polynomial is ``()``).  Cyclic polynomials are
:class:`CycPoly` values of fixed length ``n``; the coefficient of ``X^i``
of ``f_v`` is coordinate ``i`` of ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import AmbientMismatch, PreconditionError
from .gf import Ambient, Basis, CycVec, is_prime, rank

Poly = tuple[int, ...]


# -- plain polynomial arithmetic --------------------------------------------


def trim(f: Sequence[int], q: int) -> Poly:
    out = [c % q for c in f]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def deg(f: Poly) -> int:
    """Degree, with ``deg(()) == -1``."""
    return len(f) - 1


def p_add(f: Poly, g: Poly, q: int) -> Poly:
    m = max(len(f), len(g))
    return trim([(f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0) for i in range(m)], q)


def p_scale(f: Poly, c: int, q: int) -> Poly:
    return trim([a * c for a in f], q)


def p_sub(f: Poly, g: Poly, q: int) -> Poly:
    return p_add(f, p_scale(g, -1, q), q)


def p_mul(f: Poly, g: Poly, q: int) -> Poly:
    if not f or not g:
        return ()
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return trim(out, q)


def p_divmod(f: Poly, g: Poly, q: int) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    inv = pow(g[-1], q - 2, q)
    dg = len(g) - 1
    quo = [0] * max(len(f) - dg, 0)
    for i in range(len(r) - 1, dg - 1, -1):
        c = (r[i] * inv) % q
        if c:
            quo[i - dg] = c
            for j, b in enumerate(g):
                r[i - dg + j] = (r[i - dg + j] - c * b) % q
    return trim(quo, q), trim(r[:dg], q)


def p_mod(f: Poly, g: Poly, q: int) -> Poly:
    return p_divmod(f, g, q)[1]


def monic(f: Poly, q: int) -> Poly:
    if not f:
        return f
    return p_scale(f, pow(f[-1], q - 2, q), q)


def p_eval(f: Poly, x: int, q: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % q
    return acc


def x_pow_minus_one(n: int, q: int) -> Poly:
    """The polynomial X^n - 1."""
    return trim([-1] + [0] * (n - 1) + [1], q)


def ext_gcd(f: Poly, g: Poly, q: int) -> tuple[Poly, Poly, Poly]:
    """Return ``(d, s, t)`` with ``s*f + t*g = d`` and ``d`` the monic gcd."""
    f, g = trim(f, q), trim(g, q)
    if not f and not g:
        raise PreconditionError("ext_gcd of two zero polynomials")
    r0, r1 = f, g
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        quo, rem = p_divmod(r0, r1, q)
        r0, r1 = r1, rem
        s0, s1 = s1, p_sub(s0, p_mul(quo, s1, q), q)
        t0, t1 = t1, p_sub(t0, p_mul(quo, t1, q), q)
    inv = pow(r0[-1], q - 2, q)
    return p_scale(r0, inv, q), p_scale(s0, inv, q), p_scale(t0, inv, q)


def p_gcd(f: Poly, g: Poly, q: int) -> Poly:
    return ext_gcd(f, g, q)[0]


def inverse_mod(f: Poly, m: Poly, q: int) -> Poly:
    d, s, _ = ext_gcd(f, m, q)
    if d != (1,):
        raise PreconditionError("polynomial is not invertible modulo the given modulus")
    return p_mod(s, m, q)


def crt_pair(r1: Poly, m1: Poly, r2: Poly, m2: Poly, q: int) -> Poly:
    """The unique ``u mod m1*m2`` with ``u = r1 (m1)`` and ``u = r2 (m2)``.

    Built from explicit Bezout coefficients ``s*m1 + t*m2 = 1``.
    """
    d, s, t = ext_gcd(m1, m2, q)
    if d != (1,):
        raise PreconditionError("CRT moduli are not coprime")
    u = p_add(p_mul(p_mul(r1, t, q), m2, q), p_mul(p_mul(r2, s, q), m1, q), q)
    return p_mod(u, p_mul(m1, m2, q), q)


def irreducible_factors(f: Poly, q: int) -> list[tuple[Poly, int]]:
    """Factor a monic polynomial into irreducibles by trial division.

    Adequate for the degrees met here (``X^n - 1`` with ``n`` at most a few
    dozen); candidate divisors are enumerated in increasing degree.
    """
    f = monic(trim(f, q), q)
    out: list[tuple[Poly, int]] = []
    d = 1
    while deg(f) >= 2 * d:
        for tail in range(q ** d):
            g = []
            t = tail
            for _ in range(d):
                t, c = divmod(t, q)
                g.append(c)
            g = tuple(g) + (1,)
            if g[0] == 0:
                continue
            e = 0
            while True:
                quo, rem = p_divmod(f, g, q)
                if rem:
                    break
                f, e = quo, e + 1
            if e:
                out.append((g, e))
        d += 1
    if deg(f) >= 1:
        merged = False
        for i, (g, e) in enumerate(out):
            if g == f:
                out[i] = (g, e + 1)
                merged = True
        if not merged:
            out.append((f, 1))
    # X itself never divides X^n - 1, but keep the routine general.
    return sorted(out, key=lambda ge: (len(ge[0]), ge[0]))


# -- the cyclic ring F_q[X]/(X^n - 1) ----------------------------------------


@dataclass(frozen=True)
class CycPoly:
    ambient: Ambient
    coeffs: tuple[int, ...]

    @classmethod
    def from_vec(cls, v: CycVec) -> "CycPoly":
        return cls(v.ambient, v.coords)

    @classmethod
    def from_plain(cls, ambient: Ambient, f: Poly) -> "CycPoly":
        """Reduce a plain polynomial modulo X^n - 1."""
        out = [0] * ambient.n
        for i, c in enumerate(f):
            out[i % ambient.n] = (out[i % ambient.n] + c) % ambient.q
        return cls(ambient, tuple(out))

    @classmethod
    def parse(cls, literal: str, q: int = 2) -> "CycPoly":
        return cls.from_vec(CycVec.parse(literal, q))

    @classmethod
    def one(cls, ambient: Ambient) -> "CycPoly":
        return cls.from_plain(ambient, (1,))

    @classmethod
    def phi(cls, ambient: Ambient) -> "CycPoly":
        """1 + X + ... + X^{n-1}."""
        return cls(ambient, (1,) * ambient.n)

    def to_vec(self) -> CycVec:
        return CycVec.from_coords(self.ambient, self.coeffs)

    def plain(self) -> Poly:
        return trim(self.coeffs, self.ambient.q)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "CycPoly") -> "CycPoly":
        _same(self, other)
        q = self.ambient.q
        return CycPoly(self.ambient, tuple((a + b) % q for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "CycPoly") -> "CycPoly":
        return mul_mod(self, other)

    def literal(self) -> str:
        return "".join(str(c) for c in self.coeffs)

    def __str__(self) -> str:
        return self.literal()


def _same(f: CycPoly, g: CycPoly) -> None:
    if f.ambient != g.ambient:
        raise AmbientMismatch(f"{f.ambient} vs {g.ambient}")


def mul_mod(f: CycPoly, g: CycPoly) -> CycPoly:
    """Product in F_q[X]/(X^n - 1) (cyclic convolution)."""
    _same(f, g)
    q, n = f.ambient.q, f.ambient.n
    if q == 2:
        a = f.to_vec().data
        b = g.to_vec().data
        mask = f.ambient.mask
        acc = 0
        i = 0
        while a:
            if a & 1:
                acc ^= ((b << i) | (b >> (n - i))) & mask
            a >>= 1
            i += 1
        return CycPoly.from_vec(CycVec(f.ambient, acc))
    out = [0] * n
    for i, x in enumerate(f.coeffs):
        if x:
            for j, y in enumerate(g.coeffs):
                if y:
                    out[(i + j) % n] += x * y
    return CycPoly(f.ambient, tuple(c % q for c in out))


def is_unit(f: CycPoly) -> bool:
    """True iff ``gcd(f, X^n - 1) = 1``."""
    q = f.ambient.q
    plain = f.plain()
    if not plain:
        return False
    return p_gcd(plain, x_pow_minus_one(f.ambient.n, q), q) == (1,)


def ideal_generator(f: CycPoly) -> Poly:
    """Monic ``gcd(f, X^n - 1)``; equal generators mean associate elements.

    The zero element maps to ``X^n - 1`` itself.
    """
    q = f.ambient.q
    return p_gcd(f.plain(), x_pow_minus_one(f.ambient.n, q), q)


def two_adic_part(n: int) -> int:
    """Largest power of two dividing ``n``."""
    return n & -n


def works_closed_form(v: CycVec) -> bool:
    """Closed-form test that ``v`` works (binary case).

    ``v`` works exactly when ``(1 + X)^(2^b)`` divides ``f_v``, where ``2^b``
    is the largest power of two dividing ``n``.  Over F_2 that power equals
    ``1 + X^(2^b)``, so a single reduction decides it.
    """
    if v.q != 2:
        raise PreconditionError("works_closed_form is defined for q = 2 only")
    m = two_adic_part(v.n)
    divisor = trim([1] + [0] * (m - 1) + [1], 2)
    return p_mod(trim(v.coords, 2), divisor, 2) == ()


# -- multiplicative order ----------------------------------------------------


@dataclass(frozen=True)
class ModulusFactors:
    p: int
    ord: int
    t: int
    irreducible_flag: bool


def multiplicative_order(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise PreconditionError(f"{a} is not invertible modulo {p}")
    e, x = 1, a
    while x != 1:
        x = (x * a) % p
        e += 1
    return e


def order_mod(q: int, p: int) -> ModulusFactors:
    """Order of ``q`` modulo the prime ``p`` and the factor count of ``Phi_p``."""
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if q % p == 0:
        raise PreconditionError(f"{p} divides {q}")
    e = multiplicative_order(q, p)
    return ModulusFactors(p=p, ord=e, t=(p - 1) // e, irreducible_flag=(e == p - 1))


def is_primitive_root(q: int, p: int) -> bool:
    return is_prime(p) and q % p != 0 and order_mod(q, p).irreducible_flag


# -- structured constructions -------------------------------------------------


def normalize_to_e(rows: Basis | Sequence[CycVec], p: int) -> tuple[CycVec, ...]:
    """Multiply a working binary family by a unit so the first member becomes ê.

    The unit is ``1`` modulo ``1 + X`` and the inverse of ``f_{rows[0]}``
    modulo ``Phi = 1 + X + ... + X^{p-1}``, assembled from the Bezout
    coefficients of ``(1 + X, Phi)``.  The output keeps the input order and
    is re-verified (independence and working together) before returning.
    """
    from .covering import works_together  # local: covering imports polyring

    rows = list(rows.rows if isinstance(rows, Basis) else rows)
    if not rows:
        raise PreconditionError("empty family")
    amb = rows[0].ambient
    if amb.q != 2 or amb.n != p:
        raise PreconditionError("normalize_to_e needs binary vectors of prime length p")
    if not is_primitive_root(2, p):
        raise PreconditionError(f"2 is not a primitive root modulo {p}")
    if any(r.is_zero() for r in rows):
        raise PreconditionError("zero row")
    if rank(rows, amb) != len(rows):
        raise PreconditionError("rows are linearly dependent")
    if not works_together(Basis.span_of(rows)).covers:
        raise PreconditionError("rows do not work together")

    phi = (1,) * p
    one_plus_x = (1, 1)
    inv = inverse_mod(p_mod(trim(rows[0].coords, 2), phi, 2), phi, 2)
    u = CycPoly.from_plain(amb, crt_pair((1,), one_plus_x, inv, phi, 2))
    out = tuple(mul_mod(u, CycPoly.from_vec(r)).to_vec() for r in rows)

    if out[0] != CycVec.e_hat(amb):
        raise AssertionError("normalisation did not produce ê")
    if rank(list(out), amb) != len(out) or not works_together(Basis.span_of(list(out))).covers:
        raise AssertionError("unit action broke independence or coverage")
    return out


def alternating_target(p: int, q: int) -> Poly:
    """``(X - 1)(X^{p-2} + X^{p-4} + ... + X - 1)``, a multiple of X - 1 with no zero coefficient."""
    h = [0] * (p - 1)
    h[0] = -1
    for i in range(1, p - 1, 2):
        h[i] = 1
    return p_mul((-1 % q, 1), trim(h, q), q)


def failure_certificate(v: CycVec, p: int) -> CycVec:
    """Return ``x`` such that ``f_v * f_x`` has no zero coefficient.

    Then ``reverse(x)`` has no shift orthogonal to ``v``, so ``v`` does not
    work.  Requires odd prime ``q``, prime ``p > q`` with ``q`` a primitive
    root modulo ``p``.
    """
    q, n = v.q, v.n
    if q == 2 or not is_prime(q):
        raise PreconditionError("failure_certificate needs an odd prime q")
    if n != p or not is_prime(p) or p <= q:
        raise PreconditionError(f"need vectors of prime length p > q, got n={n}, p={p}")
    if not is_primitive_root(q, p):
        raise PreconditionError(f"{q} is not a primitive root modulo {p}")
    if v.is_zero():
        raise PreconditionError("the zero vector works trivially")

    fv = trim(v.coords, q)
    phi = (1,) * p
    a = p_eval(fv, 1, q)
    if a:
        # f_v * Phi = f_v(1) * Phi in the cyclic ring, so x = a^{-1} * Phi.
        ainv = pow(a, q - 2, q)
        x = (ainv,) * p
        target: Poly = phi
    else:
        target = alternating_target(p, q)
        b = p_mod(fv, phi, q)
        part = p_mul(p_mod(target, phi, q), inverse_mod(b, phi, q), q)
        x = crt_pair((), (-1 % q, 1), p_mod(part, phi, q), phi, q)
    amb = v.ambient
    xv = CycPoly.from_plain(amb, x).to_vec()
    prod = mul_mod(CycPoly.from_vec(v), CycPoly.from_vec(xv))
    if prod.coeffs != CycPoly.from_plain(amb, target).coeffs or 0 in prod.coeffs:
        raise AssertionError("certificate construction failed")
    return xv


# -- power sums over F_p -------------------------------------------------------


def power_sum(r: int, p: int) -> int:
    """``sum_{x in F_p} x^r`` as a residue (with ``0^0 = 1``)."""
    return sum(pow(x, r, p) if (x or r) else 1 for x in range(p)) % p


def point_sum(f: Poly, p: int) -> int:
    """``sum_{x in F_p} f(x)`` for a polynomial with coefficients mod ``p``."""
    return sum(p_eval(f, x, p) for x in range(p)) % p
