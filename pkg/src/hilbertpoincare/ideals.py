"""Integral and fractional ideal arithmetic in HNF.

An integral ideal is the Z-lattice spanned by (a, 0) and (b, c) in the
integral basis (1, omega), normalized to Hermite form: a, c > 0, 0 <= b < a,
c | a, c | b, closed under multiplication by omega.  Equality is structural,
so ideals can be used as dict keys.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import arith
from .errors import (NotDivisible, NotIntegral, SearchBudgetExceeded,
                     ZeroIdeal)
from .field import Elt

PRINCIPALITY_BUDGET = 10**6


class IdealHNF:
    __slots__ = ("field", "a", "b", "c", "gen")

    def __init__(self, field, a, b, c, gen=None):
        if a <= 0 or c <= 0:
            raise ZeroIdeal("HNF entries must be positive")
        b %= a
        if a % c or b % c:
            raise AssertionError("not an O-module: c must divide a and b")
        # omega-closure of the (b, c) basis vector
        w_img = (c * field.c0, b + c * field.c1)
        if w_img[1] % c or (w_img[0] - (w_img[1] // c) * b) % a:
            raise AssertionError("lattice not closed under omega")
        self.field = field
        self.a = a
        self.b = b
        self.c = c
        self.gen = gen  # optional known generator (not part of identity)

    # -- structure ----------------------------------------------------------
    def norm(self) -> int:
        return self.a * self.c

    def key(self):
        return (self.field.d, self.a, self.b, self.c)

    def __eq__(self, other):
        return isinstance(other, IdealHNF) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"<{self.a},{self.b}+{self.c}w>"

    def is_unit_ideal(self):
        return self.a == 1 and self.c == 1

    def basis_elements(self):
        F = self.field
        return [F.elt(self.a, 0), F.elt(self.b, self.c)]

    def contains(self, x: Elt) -> bool:
        if not x.is_integral():
            return False
        if x.b % self.c:
            return False
        return (x.a - (x.b // self.c) * self.b) % self.a == 0

    def reduce_coords(self, u: int, v: int):
        """Canonical coset representative of u + v*omega modulo the lattice."""
        q, v = divmod(v, self.c)
        u = (u - q * self.b) % self.a
        return u, v

    def to_json(self):
        return {"a": str(self.a), "b": str(self.b), "c": str(self.c)}

    def sort_key(self):
        return (self.norm(), self.a, self.b, self.c)


def _hnf_from_vectors(field, vecs) -> tuple[int, int, int]:
    vecs = [(u, v) for (u, v) in vecs if u or v]
    if not vecs:
        raise ZeroIdeal("all generators are zero")
    # Euclid on the omega-coordinate, leaving one vector with v != 0
    while True:
        nz = [w for w in vecs if w[1] != 0]
        if len(nz) <= 1:
            break
        nz.sort(key=lambda w: abs(w[1]))
        p = nz[0]
        vecs = [w if w[1] == 0 or w is p else
                (w[0] - (w[1] // p[1]) * p[0], w[1] - (w[1] // p[1]) * p[1])
                for w in vecs]
        vecs = [w for w in vecs if w != (0, 0)]
    pivot = next((w for w in vecs if w[1] != 0), None)
    if pivot is None:
        raise ZeroIdeal("generators span a rank-1 module, not an O-ideal")
    if pivot[1] < 0:
        pivot = (-pivot[0], -pivot[1])
    a = 0
    for (u, v) in vecs:
        if v == 0:
            a = math.gcd(a, abs(u))
    if a == 0:
        raise ZeroIdeal("generators span a rank-1 module, not an O-ideal")
    b, c = pivot[0] % a, pivot[1]
    return a, b, c


def ideal_from_generators(gens) -> IdealHNF:
    """HNF of the O-module generated by the given integral elements."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        raise ZeroIdeal("no nonzero generators")
    F = gens[0].field
    vecs = []
    for g in gens:
        if not g.is_integral():
            raise NotIntegral(f"generator {g} is not integral")
        gw = g * F.omega()
        vecs.append((g.a, g.b))
        vecs.append((gw.a, gw.b))
    a, b, c = _hnf_from_vectors(F, vecs)
    return IdealHNF(F, a, b, c, gen=gens[0] if len(gens) == 1 else None)


def principal_ideal(g: Elt) -> IdealHNF:
    return ideal_from_generators([g])


def unit_ideal(field) -> IdealHNF:
    return IdealHNF(field, 1, 0, 1, gen=field.one())


def different_ideal(field) -> IdealHNF:
    """The different, generated by f'(omega) = 2*omega - c1."""
    return principal_ideal(field.elt(-field.c1, 2))


def ideal_sum(x: IdealHNF, y: IdealHNF) -> IdealHNF:
    return ideal_from_generators(x.basis_elements() + y.basis_elements())


def ideal_product(x: IdealHNF, y: IdealHNF) -> IdealHNF:
    gens = [gx * gy for gx in x.basis_elements() for gy in y.basis_elements()]
    out = ideal_from_generators(gens)
    if x.gen is not None and y.gen is not None:
        out.gen = x.gen * y.gen
    return out


def ideal_conj(x: IdealHNF) -> IdealHNF:
    out = ideal_from_generators([g.conj() for g in x.basis_elements()])
    if x.gen is not None:
        out.gen = x.gen.conj()
    return out


def ideal_divides(y: IdealHNF, x: IdealHNF) -> bool:
    """Does y divide x (equivalently x subset of y)?"""
    return all(y.contains(g) for g in x.basis_elements())


def ideal_exact_divide(x: IdealHNF, y: IdealHNF) -> IdealHNF:
    """x / y for y | x, via x * conj(y) = N(y) * (x/y)."""
    if not ideal_divides(y, x):
        raise NotDivisible(f"{y} does not divide {x}")
    n = y.norm()
    p = ideal_product(x, ideal_conj(y))
    if p.a % n or p.b % n or p.c % n:
        raise NotDivisible(f"{y} does not divide {x}")
    out = IdealHNF(x.field, p.a // n, p.b // n, p.c // n)
    return out


def ideal_pow(x: IdealHNF, e: int) -> IdealHNF:
    out = unit_ideal(x.field)
    for _ in range(e):
        out = ideal_product(out, x)
    return out


@dataclass
class Splitting:
    kind: str               # "split" | "inert" | "ramified"
    primes: tuple           # one or two prime ideals
    e: int                  # ramification index
    f: int                  # inertial degree


def prime_splitting(field, p: int) -> Splitting:
    if not arith.is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    F = field
    if p == 2 and F.basis_kind == "half":
        if F.d % 8 == 1:
            p1 = ideal_from_generators([F.from_int(2), F.omega()])
            p2 = ideal_from_generators([F.from_int(2), F.omega() - F.one()])
            return Splitting("split", (p1, p2), 1, 1)
        return Splitting("inert", (principal_ideal(F.from_int(2)),), 1, 2)
    if F.D % p == 0:
        if p == 2:
            r = F.d % 2
        else:
            r = (F.c1 * pow(2, p - 2, p)) % p  # double root c1/2 mod p
        pr = ideal_from_generators([F.from_int(p), F.omega() - F.from_int(r)])
        return Splitting("ramified", (pr,), 2, 1)
    ls = pow(F.D % p, (p - 1) // 2, p)
    if ls == 1:
        s = arith.sqrt_mod_p(F.D % p, p)
        inv2 = pow(2, p - 2, p)
        roots = sorted({(F.c1 + s) * inv2 % p, (F.c1 - s) * inv2 % p})
        ps = tuple(ideal_from_generators([F.from_int(p), F.omega() - F.from_int(r)])
                   for r in roots)
        return Splitting("split", ps, 1, 1)
    return Splitting("inert", (principal_ideal(F.from_int(p)),), 1, 2)


_factor_lock = threading.Lock()


@lru_cache(maxsize=4096)
def _factor_ideal_cached(x: IdealHNF):
    out = []
    n = x.norm()
    if n == 1:
        return ()
    for p in arith.factorint(n):
        for pr in prime_splitting(x.field, p).primes:
            e = valuation_ideal(x, pr)
            if e:
                out.append((pr, e))
    out.sort(key=lambda t: t[0].sort_key())
    # sanity: product of prime powers reconstructs the input
    acc = unit_ideal(x.field)
    for pr, e in out:
        acc = ideal_product(acc, ideal_pow(pr, e))
    assert acc == x, "factorization failed to reconstruct ideal"
    return tuple(out)


def factor_ideal(x: IdealHNF):
    """Multiset of (prime ideal, exponent); cached, thread-safe."""
    with _factor_lock:
        return list(_factor_ideal_cached(x))


def valuation_ideal(x: IdealHNF, pr: IdealHNF) -> int:
    v = 0
    while ideal_divides(pr, x):
        x = ideal_exact_divide(x, pr)
        v += 1
    return v


def valuation_elt(x: Elt, pr: IdealHNF) -> int:
    """v_p of a nonzero field element (num minus den valuations)."""
    if x.is_zero():
        raise ZeroIdeal("valuation of 0 is +infinity")
    F = x.field
    num = principal_ideal(F.elt(x.a, x.b))
    v = valuation_ideal(num, pr)
    if x.den != 1:
        v -= valuation_ideal(principal_ideal(F.from_int(x.den)), pr)
    return v


def divisors(x: IdealHNF):
    """All integral divisors, sorted by norm then canonical form."""
    fac = factor_ideal(x)
    out = [unit_ideal(x.field)]
    for pr, e in fac:
        powers = [ideal_pow(pr, i) for i in range(e + 1)]
        out = [ideal_product(d, pw) for d in out for pw in powers]
    out.sort(key=lambda i: i.sort_key())
    return out


def chi0(r: IdealHNF, level: IdealHNF) -> int:
    """1 iff r is coprime to the level."""
    return 1 if ideal_sum(r, level).is_unit_ideal() else 0


def pr_count(m: IdealHNF) -> int:
    return len(factor_ideal(m))


def N_nu_mu(m: IdealHNF, nu, mu) -> Fraction:
    """prod over p | m of N(p)^min(v_p(nu), v_p(mu), v_p(m) - v_p(different)).

    nu, mu are field elements; a zero argument contributes +infinity to the
    min.  The result is an exact rational (negative exponents can occur for
    fractional arguments).
    """
    F = m.field
    dd = different_ideal(F)
    out = Fraction(1)
    for pr, e in factor_ideal(m):
        cand = [e - valuation_ideal(dd, pr)]
        for t in (nu, mu):
            if t is not None and not t.is_zero():
                cand.append(valuation_elt(t, pr))
        out *= Fraction(pr.norm()) ** min(cand)
    return out


# -- principality ---------------------------------------------------------

def is_principal(x: IdealHNF):
    """A generator of x if principal (preferring a totally positive one).

    Searches the box in which a balanced generator must lie; exhausting the
    box proves non-principality, so the answer is never a guess.
    """
    F = x.field
    if x.gen is not None:
        g = x.gen
    else:
        g = _norm_equation_search(x)
        if g is None:
            return None
        x.gen = g
    return _prefer_totally_positive(F, g)


def _prefer_totally_positive(F, g):
    if g.norm() > 0:
        return g if g.is_totally_positive() else -g
    if F.fu_norm == -1:
        cand = g * F.fundamental_unit
        return cand if cand.is_totally_positive() else -cand
    return g


def is_narrowly_principal(x: IdealHNF):
    g = is_principal(x)
    if g is not None and g.is_totally_positive():
        return g
    return None


def _norm_equation_search(x: IdealHNF):
    F = x.field
    n = x.norm()
    import mpmath
    A_hi = float(mpmath.mpf(F.A_interval(64)._mpi_[1]))
    bound = A_hi * math.sqrt(n) * 1.0000001
    # v-range from |sigma1 - sigma2| <= 2*A*sqrt(n); omega1 - omega2 = sqrt(D)
    disc_w = F.c1 * F.c1 + 4 * F.c0
    vmax = int(2 * bound / math.sqrt(disc_w)) + 2
    if 2 * vmax + 1 > PRINCIPALITY_BUDGET:
        raise SearchBudgetExceeded("principality box too large", PRINCIPALITY_BUDGET)
    for v in range(-vmax, vmax + 1):
        # |N(u + v*omega)| = n  =>  (2u + v*c1)^2 = v^2*disc_w +- 4n
        base = v * v * disc_w
        for sgn in (1, -1):
            s2 = base + 4 * n * sgn
            if s2 < 0 or not arith.is_square(s2):
                continue
            s = math.isqrt(s2)
            for ss in ((s,) if s == 0 else (s, -s)):
                num = ss - v * F.c1
                if num % 2:
                    continue
                g = F.elt(num // 2, v)
                if abs(g.norm()) == n and x.contains(g):
                    return g
    return None


def wide_class_number_is_one(field) -> bool:
    """Check principality of all primes below the Minkowski bound sqrt(D)/2."""
    p = 2
    while 4 * p * p <= field.D:  # p <= sqrt(D)/2, exact
        if arith.is_probable_prime(p):
            for pr in prime_splitting(field, p).primes:
                if is_principal(pr) is None:
                    return False
        p += 1
    return True


def narrow_class_number_is_one(field) -> bool:
    return field.narrow_h1


# -- fractional ideals -----------------------------------------------------

class FractionalIdeal:
    """num / den with num integral in HNF and den a positive integer."""

    __slots__ = ("num", "den")

    def __init__(self, num: IdealHNF, den: int = 1):
        if den == 0:
            raise ZeroDivisionError("fractional ideal denominator 0")
        den = abs(den)
        g = math.gcd(den, math.gcd(num.a, math.gcd(num.b, num.c)))
        if g > 1:
            num = IdealHNF(num.field, num.a // g, num.b // g, num.c // g)
            den //= g
        self.num = num
        self.den = den

    @property
    def field(self):
        return self.num.field

    def norm(self) -> Fraction:
        return Fraction(self.num.norm(), self.den ** 2)

    def is_integral(self) -> bool:
        return self.den == 1

    def as_integral(self) -> IdealHNF:
        if not self.is_integral():
            raise NotIntegral(f"{self} is not integral")
        return self.num

    def __eq__(self, other):
        return (isinstance(other, FractionalIdeal)
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"{self.num!r}/{self.den}" if self.den != 1 else repr(self.num)

    def __mul__(self, other):
        if isinstance(other, IdealHNF):
            other = FractionalIdeal(other)
        return FractionalIdeal(ideal_product(self.num, other.num),
                               self.den * other.den)

    def inverse(self) -> "FractionalIdeal":
        n = self.num.norm()
        scaled = IdealHNF(self.field, self.num.a * self.den, self.num.b * self.den,
                          self.num.c * self.den)
        conj_scaled = ideal_conj(scaled)
        return FractionalIdeal(conj_scaled, n)

    def __truediv__(self, other):
        if isinstance(other, IdealHNF):
            other = FractionalIdeal(other)
        return self * other.inverse()

    def contains(self, x: Elt) -> bool:
        y = x * x.field.from_int(self.den)
        return y.is_integral() and self.num.contains(y)

    def to_json(self):
        return {"num": self.num.to_json(), "den": str(self.den)}


def element_ideal(x: Elt) -> FractionalIdeal:
    """The principal fractional ideal (x), x nonzero."""
    if x.is_zero():
        raise ZeroIdeal("(0) is not a fractional ideal")
    F = x.field
    num = principal_ideal(F.elt(x.a, x.b))
    return FractionalIdeal(num, x.den)


def ideals_of_norm(field, n: int):
    """All integral ideals of norm n, sorted canonically."""
    if n <= 0:
        return []
    if n == 1:
        return [unit_ideal(field)]
    parts = [unit_ideal(field)]
    for p, e in arith.factorint(n).items():
        sp = prime_splitting(field, p)
        local = []
        if sp.kind == "split":
            p1, p2 = sp.primes
            local = [ideal_product(ideal_pow(p1, i), ideal_pow(p2, e - i))
                     for i in range(e + 1)]
        elif sp.kind == "inert":
            if e % 2 == 0:
                local = [ideal_pow(sp.primes[0], e // 2)]
        else:
            local = [ideal_pow(sp.primes[0], e)]
        if not local:
            return []
        parts = [ideal_product(x, y) for x in parts for y in local]
    parts.sort(key=lambda i: i.sort_key())
    return parts


def dedekind_a(field, n: int) -> int:
    """Number of integral ideals of norm n (multiplicative in n)."""
    out = 1
    for p, e in arith.factorint(n).items():
        sp = prime_splitting(field, p)
        if sp.kind == "split":
            out *= e + 1
        elif sp.kind == "inert":
            if e % 2:
                return 0
        # ramified contributes factor 1
    return out
