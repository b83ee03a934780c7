"""Real quadratic field arithmetic.

A field F = Q(sqrt(d)) is represented with its integral basis (1, omega),
omega = sqrt(d) for d = 2,3 mod 4 and omega = (1+sqrt(d))/2 for d = 1 mod 4.
Elements are stored exactly as (a + b*omega)/den with arbitrary-precision
integers; every sign/positivity decision is made over exact rationals, with
intervals used only for numeric output.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from . import arith
from .errors import NotSquarefree, SearchBudgetExceeded, ZeroElement
from .intervals import lo, prec_guard

PELL_BUDGET = 10**6


def _sign_a_plus_b_sqrt(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) (d > 1 squarefree, so zero only if a=b=0)."""
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return (b > 0) - (b < 0)
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # mixed signs: compare a^2 with d*b^2
    lhs, rhs = a * a, d * b * b
    if lhs == rhs:  # would mean sqrt(d) rational
        raise AssertionError("squarefree d>1 cannot satisfy a^2 = d b^2")
    bigger_abs_is_rational = lhs > rhs
    return (1 if a > 0 else -1) if bigger_abs_is_rational else (1 if b > 0 else -1)


class Elt:
    """Element (a + b*omega)/den of F, normalized with den > 0 and gcd 1."""

    __slots__ = ("field", "a", "b", "den")

    def __init__(self, field, a, b, den=1):
        if den == 0:
            raise ZeroDivisionError("element denominator is zero")
        if den < 0:
            a, b, den = -a, -b, -den
        g = math.gcd(math.gcd(abs(a), abs(b)), den)
        if g > 1:
            a, b, den = a // g, b // g, den // g
        self.field = field
        self.a = a
        self.b = b
        self.den = den

    # -- basic structure -------------------------------------------------
    def is_zero(self):
        return self.a == 0 and self.b == 0

    def is_integral(self):
        return self.den == 1

    def __eq__(self, other):
        if not isinstance(other, Elt):
            if isinstance(other, int):
                other = self.field.from_int(other)
            else:
                return NotImplemented
        return (self.field.d == other.field.d and self.a == other.a
                and self.b == other.b and self.den == other.den)

    def __hash__(self):
        return hash((self.field.d, self.a, self.b, self.den))

    def __repr__(self):
        core = f"({self.a},{self.b})" if self.b else f"{self.a}"
        return core if self.den == 1 else f"{core}/{self.den}"

    def coords(self):
        return (self.a, self.b, self.den)

    # -- ring operations -------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        F = self.field
        return Elt(F, self.a * other.den + other.a * self.den,
                   self.b * other.den + other.b * self.den, self.den * other.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __neg__(self):
        return Elt(self.field, -self.a, -self.b, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        F = self.field
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        # omega^2 = c0 + c1*omega
        a = a1 * a2 + b1 * b2 * F.c0
        b = a1 * b2 + a2 * b1 + b1 * b2 * F.c1
        return Elt(F, a, b, self.den * other.den)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero element")
        n = other.norm()  # Fraction, nonzero
        inv = other.conj() * Elt(other.field, n.denominator, 0, 1)
        res = self * inv
        return Elt(res.field, res.a * _sgn(n.numerator), res.b * _sgn(n.numerator),
                   res.den * abs(n.numerator))

    def __pow__(self, m: int):
        F = self.field
        if m < 0:
            return F.one() / self ** (-m)
        result, base = F.one(), self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Elt):
            return other
        if isinstance(other, int):
            return Elt(self.field, other, 0, 1)
        if isinstance(other, Fraction):
            return Elt(self.field, other.numerator, 0, other.denominator)
        raise TypeError(f"cannot coerce {other!r}")

    # -- field-theoretic maps ---------------------------------------------
    def conj(self):
        F = self.field
        return Elt(F, self.a + self.b * F.c1, -self.b, self.den)

    def trace(self) -> Fraction:
        return Fraction(2 * self.a + self.b * self.field.c1, self.den)

    def norm(self) -> Fraction:
        F = self.field
        return Fraction(self.a * self.a + self.a * self.b * F.c1 - self.b * self.b * F.c0,
                        self.den * self.den)

    def _sqrt_form(self, embedding: int):
        """(A, B) with sigma_i(self) = (A + B*sqrt(d)) / (2*den or den)."""
        F = self.field
        if F.basis_kind == "sqrt":
            A, B = self.a, self.b
        else:
            A, B = 2 * self.a + self.b, self.b
        if embedding == 2:
            B = -B
        return A, B

    def sign_at(self, embedding: int) -> int:
        """Exact sign of sigma_i(self); 0 only for the zero element."""
        if self.is_zero():
            return 0
        A, B = self._sqrt_form(embedding)
        return _sign_a_plus_b_sqrt(A, B, self.field.d)

    def is_totally_positive(self) -> bool:
        if self.is_zero():
            raise ZeroElement("total positivity undefined for 0")
        return self.sign_at(1) > 0 and self.sign_at(2) > 0

    def embeddings(self, precision: int = 53):
        """Pair of intervals enclosing (sigma_1(x), sigma_2(x))."""
        with prec_guard(precision):
            sq = iv.sqrt(iv.mpf(self.field.d))
            out = []
            for emb in (1, 2):
                A, B = self._sqrt_form(emb)
                denom = self.den * (2 if self.field.basis_kind == "half" else 1)
                out.append((iv.mpf(A) + iv.mpf(B) * sq) / iv.mpf(denom))
            return tuple(out)

    def abs_embedding(self, embedding: int, precision: int = 53):
        with prec_guard(precision):
            return abs(self.embeddings(precision)[embedding - 1])

    def to_json(self):
        d = {"a": str(self.a), "b": str(self.b)}
        if self.den != 1:
            d["den"] = str(self.den)
        return d


def _sgn(n):
    return 1 if n >= 0 else -1


class RealQuadraticField:
    """Q(sqrt(d)) with its integral basis, units and different."""

    def __init__(self, d: int):
        if d <= 1:
            raise NotSquarefree(f"d must be squarefree and > 1, got {d}")
        if not arith.is_squarefree(d):
            raise NotSquarefree(f"{d} has a square factor")
        self.d = d
        if d % 4 == 1:
            self.basis_kind = "half"
            self.c0, self.c1 = (d - 1) // 4, 1  # omega^2 = c0 + c1*omega
            self.D = d
        else:
            self.basis_kind = "sqrt"
            self.c0, self.c1 = d, 0
            self.D = 4 * d
        # f = sum of inertial degrees of primes over 2
        self.f2 = 1 if self.basis_kind == "sqrt" else 2
        self.fundamental_unit, self.fu_norm = self._pell_fundamental_unit()
        if self.fu_norm == -1:
            self.eps_plus = self.fundamental_unit * self.fundamental_unit
        else:
            self.eps_plus = self.fundamental_unit  # norm +1 units are totally positive
        self.delta = self._totally_positive_different_generator()
        self._narrow_h1 = None
        self._pow_cache = {0: self.one()}

    # -- constructors ------------------------------------------------------
    def elt(self, a, b=0, den=1) -> Elt:
        return Elt(self, a, b, den)

    def from_int(self, n: int) -> Elt:
        return Elt(self, n, 0, 1)

    def from_fraction(self, q: Fraction) -> Elt:
        q = Fraction(q)
        return Elt(self, q.numerator, 0, q.denominator)

    def one(self) -> Elt:
        return Elt(self, 1, 0, 1)

    def zero(self) -> Elt:
        return Elt(self, 0, 0, 1)

    def omega(self) -> Elt:
        return Elt(self, 0, 1, 1)

    def sqrt_d(self) -> Elt:
        """The element sqrt(d) = 2*omega - c1."""
        return Elt(self, -self.c1, 2, 1) if self.basis_kind == "half" else self.omega()

    def __repr__(self):
        return f"Q(sqrt {self.d})"

    def spec_string(self) -> str:
        return f"Qsqrt:{self.d}"

    # -- units ---------------------------------------------------------------
    def _pell_fundamental_unit(self):
        """Smallest unit > 1, by exhaustive search on the omega-coefficient.

        For each b >= 1 the candidate norms force a^2 (resp. s^2) to one of two
        integers; the first b admitting a solution gives the fundamental unit,
        taking the smaller root when both norm signs admit one.
        """
        d = self.d
        if self.basis_kind == "sqrt":
            for b in range(1, PELL_BUDGET):
                n = d * b * b
                if arith.is_square(n - 1):
                    return Elt(self, math.isqrt(n - 1), b, 1), -1
                if arith.is_square(n + 1):
                    return Elt(self, math.isqrt(n + 1), b, 1), 1
        else:
            for b in range(1, PELL_BUDGET):
                n = d * b * b
                for delta, nrm in ((-4, -1), (4, 1)):
                    s2 = n + delta
                    if s2 >= 0 and arith.is_square(s2):
                        s = math.isqrt(s2)
                        if (s - b) % 2 == 0:
                            return Elt(self, (s - b) // 2, b, 1), nrm
        raise SearchBudgetExceeded("fundamental unit search exhausted", PELL_BUDGET)

    def _totally_positive_different_generator(self):
        """Totally positive generator of the different, or None.

        The different is generated by f'(omega), which has mixed embedding
        signs.  Mixed-sign units exist iff the fundamental unit has norm -1,
        so exactly one sign orbit needs inspection.
        """
        g = Elt(self, -self.c1, 2, 1)  # f'(omega) = 2*omega - c1
        if self.fu_norm != -1:
            return None
        cand = g * self.fundamental_unit
        if not cand.is_totally_positive():
            cand = -cand
        assert cand.is_totally_positive() and cand.norm() == self.D
        return cand

    def eps_plus_pow(self, m: int) -> Elt:
        if m not in self._pow_cache:
            if m > 0:
                self._pow_cache[m] = self.eps_plus_pow(m - 1) * self.eps_plus
            else:
                inv = self.one() / self.eps_plus
                self._pow_cache[m] = self.eps_plus_pow(m + 1) * inv
        return self._pow_cache[m]

    def totally_positive_unit_reps(self):
        """Representatives of O^{x+} / (O^x)^2: {1}, or {1, fu} for norm +1."""
        if self.fu_norm == -1:
            return [self.one()]
        return [self.one(), self.fundamental_unit]

    def is_unit(self, x: Elt) -> bool:
        return x.is_integral() and abs(x.norm()) == 1

    # -- balancing ------------------------------------------------------------
    def A_interval(self, precision: int = 64):
        """The balancing constant A = sqrt(sigma_1(eps_plus))."""
        with prec_guard(precision):
            return iv.sqrt(self.eps_plus.embeddings(precision)[0])

    def balanced_representative(self, x: Elt):
        """(y, m) with y = x * eps_plus^m minimizing |log |sigma1(y)/sigma2(y)||.

        Ties are broken toward smaller |m|, then smaller m.  Candidate m comes
        from an interval estimate; the comparison among candidates is exact.
        """
        if x.is_zero():
            raise ZeroElement("cannot balance 0")
        with prec_guard(64):
            s1, s2 = x.embeddings(64)
            ratio = abs(s1) / abs(s2)
            lam = self.eps_plus.embeddings(64)[0]  # = A^2 ; sigma2 = 1/A^2
            est = -float(lo(iv.log(ratio))) / (2 * float(lo(iv.log(lam))))
        m0 = int(math.floor(est + 0.5))
        cands = sorted(range(m0 - 2, m0 + 3), key=lambda m: (abs(m), m))
        best = None
        for m in cands:
            if best is None or self._balance_cmp(x, m, best) < 0:
                best = m
        return x * self.eps_plus_pow(best), best

    def _balance_quality_parts(self, x: Elt, m: int):
        """Exact data for comparing |log(|sigma1(y)|^2 / |N(x)|)| across m."""
        y = x * self.eps_plus_pow(m)
        y2 = y * y  # sigma1(y)^2 = sigma1(y^2), positive
        return y2

    def _balance_cmp(self, x: Elt, m1: int, m2: int) -> int:
        """-1/0/+1 comparison of balance quality for exponents m1, m2 (exact).

        Quality(m) = max(q, 1/q) with q = sigma1(y_m)^2 / |N(x)|; the max and
        the cross comparисson reduce to exact embedding sign tests.
        """
        nx = abs(x.norm())
        a1 = self._balance_quality_parts(x, m1)
        a2 = self._balance_quality_parts(x, m2)

        def key_pair(y2):
            # returns (p, q) elements with quality = sigma1(p)/sigma1(q), both > 0
            n_elt = self.from_fraction(nx)
            # compare sigma1(y2) vs nx to pick max(q, 1/q)
            if (y2 - n_elt).sign_at(1) >= 0:
                return y2, n_elt
            return n_elt, y2

        p1, q1 = key_pair(a1)
        p2, q2 = key_pair(a2)
        # quality1 ? quality2  <=>  sigma1(p1*q2) ? sigma1(p2*q1)
        diff = p1 * q2 - p2 * q1
        s = diff.sign_at(1)
        if s != 0:
            return -1 if s < 0 else 1
        t1, t2 = (abs(m1), m1), (abs(m2), m2)
        return -1 if t1 < t2 else (0 if t1 == t2 else 1)

    # -- narrow class number ----------------------------------------------------
    @property
    def narrow_h1(self) -> bool:
        """Narrow class number 1 test: wide h = 1 plus a norm -1 unit."""
        if self._narrow_h1 is None:
            if self.fu_norm != -1:
                self._narrow_h1 = False
            else:
                from . import ideals  # deferred: ideals imports this module
                self._narrow_h1 = ideals.wide_class_number_is_one(self)
        return self._narrow_h1


@lru_cache(maxsize=None)
def make_field(d: int) -> RealQuadraticField:
    """Construct (and cache) Q(sqrt(d)) with all derived data populated."""
    return RealQuadraticField(d)


def parse_field_spec(spec: str) -> RealQuadraticField:
    if not spec.startswith("Qsqrt:"):
        raise ValueError(f"bad field spec {spec!r}, expected 'Qsqrt:<d>'")
    return make_field(int(spec.split(":", 1)[1]))


# continued-fraction expansion of sqrt(d); retained as an independent oracle
# for the Pell search (period parity gives the fundamental-unit norm).
def sqrt_cf_fundamental_solution(d: int):
    """(x, y, norm) with x^2 - d y^2 = norm = (-1)^period, minimal, via CF."""
    a0 = math.isqrt(d)
    if a0 * a0 == d:
        raise ValueError("d must not be square")
    m, q, a = 0, 1, a0
    h_prev, h = 1, a0
    k_prev, k = 0, 1
    period = 0
    while True:
        m = a * q - m
        q = (d - m * m) // q
        a = (a0 + m) // q
        period += 1
        if q == 1:
            break
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
    return h, k, (-1) ** period
