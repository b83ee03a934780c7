"""Exact arithmetic in Z[zeta_M], represented in Z[x]/(x^M - 1).

Addition and multiplication act coefficientwise / by cyclic convolution with
no basis choice; only the zero test reduces modulo the M-th cyclotomic
polynomial.  Values of different orders are compared after lifting to the lcm
order.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from mpmath import iv

from .intervals import prec_guard


@lru_cache(maxsize=512)
def cyclotomic_poly(M: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the M-th cyclotomic polynomial."""
    if M == 1:
        return (-1, 1)
    poly = [-1] + [0] * (M - 1) + [1]  # x^M - 1
    for d in range(1, M):
        if M % d == 0:
            poly = _polydiv_exact(poly, cyclotomic_poly(d))
    return tuple(poly)


def _polydiv_exact(num, den):
    """Exact division of integer polynomials (den monic up to sign)."""
    num = list(num)
    dend = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - dend)
    for i in range(len(num) - 1, dend - 1, -1):
        q, r = divmod(num[i], lead)
        assert r == 0
        out[i - dend] = q
        if q:
            for j in range(dend + 1):
                num[i - dend + j] -= q * den[j]
    assert all(v == 0 for v in num), "non-exact polynomial division"
    return out


def _polymod(coeffs, mod):
    """Remainder of an integer polynomial modulo a monic integer polynomial."""
    rem = list(coeffs)
    dm = len(mod) - 1
    for i in range(len(rem) - 1, dm - 1, -1):
        q = rem[i]
        if q:
            for j in range(dm + 1):
                rem[i - dm + j] -= q * mod[j]
    del rem[dm:]
    return rem


class CyclotomicInteger:
    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs):
        assert order >= 1 and len(coeffs) == order
        self.order = order
        self.coeffs = list(coeffs)

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, order: int = 1):
        return cls(order, [0] * order)

    @classmethod
    def one(cls):
        return cls(1, [1])

    @classmethod
    def from_int(cls, n: int):
        return cls(1, [n])

    @classmethod
    def root_of_unity(cls, order: int, power: int):
        c = [0] * order
        c[power % order] = 1
        return cls(order, c)

    # -- arithmetic ---------------------------------------------------------
    def lift(self, M: int) -> "CyclotomicInteger":
        """Rewrite in Z[x]/(x^M - 1) for a multiple M of the order."""
        if M == self.order:
            return self
        assert M % self.order == 0
        k = M // self.order
        c = [0] * M
        for j, v in enumerate(self.coeffs):
            c[j * k] = v
        return CyclotomicInteger(M, c)

    def _pair(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.from_int(other)
        M = math.lcm(self.order, other.order)
        return self.lift(M), other.lift(M)

    def __add__(self, other):
        x, y = self._pair(other)
        return CyclotomicInteger(x.order, [a + b for a, b in zip(x.coeffs, y.coeffs)])

    def __sub__(self, other):
        x, y = self._pair(other)
        return CyclotomicInteger(x.order, [a - b for a, b in zip(x.coeffs, y.coeffs)])

    def __neg__(self):
        return CyclotomicInteger(self.order, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInteger(self.order, [other * a for a in self.coeffs])
        x, y = self._pair(other)
        M = x.order
        out = [0] * M
        for i, a in enumerate(x.coeffs):
            if a:
                for j, b in enumerate(y.coeffs):
                    if b:
                        out[(i + j) % M] += a * b
        return CyclotomicInteger(M, out)

    __rmul__ = __mul__
    __radd__ = __add__

    def conjugate(self) -> "CyclotomicInteger":
        c = [0] * self.order
        for j, v in enumerate(self.coeffs):
            c[(-j) % self.order] += v
        return CyclotomicInteger(self.order, c)

    # -- predicates ----------------------------------------------------------
    def reduced(self):
        """Remainder mod the cyclotomic polynomial of the order (canonical)."""
        return _polymod(self.coeffs, cyclotomic_poly(self.order))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.reduced())

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInteger.from_int(other)
        if not isinstance(other, CyclotomicInteger):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("CyclotomicInteger is not hashable")

    def is_real(self) -> bool:
        return (self - self.conjugate()).is_zero()

    def as_int(self):
        """The value as an integer when it lies in Z, else None."""
        r = self.reduced()
        if all(v == 0 for v in r[1:]):
            return r[0] if r else 0
        return None

    def __repr__(self):
        n = self.as_int()
        if n is not None:
            return f"CycInt({n})"
        return f"CycInt(order={self.order}, coeffs={self.reduced()})"

    # -- numerics ---------------------------------------------------------------
    def complex_interval(self, precision: int = 64):
        """(re, im) interval enclosure of the complex value."""
        with prec_guard(precision):
            re = iv.mpf(0)
            im = iv.mpf(0)
            M = self.order
            two_pi = 2 * iv.pi
            for j, v in enumerate(self.coeffs):
                if v:
                    ang = two_pi * iv.mpf(j) / iv.mpf(M)
                    re += v * iv.cos(ang)
                    im += v * iv.sin(ang)
            return re, im

    def real_interval(self, precision: int = 64):
        """Enclosure of the real part, via a fixed-point cosine table.

        The table holds outward-rounded integer scalings of cos(2 pi j / M),
        so the accumulation is pure integer arithmetic; this is the hot path
        for coefficient sums.
        """
        lo_t, hi_t = _cos_table_fixed(self.order, precision)
        acc_lo = acc_hi = 0
        for j, v in enumerate(self.coeffs):
            if v > 0:
                acc_lo += v * lo_t[j]
                acc_hi += v * hi_t[j]
            elif v < 0:
                acc_lo += v * hi_t[j]
                acc_hi += v * lo_t[j]
        with prec_guard(precision + 16):
            scale = iv.mpf(2) ** (-precision)
            return iv.mpf([acc_lo, acc_hi]) * scale

    def to_json(self):
        red = self.reduced()
        return {"order": self.order,
                "coeffs": {str(i): str(v) for i, v in enumerate(red) if v}}

    @classmethod
    def from_json(cls, d):
        order = int(d["order"])
        c = [0] * order
        for i, v in d["coeffs"].items():
            c[int(i) % order] = int(v)
        return cls(order, c)


def _dyadic_floor(raw) -> int:
    """Exact floor of a raw mpf (sign, man, exp, bc) tuple."""
    sign, man, exp, _bc = raw
    if man == 0:
        return 0
    if exp >= 0:
        v = man << exp
        return -v if sign else v
    if not sign:
        return man >> (-exp)
    return -((man + (1 << (-exp)) - 1) >> (-exp))


def _dyadic_ceil(raw) -> int:
    sign, man, exp, _bc = raw
    return -_dyadic_floor((1 - sign if man else 0, man, exp, _bc))


@lru_cache(maxsize=512)
def _cos_table_fixed(M: int, precision: int):
    """Integer bounds 2^precision * cos(2 pi j / M), rounded outward.

    Endpoint extraction works on the raw mantissa/exponent pairs; going
    through an mpf would round at the ambient context precision.
    """
    with prec_guard(precision + 32):
        two_pi = 2 * iv.pi
        scale = iv.mpf(2) ** precision
        los, his = [], []
        for j in range(M):
            c = iv.cos(two_pi * iv.mpf(j) / iv.mpf(M)) * scale
            a, b = c._mpi_
            los.append(_dyadic_floor(a))
            his.append(_dyadic_ceil(b))
    return tuple(los), tuple(his)


def additive_character(alpha) -> CyclotomicInteger:
    """e(alpha) = exp(2 pi i Tr(alpha)) as an exact root of unity."""
    t = Fraction(alpha.trace())
    return CyclotomicInteger.root_of_unity(t.denominator, t.numerator % t.denominator)
