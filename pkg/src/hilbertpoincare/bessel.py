"""Rigorous enclosures of J-Bessel values via the ascending power series.

J_n(x) = sum_{m>=0} (-1)^m (x/2)^(n+2m) / (m! (n+m)!).  Once the term ratio
(x/2)^2/((m+1)(n+m+1)) drops below 1 the remaining tail is dominated by a
geometric series, giving an explicit remainder bound.  Working precision is
raised with the argument to absorb the cancellation of the alternating sum
(largest term is about e^x while the value is at most 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv

from .intervals import hi, iv_pow_frac, lo, prec_guard

ARG_CAP = 20000.0  # beyond this the series is not attempted; [-1,1] is returned


@dataclass
class BesselEval:
    order: int
    argument: object   # input interval
    value: object      # enclosure interval
    exact_enough: bool  # False when the precision ladder gave up


def _clip_unit(x):
    a, b = lo(x), hi(x)
    return iv.mpf([max(a, -1), min(b, 1)])


def besselj_eval(order: int, x, precision: int = 64) -> BesselEval:
    """Enclosure of J_order over the nonnegative interval x.

    The alternating series is summed at a single point of the argument
    interval (its largest term, about e^x, would otherwise amplify the
    argument's width); the rest of the interval is covered by the derivative
    bound |J_n'| <= 1, adding +- width(x).
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if lo(x) < 0:
        x = iv.mpf([0, max(hi(x), 0)])
    xhi = float(hi(x))
    if xhi == 0.0 and lo(x) == 0:
        return BesselEval(order, x, iv.mpf(0), True)
    if xhi > ARG_CAP:
        return BesselEval(order, x, iv.mpf([-1, 1]), False)
    wp = precision + int(1.5 * xhi) + 48
    with prec_guard(wp):
        xw = hi(x) - lo(x)   # exact, nonnegative
        xi = iv.mpf([lo(x), lo(x)])
        half = xi / 2
        half2 = half * half
        # t0 = (x/2)^order / order!
        t = half ** order / iv.mpf(math.factorial(order))
        s = t
        m = 0
        tol = mpmath.mpf(2) ** (-(precision + 8))
        max_iter = int(2 * xhi) + 4 * order + 240
        while True:
            m += 1
            t = -t * half2 / iv.mpf(m * (order + m))
            s = s + t
            ratio_hi = 1.0000001 * (xhi / 2) ** 2 / ((m + 1) * (order + m + 1))
            if ratio_hi < 1:
                # rem: rounded up at every step so the tail bound is safe
                rem = mpmath.fdiv(
                    mpmath.fmul(max(abs(lo(t)), abs(hi(t))), ratio_hi,
                                rounding="u"),
                    1 - ratio_hi, rounding="u")
                if rem < tol or m > max_iter:
                    pad = mpmath.fadd(rem, xw, rounding="u")
                    s = s + iv.mpf([-pad, pad])  # series tail + width * |J'|<=1
                    return BesselEval(order, x, _clip_unit(s), rem < tol)


def besselJ(order: int, x, precision: int = 64):
    """Enclosure interval of J_order(x); always within [-1, 1]."""
    return besselj_eval(order, x, precision).value


def envelope(k: int, x, eta=Fraction(0)) -> object:
    """Upper bound (e*x/(2k-2))^(k-1-eta) for |J_{k-1}|, outward rounded.

    x may be a number or interval; the bound is evaluated at its upper end,
    where it is monotone increasing.
    """
    eta = Fraction(eta)
    if not (0 <= eta < 1):
        raise ValueError("eta must be in [0, 1)")
    with prec_guard(64):
        xh = hi(x) if hasattr(x, "_mpi_") else iv.mpf(x)
        if hasattr(xh, "_mpi_"):
            xh = hi(xh)
        if xh <= 0:
            return iv.mpf(0)
        base = iv.e * iv.mpf(xh) / iv.mpf(2 * k - 2)
        return iv_pow_frac(base, Fraction(k - 1) - eta)


def envelope_hi(k: int, x, eta=Fraction(0)):
    e = envelope(k, x, eta)
    return hi(e) if hasattr(e, "_mpi_") else e


def nj_product(k: int, arg1, arg2, precision: int = 64):
    """Enclosure of J_{k-1}(arg1) * J_{k-1}(arg2) (the two-embedding factor)."""
    with prec_guard(precision):
        return besselJ(k - 1, arg1, precision) * besselJ(k - 1, arg2, precision)
