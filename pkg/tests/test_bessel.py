import random
from fractions import Fraction

import mpmath
from mpmath import iv, mp
from hypothesis import given, settings, strategies as st

from hilbertpoincare.bessel import besselJ, besselj_eval, envelope_hi, nj_product
from hilbertpoincare.intervals import hi, lo

from oracles import besselj_rational, besselj_upward_recurrence


def test_zero_argument():
    v = besselJ(5, iv.mpf(0))
    assert lo(v) == 0 and hi(v) == 0


def test_j3_at_1_against_rational_oracle():
    olo, ohi = besselj_upward_recurrence(3, Fraction(1))
    v = besselJ(3, iv.mpf(1), 96)
    # the oracle interval and the package interval must overlap, and the
    # frozen reference digit string must lie in both
    mp.prec = 200
    ref = mpmath.mpf("0.019563353982668405918905321621751508254508954928056")
    assert lo(v) <= ref <= hi(v)
    assert float(olo) <= float(ref) <= float(ohi)
    slo, shi = besselj_rational(3, Fraction(1))
    assert float(slo) <= float(ref) <= float(shi)


def test_magnitude_bound_grid():
    for x in (0.1, 1.0, 10.0, 100.0):
        for k in (4, 8, 12):
            v = besselJ(k - 1, iv.mpf(x), 64)
            assert lo(v) >= -1 and hi(v) <= 1


def test_envelope_examples():
    k = 8
    e = envelope_hi(k, iv.mpf(2 * (k - 1)) / iv.e, Fraction(0))
    assert abs(e - 1) < 1e-10
    assert envelope_hi(k, iv.mpf(0), Fraction(1, 2)) == 0
    # envelope dominates |J| for small x
    mp.prec = 120
    for x in (0.05, 0.3, 1.5):
        truth = abs(mpmath.besselj(7, mpmath.mpf(x)))
        assert truth <= envelope_hi(8, iv.mpf(x), Fraction(0)) + mpmath.mpf("1e-25")


def test_envelope_monotone_eta():
    # larger eta weakens the exponent, enlarging the bound when base < 1
    e0 = envelope_hi(8, iv.mpf(1), Fraction(0))
    e5 = envelope_hi(8, iv.mpf(1), Fraction(1, 2))
    assert e5 >= e0


def test_nj_examples():
    z = nj_product(8, iv.mpf(0), iv.mpf(3.3))
    assert lo(z) == 0 and hi(z) == 0
    s = besselJ(7, iv.mpf(2.2), 64)
    both = nj_product(8, iv.mpf(2.2), iv.mpf(2.2), 64)
    assert lo(both) <= hi(s) * hi(s) and hi(both) >= lo(s) * lo(s)


def test_oracle_containment_sample():
    mp.prec = 200
    rng = random.Random(41)
    for _ in range(120):
        order = rng.randint(1, 19)
        x = mpmath.mpf(rng.random()) * 50
        res = besselj_eval(order, iv.mpf(x), 64)
        truth = mpmath.besselj(order, x)
        assert lo(res.value) <= truth <= hi(res.value), (order, x)


def test_interval_argument_containment():
    mp.prec = 120
    x = iv.mpf([2.5, 2.75])
    v = besselJ(6, x, 64)
    for t in (2.5, 2.6, 2.75):
        truth = mpmath.besselj(6, mpmath.mpf(t))
        assert lo(v) <= truth <= hi(v)


def test_precision_exhausted_flag():
    res = besselj_eval(3, iv.mpf(50000), 64)
    assert not res.exact_enough
    assert lo(res.value) == -1 and hi(res.value) == 1


def test_width_monotone_in_precision():
    w = []
    for prec in (53, 96, 160):
        v = besselJ(5, iv.mpf(7), prec)
        w.append(hi(v) - lo(v))
    assert w[0] >= w[1] >= w[2]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 15), st.floats(0.01, 30))
def test_oracle_containment_property(order, x):
    mp.prec = 150
    res = besselj_eval(order, iv.mpf(x), 64)
    truth = mpmath.besselj(order, mpmath.mpf(x))
    assert lo(res.value) <= truth <= hi(res.value)
