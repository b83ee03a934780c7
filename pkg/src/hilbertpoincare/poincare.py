"""Certified Fourier coefficients of Hilbert Poincare series.

The nu-th coefficient of the mu-th series for weight k, base ideal c and
level n is

  c_k(nu, mu) = chi_mu(nu) + (N(nu)/N(mu))^((k-1)/2) * (2 pi)^2 N(cd)/sqrt(D)
                * sum over eps in O^{x+}, classes c0 of (cnd / O^x)^*
                  of S_{(c0)(cd)^{-1}}(nu, eps*mu; c0)/|N(c0)|
                    * J_{k-1}(4 pi sqrt(s1(nu eps mu))/|s1(c0)|)
                    * J_{k-1}(4 pi sqrt(s2(nu eps mu))/|s2(c0)|).

The truncation keeps unit-class representatives with |N(c0)| <= X (balanced
generators) and unit exponents eps = eps_plus^j with |j| <= M; everything
omitted is covered by a rigorous tail bound combining the Weil/trivial
Kloosterman bound with the factorial Bessel envelope
|J_{k-1}(x)| <= min(1, (x/2)^(k-1)/(k-1)!).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
from mpmath import iv

from .bessel import besselJ
from .errors import BudgetExceeded, MembershipViolated, PreconditionViolated
from .field import Elt, RealQuadraticField
from .ideals import (FractionalIdeal, IdealHNF, different_ideal, element_ideal,
                     ideal_product, ideals_of_norm, is_principal,
                     prime_splitting, principal_ideal, unit_ideal)
from .intervals import (hi, iv_from_fraction, iv_max, iv_min, iv_pow_frac,
                        iv_sqrt_fraction, lo, prec_guard, sup_abs, width)
from .kloosterman import (DEFAULT_ORDER_CAP, KloostermanQuery,
                          kloosterman_exact)
from .residues import DEFAULT_ENUM_BUDGET

DEFAULT_ETA = Fraction(1, 2)
ZETA_PARTIAL_TERMS = 10**5
BESSEL_ARG_EVAL_CAP = 2500.0


# ---------------------------------------------------------------------------
# parameters and value containers

class PoincareParams:
    """Weight k, base fractional ideal c (with generator when principal),
    integral level n."""

    def __init__(self, field: RealQuadraticField, k: int, cideal=None, level=None):
        if k < 4 or k % 2:
            raise PreconditionViolated("weight k must be even and >= 4")
        self.field = field
        self.k = k
        if cideal is None:
            cideal = FractionalIdeal(unit_ideal(field))
        if isinstance(cideal, IdealHNF):
            cideal = FractionalIdeal(cideal)
        self.cideal = cideal
        self.level = level if level is not None else unit_ideal(field)
        if isinstance(self.level, FractionalIdeal):
            self.level = self.level.as_integral()

    def key(self):
        return (self.field.d, self.k, self.cideal.num.key(), self.cideal.den,
                self.level.key())

    def norm_cd(self) -> Fraction:
        return self.cideal.norm() * different_ideal(self.field).norm()

    def norm_cnd(self) -> Fraction:
        return self.norm_cd() * self.level.norm()

    def to_json(self):
        return {"field": self.field.spec_string(), "k": self.k,
                "c": self.cideal.to_json(), "level": self.level.to_json()}


@dataclass
class CoefficientValue:
    chi_term: int
    finite_part: object          # interval: prefactor * truncated double sum
    tail: object                 # mpf >= 0, bound on everything omitted
    X: object
    M: int
    eta: Fraction
    scale: Fraction = Fraction(1)   # N(mu)^(k-1) for the symmetric variant

    def enclosure(self):
        """Interval certain to contain the true coefficient."""
        t = mpmath.mpf(self.tail)
        return (iv.mpf(self.chi_term) + self.finite_part
                + iv.mpf([-t, t])) * iv_from_fraction(self.scale)

    def to_json(self):
        from .intervals import iv_str, mpf_str
        return {"chi": self.chi_term,
                "finite_part": [mpf_str(lo(self.finite_part)), mpf_str(hi(self.finite_part))],
                "tail": mpf_str(self.tail),
                "cutoffs": {"X": str(self.X), "M": self.M, "eta": str(self.eta)},
                "scale": str(self.scale)}


@dataclass
class Certificate:
    params: PoincareParams
    mu: Elt
    verdict: str                 # "NONZERO" | "INCONCLUSIVE"
    coefficient: CoefficientValue
    margin: object               # mpf; > 0 iff NONZERO

    def to_json(self):
        from .intervals import mpf_str
        val = self.coefficient
        return {"schema": "v1", "params": self.params.to_json(),
                "mu": self.mu.to_json(), "verdict": self.verdict,
                "margin": mpf_str(self.margin),
                "chi": val.chi_term,
                "finite_part": [mpf_str(lo(val.finite_part)),
                                mpf_str(hi(val.finite_part))],
                "tail": mpf_str(val.tail),
                "cutoffs": {"X": str(val.X), "M": val.M, "eta": str(val.eta)}}


def chi_mu(nu: Elt, mu: Elt) -> int:
    """1 iff nu/mu is a totally positive unit (exact test)."""
    if nu.is_zero() or mu.is_zero():
        raise PreconditionViolated("chi requires nonzero arguments")
    t = nu / mu
    if not t.is_integral() or abs(t.norm()) != 1:
        return 0
    return 1 if t.is_totally_positive() else 0


# ---------------------------------------------------------------------------
# ideal-count table a_F(n)

_af_tables: dict = {}


def af_table(field, limit: int):
    """a_F(n) for 0 <= n <= limit (a_F(0) = 0), via an SPF sieve."""
    cached = _af_tables.get(field.d)
    if cached is not None and len(cached) > limit:
        return cached
    n = limit + 1
    spf = list(range(n))
    i = 2
    while i * i < n:
        if spf[i] == i:
            for j in range(i * i, n, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    a = [0] * n
    if n > 1:
        a[1] = 1
    local_cache: dict[tuple[int, int], int] = {}

    def local(p, e):
        key = (p, e)
        v = local_cache.get(key)
        if v is None:
            sp = prime_splitting(field, p)
            if sp.kind == "split":
                v = e + 1
            elif sp.kind == "inert":
                v = 1 if e % 2 == 0 else 0
            else:
                v = 1
            local_cache[key] = v
        return v

    for t in range(2, n):
        p = spf[t]
        e, m = 0, t
        while m % p == 0:
            m //= p
            e += 1
        a[t] = a[m] * local(p, e)
    _af_tables[field.d] = a
    return a


# ---------------------------------------------------------------------------
# the evaluator

class CoefficientEvaluator:
    """Incremental certified evaluation of c_k(nu, mu) for fixed arguments.

    Term intervals are cached by (class ideal, unit exponent), so raising the
    cutoffs on a certification ladder only adds new terms.
    """

    def __init__(self, params: PoincareParams, nu: Elt, mu: Elt,
                 eta: Fraction = DEFAULT_ETA, precision: int = 96,
                 order_cap: int = DEFAULT_ORDER_CAP,
                 enum_budget: int = DEFAULT_ENUM_BUDGET, store=None):
        F = params.field
        if not F.narrow_h1:
            raise PreconditionViolated(
                "coefficient evaluation requires narrow class number 1")
        for name, t in (("nu", nu), ("mu", mu)):
            if t.is_zero() or not t.is_totally_positive():
                raise MembershipViolated(f"{name} must be totally positive")
            if not params.cideal.contains(t):
                raise MembershipViolated(f"{name}={t} is not in the base ideal")
        eta = Fraction(eta)
        if not (0 < eta < 1):
            raise PreconditionViolated("eta must lie in (0, 1)")
        self.params = params
        self.nu = nu
        self.mu = mu
        self.eta = eta
        self.precision = precision
        self.order_cap = order_cap
        self.enum_budget = enum_budget
        self.store = store
        self.F = F
        self.k = params.k
        self.chi = chi_mu(nu, mu)
        self.n_o = params.norm_cnd()       # N(cnd), the class-norm unit
        self.n_b = params.norm_cd()        # N(cd)
        self._classes: list = []           # [(t, m=N_o*t, c_elt, modulus)]
        self._classes_upto = 0
        self._terms: dict = {}             # (ideal_key, j) -> interval
        self._prefactor = None

    # -- enumeration ---------------------------------------------------------
    def classes_upto(self, X):
        """Unit-class data for all |N(c)| <= X, balanced representatives."""
        tmax = int(Fraction(X) / self.n_o)
        if tmax > self._classes_upto:
            F = self.F
            o_frac = (self.params.cideal
                      * FractionalIdeal(self.params.level)
                      * FractionalIdeal(different_ideal(F)))
            for t in range(self._classes_upto + 1, tmax + 1):
                for J in ideals_of_norm(F, t):
                    num = ideal_product(o_frac.num, J)
                    g = is_principal(num)
                    if g is None:
                        raise PreconditionViolated(
                            f"non-principal class ideal {num} (h+ > 1?)")
                    g, _ = F.balanced_representative(g)
                    c_elt = g / F.from_int(o_frac.den)
                    modulus = ideal_product(self.params.level, J)
                    self._classes.append((t, self.n_o * t, c_elt, modulus))
            self._classes_upto = tmax
        return [cl for cl in self._classes if Fraction(cl[1]) <= Fraction(X)]

    def prefactor(self):
        if self._prefactor is None:
            with prec_guard(self.precision):
                rq = (self.nu.norm() / self.mu.norm()) ** (self.k - 1)
                pf = (iv_sqrt_fraction(rq) * (2 * iv.pi) ** 2
                      * iv_from_fraction(self.n_b)
                      / iv_sqrt_fraction(Fraction(self.F.D)))
                self._prefactor = pf
        return self._prefactor

    # -- individual terms ----------------------------------------------------
    def term(self, cls, j: int):
        t, m, c_elt, modulus = cls
        key = (modulus.key(), j)
        cached = self._terms.get(key)
        if cached is not None:
            return cached
        F = self.F
        with prec_guard(self.precision):
            eps = F.eps_plus_pow(j)
            q = KloostermanQuery(F, self.nu, eps * self.mu, modulus, c_elt)
            try:
                s_re = kloosterman_exact(q, self.order_cap, self.enum_budget,
                                         self.store).real_interval(self.precision)
            except BudgetExceeded:
                from .kloosterman import kloosterman_float
                s_re, _ = kloosterman_float(q, self.precision,
                                            self.order_cap, self.enum_budget)
            z = self.nu * eps * self.mu
            e1, e2 = z.embeddings(self.precision)
            c1, c2 = c_elt.embeddings(self.precision)
            four_pi = 4 * iv.pi
            x1 = four_pi * iv.sqrt(e1) / abs(c1)
            x2 = four_pi * iv.sqrt(e2) / abs(c2)
            # huge arguments pair with a negligible partner factor; |J| <= 1
            # keeps the term sound without an expensive series run
            js = [iv.mpf([-1, 1]) if float(hi(x)) > BESSEL_ARG_EVAL_CAP
                  else besselJ(self.k - 1, x, self.precision)
                  for x in (x1, x2)]
            val = s_re * js[0] * js[1] / iv_from_fraction(Fraction(m))
        self._terms[key] = val
        return val

    # -- tail bound -------------------------------------------------------------
    def _tail_constants(self):
        if getattr(self, "_tc", None) is not None:
            return self._tc
        with prec_guard(96):
            F, k = self.F, self.k
            A = F.A_interval(96)
            nu_mu = self.nu * self.mu
            w1, w2 = nu_mu.embeddings(96)
            gmax = iv.sqrt(iv_max(w1, w2))
            # per-term Kloosterman bound: min(trivial |S| <= N(m), Weil)
            nbar = Fraction(element_ideal(self.nu).num.norm())
            c2v = c2_constant(F)
            weil = (iv_pow_frac(iv.mpf(2), 2 + Fraction(F.f2, 2))
                    * iv_sqrt_fraction(Fraction(F.D)) * iv_sqrt_fraction(nbar)
                    * c2v / iv_from_fraction(self.n_b))
            kt = iv_min(iv_from_fraction(1 / self.n_b), weil)
            fact = Fraction(math.factorial(k - 1))
            e0 = (iv_pow_frac((2 * iv.pi) ** 2 * iv.sqrt(
                iv_from_fraction(self.nu.norm() * self.mu.norm())), Fraction(k - 1))
                / iv_from_fraction(fact * fact))
            base = 2 * iv.pi * gmax * A   # per-factor envelope base at |c_i| >= sqrt(m)/A
            self._tc = (kt, e0, base, A, fact)
        return self._tc

    def _blocked_af_sum(self, s: Fraction, t_from: int, t_to: int):
        """Upper bound on sum_{t_from < t <= t_to} a_F(t) (n_o t)^{-s}."""
        a = af_table(self.F, t_to)
        total = iv.mpf(0)
        t = t_from
        while t < t_to:
            t2 = min(t + max(1, int(0.42 * t)), t_to)
            cnt = sum(a[t + 1:t2 + 1])
            if cnt:
                total += cnt / iv_pow_frac(iv_from_fraction(self.n_o * (t + 1)), s)
            t = t2
        return total

    def tail_bound(self, X, M: int):
        """Upper bound on |prefactor * (all omitted terms)|.

        Per-factor Bessel bound: |J_{k-1}(x)| <= min(1, (x/2)^(k-1)/(k-1)!).
        For the omitted unit exponents (enumerated norms) only the small
        embedding factor is used: it decays like A^{-(k-1)|j|}.  For the
        omitted norms, the large factor is interpolated with an exponent
        theta in (0,1) to trade unit-decay against norm-decay; every theta
        gives a valid bound, so we take the best over a small grid.
        """
        with prec_guard(96):
            k = self.k
            kt, e0, base, A, fact = self._tail_constants()
            n_o = self.n_o
            tx = int(Fraction(X) / n_o)
            t0 = min(max(32 * tx, 4096), 3 * 10**5)
            # -- omitted norms (t > tx), all unit exponents ----------------
            # j = 0: product of both factorial envelopes, exact norm m.
            nt = e0 * (self._blocked_af_sum(Fraction(k - 1), tx, t0)
                       + 2 * iv_pow_frac(iv_from_fraction(n_o), Fraction(1 - k))
                       * iv_pow_frac(iv.mpf(t0), Fraction(5 - 2 * k, 2))
                       / iv_from_fraction(Fraction(2 * k - 5, 2)))
            # j != 0: min over the interpolation grid.
            best = None
            for theta in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3),
                          Fraction(5, 6), 1 - Fraction(self.eta, k - 1)):
                s = Fraction((k - 1)) * (1 + theta) / 2
                if s <= Fraction(3, 2):
                    continue
                r = 1 / iv_pow_frac(A, Fraction(k - 1) * (1 - theta))
                if hi(r) >= 1:
                    continue
                e1 = (iv_pow_frac(base, Fraction(k - 1) * (1 + theta))
                      / iv_pow_frac(iv_from_fraction(fact), 1 + theta))
                sa = 2 * r / (1 - r)
                piece = e1 * sa * (self._blocked_af_sum(s, tx, t0)
                                   + 2 * iv_pow_frac(iv_from_fraction(n_o), -s)
                                   * iv_pow_frac(iv.mpf(t0), Fraction(3, 2) - s)
                                   / iv_from_fraction(s - Fraction(3, 2)))
                if best is None or hi(piece) < hi(best):
                    best = piece
            nt += best
            # -- enumerated norms, |j| > M: small-factor bound only --------
            r0 = 1 / iv_pow_frac(A, Fraction(k - 1))
            sa0 = 2 * iv_pow_frac(r0, M + 1) / (1 - r0)
            e1_0 = iv_pow_frac(base, Fraction(k - 1)) / iv_from_fraction(fact)
            msum = iv.mpf(0)
            for (t, m, _c, _mod) in self.classes_upto(X):
                msum += 1 / iv_pow_frac(iv_from_fraction(Fraction(m)),
                                        Fraction(k - 1, 2))
            ut = e1_0 * sa0 * msum
            total = self.prefactor() * kt * (nt + ut)
            return hi(total)

    # -- main entry ----------------------------------------------------------
    def evaluate(self, X, M: int) -> CoefficientValue:
        with prec_guard(self.precision):
            acc = iv.mpf(0)
            for cls in self.classes_upto(X):
                for j in range(-M, M + 1):
                    acc += self.term(cls, j)
            finite = self.prefactor() * acc
        return CoefficientValue(self.chi, finite, self.tail_bound(X, M),
                                X, M, self.eta)


def coefficient(params: PoincareParams, nu: Elt, mu: Elt, X, M: int,
                eta: Fraction = DEFAULT_ETA, **kw) -> CoefficientValue:
    return CoefficientEvaluator(params, nu, mu, eta, **kw).evaluate(X, M)


def coefficient_tilde(params: PoincareParams, nu: Elt, mu: Elt, X, M: int,
                      eta: Fraction = DEFAULT_ETA, **kw) -> CoefficientValue:
    """The symmetric variant N(mu)^(k-1) * c_k(nu, mu)."""
    val = coefficient(params, nu, mu, X, M, eta, **kw)
    val.scale = Fraction(mu.norm()) ** (params.k - 1)
    return val


def tail_bound(params: PoincareParams, nu: Elt, mu: Elt, X, M: int,
               eta: Fraction = DEFAULT_ETA, **kw):
    return CoefficientEvaluator(params, nu, mu, eta, **kw).tail_bound(X, M)


# ---------------------------------------------------------------------------
# certification

@dataclass
class CertifyBudget:
    max_X: int = 40000
    max_M: int = 24
    start_X: int = 0
    start_M: int = 4

    def ladder(self, n_o: Fraction):
        X = min(self.start_X or max(64, int(8 * n_o)), self.max_X)
        M = min(self.start_M, self.max_M)
        while True:
            yield X, M
            if X >= self.max_X and M >= self.max_M:
                return
            X = min(2 * X, self.max_X)
            M = min(M + 2, self.max_M)


def certify_nonvanishing(params: PoincareParams, mu: Elt,
                         budget: CertifyBudget | None = None,
                         eta: Fraction = DEFAULT_ETA, **kw) -> Certificate:
    """Escalate cutoffs until |c_k(mu,mu) - 1| < 1 is certified.

    The verdict NONZERO is sound unconditionally: the enclosure places the
    coefficient within distance < 1 of 1.  Budget exhaustion yields
    INCONCLUSIVE, never a wrong answer.
    """
    budget = budget or CertifyBudget()
    ev = CoefficientEvaluator(params, mu, mu, eta, **kw)
    best = None
    for X, M in budget.ladder(ev.n_o):
        val = ev.evaluate(X, M)
        dist = sup_abs(iv.mpf(val.chi_term) + val.finite_part - 1)
        # rounded down at both steps: a positive margin must be provable
        margin = mpmath.fsub(mpmath.fsub(1, dist, rounding="d"),
                             mpmath.mpf(val.tail), rounding="d")
        if best is None or margin > best[0]:
            best = (margin, val)
        if margin > 0:
            return Certificate(params, mu, "NONZERO", val, margin)
    return Certificate(params, mu, "INCONCLUSIVE", best[1], best[0])


def audit_certificate(cert: Certificate) -> bool:
    """Re-check the NONZERO criterion from the stored enclosure."""
    if cert.verdict != "NONZERO":
        return True
    val = cert.coefficient
    dist = sup_abs(iv.mpf(val.chi_term) + val.finite_part - 1)
    return bool(mpmath.fadd(dist, mpmath.mpf(val.tail), rounding="u") < 1)


# ---------------------------------------------------------------------------
# effective constants and thresholds

@lru_cache(maxsize=None)
def c2_constant_squared(d: int) -> Fraction:
    """Exact square of C2 = max over ideals of 2^pr(m)/sqrt(N(m)).

    Only primes of norm < 4 increase the ratio, so C2^2 is the product of
    4/N(p) over primes of norm 2 or 3.
    """
    from .field import make_field
    F = make_field(d)
    out = Fraction(1)
    for p in (2, 3):
        sp = prime_splitting(F, p)
        for pr in sp.primes:
            if pr.norm() < 4:
                out *= Fraction(4, pr.norm())
    return out


def c2_constant(field):
    return iv_sqrt_fraction(c2_constant_squared(field.d))


def zeta_F_enclosure(field, s: Fraction, terms: int = ZETA_PARTIAL_TERMS):
    """Dedekind zeta enclosure via partial sums with a divisor-bound tail."""
    s = Fraction(s)
    if s <= Fraction(3, 2):
        raise PreconditionViolated("zeta_F enclosure requires s > 3/2")
    a = af_table(field, terms)
    with prec_guard(96):
        total = iv.mpf(0)
        for t in range(1, terms + 1):
            if a[t]:
                total += a[t] / iv_pow_frac(iv.mpf(t), s)
        tail_hi = hi(2 * iv_pow_frac(iv.mpf(terms), Fraction(3, 2) - s)
                     / iv_from_fraction(s - Fraction(3, 2)))
        return total + iv.mpf([0, tail_hi])


@dataclass
class ConstantsLedger:
    field: RealQuadraticField
    eta: Fraction
    A: object
    C1: object
    C2: object
    C3: object
    C4: object
    C5: object
    C6: object
    C7: object
    C8: object
    C9: object
    zetaF: object      # zeta_F(3 - eta) enclosure
    C: object          # final threshold constant (interval; use lower end)

    def to_json(self):
        from .intervals import iv_str
        out = {"eta": str(self.eta)}
        for name in ("A", "C1", "C2", "C3", "C4", "C5", "C6", "C7", "C8",
                     "C9", "zetaF", "C"):
            out[name] = iv_str(getattr(self, name))
        return out


_ledger_cache: dict = {}


def effective_constants(field, eta: Fraction = DEFAULT_ETA,
                        zeta_terms: int = 20000) -> ConstantsLedger:
    """Assemble the effective-constant chain for the non-vanishing threshold.

    The chain bounds, for balanced integral mu and even k >= 4,
      |c_k(mu,mu) - 1| <= C9 * (k-1)^eta * (2 pi e/(k-1))^(2k-2)
                          * N(mu)^(k-1/2) * N(cnd)^(-k+1+eta),
    with C9 = C4 * U0 * S_A * zeta_F(3-eta); solving < 1 for N(mu) and taking
    per-factor infima over even k >= 4 yields the k-free constant C of the
    displayed threshold.
    """
    eta = Fraction(eta)
    if not (0 < eta < 1):
        raise PreconditionViolated("eta must lie in (0,1)")
    ckey = (field.d, eta, zeta_terms)
    if ckey in _ledger_cache:
        return _ledger_cache[ckey]
    with prec_guard(96):
        A = field.A_interval(96)
        c1 = A * A
        c2 = c2_constant(field)
        two = iv.mpf(2)
        c3 = iv_pow_frac(two, 2 + Fraction(field.f2, 2)) * \
            iv_sqrt_fraction(Fraction(field.D)) * c2
        c4 = (2 * iv.pi) ** 2 * iv_pow_frac(two, 2 + Fraction(field.f2, 2)) * c2
        # U0: balanced-argument envelope constant
        u0 = iv_max(iv.mpf(1), iv_pow_frac(c1 / (2 * iv.pi * iv.e), eta))
        c5 = c4 * u0
        # unit sums: S_A at exponent eta (used in the chain) and the
        # eps-product form at exponent 2*eta (the ledger's C8)
        r1 = 1 / iv_pow_frac(A, eta)
        sa = 1 + 2 * r1 / (1 - r1)
        c6 = c5 * sa
        zf = zeta_F_enclosure(field, Fraction(3) - eta, zeta_terms)
        c7 = c6 * zf
        r2 = 1 / iv_pow_frac(A, 2 * eta)
        c8 = 1 + 2 * r2 / (1 - r2)
        c9 = c7
        # k-free threshold constant: product of per-factor infima over even k>=4
        two_pi_e = 2 * iv.pi * iv.e
        f1 = iv_min(iv.mpf(1), 1 / iv_pow_frac(c9, Fraction(2, 7)))
        f2 = 1 / (two_pi_e * two_pi_e)
        # max of ln(k-1)/(k-1/2) over even k >= 4 is at k = 4
        f3 = 1 / iv_pow_frac(iv.mpf(3), Fraction(2, 7) * eta)
        nd = Fraction(different_ideal(field).norm())
        f4 = iv_pow_frac(iv_from_fraction(nd), Fraction(2, 7) * (3 - eta))
        c_final = f1 * f2 * f3 * f4
        ledger = ConstantsLedger(field, eta, A, c1, c2, c3, c4, c5, c6, c7,
                                 c8, c9, zf, c_final)
        _ledger_cache[ckey] = ledger
        return ledger


def threshold_thm32(field, k: int, cideal, level, eta: Fraction = DEFAULT_ETA,
                    ledger: ConstantsLedger | None = None):
    """Norm threshold below which balanced mu certify NONZERO (lower bound).

    Returns the displayed value C (k-1)^((2k-2)/(k-1/2)) N(cn)^((k-1-eta)/(k-1/2)).
    """
    if isinstance(cideal, FractionalIdeal):
        if not cideal.is_integral():
            raise PreconditionViolated("threshold requires an integral base ideal")
        cideal = cideal.as_integral()
    ledger = ledger or effective_constants(field, eta)
    with prec_guard(96):
        ncn = Fraction(cideal.norm()) * Fraction(level.norm())
        gamma = Fraction(2 * k - 1, 2)     # k - 1/2
        val = (ledger.C
               * iv_pow_frac(iv.mpf(k - 1), Fraction(2 * k - 2) / gamma)
               * iv_pow_frac(iv_from_fraction(ncn), (Fraction(k - 1) - Fraction(eta)) / gamma))
        return lo(val)


def threshold_cor33(field, k: int, cideal: FractionalIdeal, level,
                    alpha: Elt, ledger: ConstantsLedger | None = None):
    """Fractional-ideal threshold, eta fixed at 1/2:
    C (k-1)^((4k-4)/(2k-1)) N(cn)^((2k-3)/(2k-1)) N(alpha)^(-2/(2k-1))."""
    if isinstance(cideal, IdealHNF):
        cideal = FractionalIdeal(cideal)
    if not alpha.is_totally_positive():
        raise PreconditionViolated("alpha must be totally positive")
    scaled = cideal * element_ideal(alpha)
    if not scaled.is_integral():
        from .errors import NotIntegral
        raise NotIntegral("alpha * c must be an integral ideal")
    ledger = ledger or effective_constants(field, Fraction(1, 2))
    with prec_guard(96):
        ncn = cideal.norm() * Fraction(level.norm())
        q = Fraction(2 * k - 1)
        val = (ledger.C
               * iv_pow_frac(iv.mpf(k - 1), Fraction(4 * k - 4) / q)
               * iv_pow_frac(iv_from_fraction(ncn), Fraction(2 * k - 3) / q)
               / iv_pow_frac(iv_from_fraction(Fraction(alpha.norm())), Fraction(2) / q))
        return lo(val)


def threshold_thm35(field, k: int, level, ledger: ConstantsLedger | None = None):
    """Threshold formula for the SL2(O)-type series (formula level only):
    C (k-1)^(2 - 6/(2k-1)) N(n)^((4k-3)/(4k-2))."""
    ledger = ledger or effective_constants(field, Fraction(1, 2))
    with prec_guard(96):
        val = (ledger.C
               * iv_pow_frac(iv.mpf(k - 1), Fraction(2) - Fraction(6, 2 * k - 1))
               * iv_pow_frac(iv_from_fraction(Fraction(level.norm())),
                             Fraction(4 * k - 3, 4 * k - 2)))
        return lo(val)


# ---------------------------------------------------------------------------
# coefficient recurrences and relation reports

@dataclass
class RecurrenceReport:
    status: str          # "consistent" | "inconsistent" | "inconclusive"
    lhs: object          # enclosure interval
    rhs: object
    shared_width: object
    scale: object


def _coprime_to(field, pid: IdealHNF, frac: FractionalIdeal) -> bool:
    from .ideals import ideal_sum
    if not frac.is_integral():
        raise PreconditionViolated("coprimality data is not integral")
    return ideal_sum(pid, frac.as_integral()).is_unit_ideal()


def recurrence_check_cor45(params: PoincareParams, nu: Elt, mu: Elt, p: Elt,
                           m: int, n: int, X, M: int,
                           eta: Fraction = DEFAULT_ETA, rel_tol=Fraction(1, 1000),
                           **kw) -> RecurrenceReport:
    """Check ct(nu p^m, mu p^n) = ct(nu, mu p^(m+n)) + N((p))^(k-1) ct(nu p^(m-1), mu p^(n-1)).

    All three symmetric coefficients are evaluated as enclosures at the given
    cutoffs; consistency means the left interval meets the right interval
    sum.  Enclosures too wide relative to the identity's scale come back
    "inconclusive" rather than a hollow "consistent".
    """
    from .kloosterman import _is_prime_element
    F = params.field
    if not F.narrow_h1:
        raise PreconditionViolated("narrow class number 1 required")
    q_gen = is_principal(params.cideal.num)
    if q_gen is None or not q_gen.is_totally_positive():
        raise PreconditionViolated("base ideal needs a totally positive generator")
    q_gen = q_gen / F.from_int(params.cideal.den)
    if m < 1 or n < 1:
        raise PreconditionViolated("m, n must be >= 1")
    if not (_is_prime_element(p) and p.is_totally_positive()):
        raise PreconditionViolated("p must be a totally positive prime element")
    pid = principal_ideal(p)
    copr = (element_ideal(nu) * element_ideal(mu) / element_ideal(q_gen)
            / element_ideal(q_gen) * FractionalIdeal(params.level))
    if not _coprime_to(F, pid, copr):
        raise PreconditionViolated("p must be coprime to nu*mu*q^-2*n")
    lhs_v = coefficient_tilde(params, nu * p ** m, mu * p ** n, X, M, eta, **kw)
    t1 = coefficient_tilde(params, nu, mu * p ** (m + n), X, M, eta, **kw)
    t2 = coefficient_tilde(params, nu * p ** (m - 1), mu * p ** (n - 1), X, M, eta, **kw)
    with prec_guard(96):
        lhs = lhs_v.enclosure()
        np_pow = iv_from_fraction(Fraction(pid.norm()) ** (params.k - 1))
        rhs = t1.enclosure() + np_pow * t2.enclosure()
        meets = lo(lhs) <= hi(rhs) and lo(rhs) <= hi(lhs)
        shared = max(width(lhs), width(rhs))
        scale = max(sup_abs(lhs), sup_abs(rhs), mpmath.mpf(1))
        if not meets:
            status = "inconsistent"
        elif shared < mpmath.mpf(float(Fraction(rel_tol))) * scale:
            status = "consistent"
        else:
            status = "inconclusive"
        return RecurrenceReport(status, lhs, rhs, shared, scale)


@dataclass
class RelationsReport:
    base: Certificate
    outcomes: dict       # exponent -> Certificate
    advisory: bool       # base certificate inconclusive => advisory only
    dichotomy_witnessed: bool | None

    def to_json(self):
        return {"base": self.base.to_json(),
                "outcomes": {str(k): v.to_json() for k, v in self.outcomes.items()},
                "advisory": self.advisory,
                "dichotomy_witnessed": self.dichotomy_witnessed}


def nonvanishing_relations_report(params: PoincareParams, mu: Elt, p: Elt,
                                  m: int, budget: CertifyBudget | None = None,
                                  **kw) -> RelationsReport:
    """Certification outcomes for mu p^(m-1), mu p^m, mu p^(m+1).

    When the base series at mu certifies NONZERO, the expected dichotomy is:
    either the middle one is nonzero, or both neighbors are.  INCONCLUSIVE
    certificates cannot refute it, so the report is advisory in that case.
    """
    from .kloosterman import _is_prime_element
    F = params.field
    if not F.narrow_h1:
        raise PreconditionViolated("narrow class number 1 required")
    if m < 1:
        raise PreconditionViolated("m must be >= 1")
    if not (_is_prime_element(p) and p.is_totally_positive()):
        raise PreconditionViolated("p must be a totally positive prime element")
    q_gen = is_principal(params.cideal.num)
    if q_gen is None:
        raise PreconditionViolated("base ideal must be principal")
    q_gen = q_gen / F.from_int(params.cideal.den)
    copr = element_ideal(mu) / element_ideal(q_gen) * FractionalIdeal(params.level)
    if not _coprime_to(F, principal_ideal(p), copr):
        raise PreconditionViolated("p must be coprime to mu*q^-1*n")
    base = certify_nonvanishing(params, mu, budget, **kw)
    outcomes = {e: certify_nonvanishing(params, mu * p ** e, budget, **kw)
                for e in (m - 1, m, m + 1) if e >= 0}
    advisory = base.verdict != "NONZERO"
    witnessed = None
    if not advisory:
        mid = outcomes[m].verdict == "NONZERO"
        side = (outcomes[m - 1].verdict == "NONZERO"
                and outcomes[m + 1].verdict == "NONZERO")
        witnessed = mid or side
    return RelationsReport(base, outcomes, advisory, witnessed)
