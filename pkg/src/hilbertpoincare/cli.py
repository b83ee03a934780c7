"""Command-line surface.

Element grammar (accepted by --nu/--mu/--c/--p and friends):
    "3"          rational integer
    "1+2*w"      a + b*omega (also "2*w", "w", "-w")
    "(a,b)"      coordinate pair a + b*omega
    "(a,b)/den"  fractional element
    "a/den"      rational fraction
    "delta"      the totally positive generator of the different
    "1/delta"    its inverse
Levels and moduli: an integer n for the principal ideal (n), "a,b,c" for an
HNF triple, or any element expression for the principal ideal it generates.

Exit codes: 0 success; 1 identity/bound violation found; 2 usage or
precondition error; 3 inconclusive certificate.
"""

from __future__ import annotations

import json
import os
import random
import re
import sys
from fractions import Fraction

import click
import mpmath

from . import __version__
from .cache import KloostermanStore
from .errors import HPError
from .field import make_field
from .hecke import CoeffFunction, HeckeContext, check_multiplicativity, hecke_action, pairing
from .ideals import (FractionalIdeal, IdealHNF, dedekind_a, ideal_sum,
                     ideals_of_norm, is_principal, principal_ideal, unit_ideal)
from .intervals import hi, iv_str, lo, mpf_str
from .kloosterman import (KloostermanQuery, kloosterman_exact,
                          kloosterman_float, selberg_check, weil_bound)
from .poincare import (CertifyBudget, PoincareParams, certify_nonvanishing,
                       effective_constants, recurrence_check_cor45,
                       threshold_cor33, threshold_thm32, threshold_thm35)

CONFIG_KEYS = {"order_cap", "residue_budget", "precision", "cache_dir", "format"}


class Settings:
    def __init__(self, config_path=None, cache_dir=None, precision=None,
                 order_cap=None, residue_budget=None, fmt=None):
        vals = {"order_cap": 10**6, "residue_budget": 10**7, "precision": 96,
                "cache_dir": os.environ.get("POINCARE_CACHE_DIR"), "format": "json"}
        if config_path:
            with open(config_path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
            unknown = set(doc) - CONFIG_KEYS
            if unknown:
                raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
            vals.update(doc)
        for name, arg in (("cache_dir", cache_dir), ("precision", precision),
                          ("order_cap", order_cap), ("residue_budget", residue_budget),
                          ("format", fmt)):
            if arg is not None:
                vals[name] = arg
        self.order_cap = int(vals["order_cap"])
        self.residue_budget = int(vals["residue_budget"])
        self.precision = int(vals["precision"])
        self.format = vals["format"]
        self.store = KloostermanStore(vals["cache_dir"]) if vals["cache_dir"] else None

    def kloosterman_kwargs(self):
        return {"order_cap": self.order_cap, "enum_budget": self.residue_budget,
                "store": self.store}


_ELT_RE = re.compile(r"^\(?\s*(-?\d+)\s*(?:,\s*(-?\d+)\s*)?\)?\s*(?:/\s*(\d+))?$")


def parse_element(field, text: str):
    s = text.strip().replace(" ", "")
    if s in ("delta", "+delta", "1/delta"):
        if field.delta is None:
            raise click.UsageError("field has no totally positive delta")
        return field.delta if s != "1/delta" else field.one() / field.delta
    m = re.match(r"^(-?\d+)?\s*([+-])?\s*(?:(-?\d+)\*)?w$", s)
    if m:
        a = int(m.group(1) or 0)
        b = int(m.group(3) or 1)
        if m.group(2) == "-":
            b = -b
        return field.elt(a, b)
    m = _ELT_RE.match(s)
    if m:
        a = int(m.group(1))
        b = int(m.group(2) or 0)
        den = int(m.group(3) or 1)
        return field.elt(a, b, den)
    raise click.UsageError(f"cannot parse element {text!r}")


def parse_ideal(field, text: str) -> IdealHNF:
    s = text.strip()
    if re.match(r"^\d+\s*,\s*\d+\s*,\s*\d+$", s):
        a, b, c = (int(t) for t in s.split(","))
        return IdealHNF(field, a, b, c)
    g = parse_element(field, s)
    if not g.is_integral():
        raise click.UsageError("ideal generator must be integral")
    if abs(g.norm()) == 1:
        return unit_ideal(field)
    return principal_ideal(g)


def emit(doc, fmt: str, csv_columns=None):
    if fmt == "json":
        click.echo(json.dumps(doc, sort_keys=True, separators=(",", ":")))
    elif fmt == "csv":
        import csv as csv_mod
        import io
        rows = doc if isinstance(doc, list) else [doc]
        cols = csv_columns or sorted({k for r in rows for k in r})
        buf = io.StringIO()
        w = csv_mod.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in rows:
            w.writerow([json.dumps(r[c], sort_keys=True) if isinstance(r.get(c), (dict, list))
                        else r.get(c, "") for c in cols])
        click.echo(buf.getvalue(), nl=False)
    else:  # table
        rows = doc if isinstance(doc, list) else [doc]
        for r in rows:
            for k in sorted(r):
                click.echo(f"{k}: {r[k]}")
            click.echo("")


def common_options(fn):
    fn = click.option("--d", "d", type=int, required=True,
                      help="squarefree d of Q(sqrt d)")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]),
                      default=None, help="output format (default json)")(fn)
    fn = click.option("--config", "config_path", type=click.Path(exists=True),
                      default=None, help="JSON config file")(fn)
    fn = click.option("--cache-dir", default=None,
                      help="Kloosterman cache directory (env POINCARE_CACHE_DIR)")(fn)
    fn = click.option("--precision", type=int, default=None, help="interval bits")(fn)
    fn = click.option("--order-cap", type=int, default=None,
                      help="max cyclotomic order for the exact path")(fn)
    fn = click.option("--residue-budget", type=int, default=None,
                      help="max residue ring size")(fn)
    return fn


def _settings(kw):
    return Settings(kw.pop("config_path"), kw.pop("cache_dir"), kw.pop("precision"),
                    kw.pop("order_cap"), kw.pop("residue_budget"), kw.pop("fmt"))


@click.group()
@click.version_option(version=__version__, prog_name="hilbert-poincare")
def main():
    """Kloosterman sums, Selberg's identity, and certified non-vanishing of
    Hilbert Poincare series over real quadratic fields."""


@main.command("field-info")
@common_options
def cmd_field_info(d, **kw):
    """Print the field's derived data."""
    st = _settings(kw)
    try:
        F = make_field(d)
    except HPError as exc:
        raise click.UsageError(str(exc))
    doc = {"field": F.spec_string(), "basis": F.basis_kind, "D": F.D,
           "fundamental_unit": F.fundamental_unit.to_json(),
           "fu_norm": F.fu_norm, "eps_plus": F.eps_plus.to_json(),
           "delta": F.delta.to_json() if F.delta is not None else None,
           "A": iv_str(F.A_interval(st.precision)), "f2": F.f2,
           "narrow_h1": F.narrow_h1}
    emit(doc, st.format)


@main.command("kloosterman")
@common_options
@click.option("--nu", required=True)
@click.option("--mu", required=True)
@click.option("--c", "c_text", required=True)
@click.option("--modulus", default=None, help="HNF a,b,c; default (c)")
def cmd_kloosterman(d, nu, mu, c_text, modulus, **kw):
    """Evaluate one Kloosterman sum (exact + interval + Weil bound)."""
    st = _settings(kw)
    F = make_field(d)
    nu_e, mu_e, c_e = (parse_element(F, t) for t in (nu, mu, c_text))
    mod = parse_ideal(F, modulus) if modulus else \
        (principal_ideal(c_e) if abs(c_e.norm()) != 1 else unit_ideal(F))
    try:
        q = KloostermanQuery(F, nu_e, mu_e, mod, c_e)
    except HPError as exc:
        raise click.UsageError(str(exc))
    doc = {"query": q.to_json()}
    try:
        val = kloosterman_exact(q, **st.kloosterman_kwargs())
        doc["exact"] = {"order": val.order,
                        "value_as_rational_if_real": val.as_int()}
    except HPError:
        doc["exact"] = None
    re_iv, im_iv = kloosterman_float(q, st.precision, st.order_cap, st.residue_budget)
    doc["float"] = {"re": [mpf_str(lo(re_iv)), mpf_str(hi(re_iv))],
                    "im": [mpf_str(lo(im_iv)), mpf_str(hi(im_iv))]}
    wb = weil_bound(q)
    doc["weil_bound"] = {"coeff": str(wb.coeff), "radicand": str(wb.radicand),
                         "interval": iv_str(wb.interval(st.precision))}
    emit(doc, st.format)


def _selberg_grid(F, qgen, size):
    base = [F.zero(), F.one(), F.from_int(2), F.omega(), qgen]
    if size == "full":
        base += [F.elt(1, 1), F.elt(2, 1), qgen * 2, F.elt(-1, 2)]
    return base[:5] if size == "small" else base


@main.command("selberg-check")
@common_options
@click.option("--max-norm-q", type=int, default=200)
@click.option("--grid", type=click.Choice(["small", "full"]), default="small")
def cmd_selberg_check(d, max_norm_q, grid, **kw):
    """Sweep Selberg's identity over q with |N(q)| <= bound; exit 1 on any
    exact mismatch."""
    st = _settings(kw)
    F = make_field(d)
    checked = failures = 0
    for n in range(1, max_norm_q + 1):
        for idl in ideals_of_norm(F, n):
            g = is_principal(idl)
            if g is None:
                continue
            for nu in _selberg_grid(F, g, grid):
                for mu in _selberg_grid(F, g, grid):
                    rep = selberg_check(F, nu, mu, g, **st.kloosterman_kwargs())
                    checked += 1
                    if not rep.holds:
                        failures += 1
    emit({"field": F.spec_string(), "checked": checked, "failures": failures,
          "max_norm_q": max_norm_q, "status": "all hold" if not failures else "FAILED"},
         st.format)
    if failures:
        sys.exit(1)


@main.command("weil-audit")
@common_options
@click.option("--samples", type=int, default=500)
@click.option("--seed", type=int, default=20260808)
def cmd_weil_audit(d, samples, seed, **kw):
    """Sample random queries and report max |S| / weil_bound (must be <= 1)."""
    st = _settings(kw)
    F = make_field(d)
    rng = random.Random(seed)
    from .ideals import different_ideal, element_ideal, ideal_product
    max_ratio = mpmath.mpf(0)
    violations = 0
    done = 0
    while done < samples:
        n = rng.randint(2, 60)
        opts = ideals_of_norm(F, n)
        if not opts:
            continue
        mod = rng.choice(opts)
        box = ideal_product(mod, different_ideal(F))
        s, t = rng.randint(-4, 4), rng.randint(-4, 4)
        if s == 0 and t == 0:
            s = 1
        c_e = F.elt(s * box.a + t * box.b, t * box.c)
        if c_e.is_zero():
            continue
        # nu, mu sampled as lattice points of c*(m d)^{-1}, so membership
        # holds by construction
        dom = element_ideal(c_e) / FractionalIdeal(box)
        def rand_in_dom():
            u, v = rng.randint(-8, 8), rng.randint(-8, 8)
            return F.elt(u * dom.num.a + v * dom.num.b, v * dom.num.c, dom.den)
        nu, mu = rand_in_dom(), rand_in_dom()
        q = KloostermanQuery(F, nu, mu, mod, c_e)
        re_iv, im_iv = kloosterman_float(q, st.precision, st.order_cap,
                                         st.residue_budget)
        sup2 = max(abs(lo(re_iv)), abs(hi(re_iv))) ** 2 + \
            max(abs(lo(im_iv)), abs(hi(im_iv))) ** 2
        bound_lo = lo(weil_bound(q).interval(st.precision))
        ratio = mpmath.sqrt(sup2) / bound_lo
        if ratio > max_ratio:
            max_ratio = ratio
        if ratio > 1:
            violations += 1
        done += 1
    emit({"field": F.spec_string(), "samples": samples,
          "max_ratio": mpf_str(max_ratio), "violations": violations}, st.format)
    if violations:
        sys.exit(1)


@main.command("certify")
@common_options
@click.option("--k", type=int, required=True)
@click.option("--level", default="1")
@click.option("--mu", "mu_text", required=True)
@click.option("--eta", default="1/2")
@click.option("--max-x", type=int, default=20000)
@click.option("--max-m", type=int, default=16)
def cmd_certify(d, k, level, mu_text, eta, max_x, max_m, **kw):
    """Certify non-vanishing of the mu-th Poincare series (c = O)."""
    st = _settings(kw)
    F = make_field(d)
    params = PoincareParams(F, k, level=parse_ideal(F, level))
    mu = parse_element(F, mu_text)
    try:
        cert = certify_nonvanishing(params, mu, CertifyBudget(max_x, max_m),
                                    Fraction(eta), precision=st.precision,
                                    order_cap=st.order_cap,
                                    enum_budget=st.residue_budget, store=st.store)
    except HPError as exc:
        raise click.UsageError(str(exc))
    doc = cert.to_json()
    doc["ledger"] = effective_constants(F, Fraction(eta)).to_json()
    emit(doc, st.format)
    if cert.verdict != "NONZERO":
        sys.exit(3)


@main.command("thresholds")
@common_options
@click.option("--k", type=int, required=True)
@click.option("--level", default="1")
@click.option("--eta", default="1/2")
@click.option("--alpha", default="1", help="totally positive alpha for the fractional-ideal threshold")
def cmd_thresholds(d, k, level, eta, alpha, **kw):
    """Print the constants ledger and the three norm thresholds."""
    st = _settings(kw)
    F = make_field(d)
    lvl = parse_ideal(F, level)
    eta_f = Fraction(eta)
    led = effective_constants(F, eta_f)
    alpha_e = parse_element(F, alpha)
    doc = {"field": F.spec_string(), "k": k, "level": lvl.to_json(),
           "ledger": led.to_json(),
           "threshold_thm32": mpf_str(threshold_thm32(F, k, unit_ideal(F), lvl, eta_f, led)),
           "threshold_cor33": mpf_str(threshold_cor33(
               F, k, FractionalIdeal(unit_ideal(F)), lvl, alpha_e)),
           "threshold_thm35": mpf_str(threshold_thm35(F, k, lvl))}
    emit(doc, st.format)


@main.command("recurrence")
@common_options
@click.option("--k", type=int, required=True)
@click.option("--nu", default="1")
@click.option("--mu", default="1")
@click.option("--p", "p_text", required=True)
@click.option("--m", type=int, default=1)
@click.option("--n", type=int, default=1)
@click.option("--x", "x_cut", type=int, default=2000)
@click.option("--big-m", type=int, default=3)
@click.option("--level", default="1")
def cmd_recurrence(d, k, nu, mu, p_text, m, n, x_cut, big_m, level, **kw):
    """Check the symmetric-coefficient recurrence at the given cutoffs."""
    st = _settings(kw)
    F = make_field(d)
    params = PoincareParams(F, k, level=parse_ideal(F, level))
    try:
        rep = recurrence_check_cor45(
            params, parse_element(F, nu), parse_element(F, mu),
            parse_element(F, p_text), m, n, x_cut, big_m,
            precision=st.precision, order_cap=st.order_cap,
            enum_budget=st.residue_budget, store=st.store)
    except HPError as exc:
        raise click.UsageError(str(exc))
    emit({"status": rep.status,
          "lhs": [mpf_str(lo(rep.lhs)), mpf_str(hi(rep.lhs))],
          "rhs": [mpf_str(lo(rep.rhs)), mpf_str(hi(rep.rhs))],
          "shared_width": mpf_str(rep.shared_width)}, st.format)
    if rep.status == "inconsistent":
        sys.exit(1)
    if rep.status == "inconclusive":
        sys.exit(3)


@main.command("hecke-check")
@common_options
@click.option("--k", type=int, default=8)
@click.option("--level", default="1")
@click.option("--samples", type=int, default=200)
@click.option("--seed", type=int, default=20260808)
def cmd_hecke_check(d, k, level, samples, seed, **kw):
    """Randomized pairing-symmetry / identity / multiplicativity audit."""
    st = _settings(kw)
    F = make_field(d)
    ctx = HeckeContext(k, parse_ideal(F, level))
    rng = random.Random(seed)
    norms = [n for n in range(1, 120) if dedekind_a(F, n) > 0]

    def rand_ideal():
        return rng.choice(ideals_of_norm(F, rng.choice(norms)))

    def rand_f():
        f = CoeffFunction()
        for _ in range(rng.randint(1, 5)):
            f[rand_ideal()] = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        return f

    sym_fail = ident_fail = mult_fail = mult_done = 0
    for _ in range(samples):
        m_i, q_i, f = rand_ideal(), rand_ideal(), rand_f()
        if pairing(ctx, m_i, q_i, f) != pairing(ctx, q_i, m_i, f):
            sym_fail += 1
        if hecke_action(ctx, unit_ideal(F), f) != f:
            ident_fail += 1
        if ideal_sum(m_i, q_i).is_unit_ideal() and mult_done < samples // 2:
            mult_done += 1
            if not check_multiplicativity(ctx, m_i, q_i, f):
                mult_fail += 1
    doc = {"field": F.spec_string(), "samples": samples,
           "symmetry_failures": sym_fail, "identity_failures": ident_fail,
           "multiplicativity_checked": mult_done,
           "multiplicativity_failures": mult_fail}
    emit(doc, st.format)
    if sym_fail or ident_fail or mult_fail:
        sys.exit(1)


if __name__ == "__main__":
    main()
