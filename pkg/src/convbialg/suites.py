"""Named verification suites shared by the CLI and the acceptance tests.

Every suite returns a deterministic report dict
    {"suite": name, "pass": bool, "checks": [{"name", "pass", ...}, ...]}
computed from a seed; no global state.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .adjoint import ad_uea
from .coeffs import CoeffFn, Polynomial, Q
from .conv import (
    ConvElement,
    ConvTensor,
    antipode_etale,
    conv_coproduct,
    conv_counit,
    conv_eq,
    conv_mul,
)
from .dist import (
    TransvDist,
    commuting_square_gap,
    commuting_square_gap_numeric,
    dist_eval_at,
    dist_mul,
    dist_mul_defcheck,
    test_bank,
)
from .errors import UnsupportedComposition, UnsupportedProduct
from .groupoid import bisection_inv, bisection_mul, unit_bisection
from .lie_rinehart import (
    check_axioms,
    heisenberg_algebra,
    random_polynomial,
    rank_zero_algebroid,
    tangent_line_algebroid,
)
from .models import builtin_models
from .phi import (
    phi,
    scenario_cartier_gabriel,
    scenario_etale_iso,
    scenario_kernel_example,
)
from .uea import (
    TensorElement,
    UEAElement,
    coproduct,
    counit,
    uea_mul,
)


def _models(models=None):
    return models if models is not None else builtin_models()


def _random_uea(rng, A, max_deg=2, nterms=2):
    terms = {}
    for _ in range(rng.randint(1, nterms)):
        exp = [0] * A.rank
        for _ in range(rng.randint(0, max_deg)):
            if A.rank:
                exp[rng.randrange(A.rank)] += 1
        terms[tuple(exp)] = CoeffFn(A.chart, random_polynomial(rng, A.chart.dim, 2))
    return UEAElement(A, terms)


# ---------------------------------------------------------------------------
# 1: Lie-Rinehart axioms
# ---------------------------------------------------------------------------


def suite_lie_rinehart(seed=0xC0FFEE, models=None):
    checks = []
    for name, A in (
        ("tangent-line", tangent_line_algebroid()),
        ("heisenberg", heisenberg_algebra()),
        ("rank-zero", rank_zero_algebroid(tangent_line_algebroid().chart)),
    ):
        rep = check_axioms(A, seed=seed)
        checks.append({"name": f"axioms on {name}", "pass": rep["passed"],
                       "witness": [c for c in rep["checks"] if not c["pass"]] or None})
    bad = heisenberg_algebra()
    # corrupt antisymmetry: [Y, X] should be -Z
    bad.bracket_table[1][0] = [CoeffFn.const(bad.chart, 0)] * 2 + [CoeffFn.const(bad.chart, 1)]
    rep = check_axioms(bad, seed=seed)
    checks.append({
        "name": "corrupted table fails with witness",
        "pass": (not rep["passed"]) and any(c["witness"] for c in rep["checks"] if not c["pass"]),
    })
    return {"suite": "lie-rinehart", "pass": all(c["pass"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# 2: enveloping algebra suite
# ---------------------------------------------------------------------------


def _triple_expand(t: TensorElement, side: str):
    """(Delta x id) or (id x Delta) of a two-tensor, as {(a,b,c): CoeffFn}."""
    A = t.parent
    out = {}
    for (a, b), f in t.terms.items():
        inner = coproduct(UEAElement(A, {(a if side == "left" else b): CoeffFn.const(A.chart, 1)}))
        for (p, q), g in inner.terms.items():
            key = (p, q, b) if side == "left" else (a, p, q)
            fg = f * g
            out[key] = out[key] + fg if key in out else fg
    return {k: f for k, f in out.items() if not f.is_zero}


def _counit_slot(t: TensorElement, slot: int) -> UEAElement:
    A = t.parent
    zero_exp = tuple([0] * A.rank)
    out = UEAElement.zero(A)
    for (a, b), f in t.terms.items():
        if (a if slot == 0 else b) == zero_exp:
            out = out + UEAElement(A, {(b if slot == 0 else a): f})
    return out


def suite_uea(seed=0xC0FFEE, models=None):
    rng = random.Random(seed)
    algebras = [("tangent-line", tangent_line_algebroid()), ("heisenberg", heisenberg_algebra())]
    checks = []

    ok, witness = True, None
    for k in range(100):
        name, A = algebras[k % 2]
        u, v, w = (_random_uea(rng, A) for _ in range(3))
        if uea_mul(uea_mul(u, v), w) != uea_mul(u, uea_mul(v, w)):
            ok, witness = False, f"{name}: ({u.text()})({v.text()})({w.text()})"
            break
    checks.append({"name": "associativity (100 triples)", "pass": ok, "witness": witness})

    ok, witness = True, None
    for k in range(30):
        name, A = algebras[k % 2]
        u = _random_uea(rng, A)
        if _triple_expand(coproduct(u), "left") != _triple_expand(coproduct(u), "right"):
            ok, witness = False, f"{name}: {u.text()}"
            break
    checks.append({"name": "coassociativity", "pass": ok, "witness": witness})

    ok, witness = True, None
    for k in range(30):
        name, A = algebras[k % 2]
        u = _random_uea(rng, A)
        d = coproduct(u)
        if _counit_slot(d, 0) != u or _counit_slot(d, 1) != u:
            ok, witness = False, f"{name}: {u.text()}"
            break
    checks.append({"name": "counit axioms (eps x id, id x eps)", "pass": ok, "witness": witness})

    ok, witness = True, None
    for k in range(30):
        name, A = algebras[k % 2]
        u, v = _random_uea(rng, A), _random_uea(rng, A)
        if coproduct(uea_mul(u, v)) != coproduct(u).mul(coproduct(v)):
            ok, witness = False, f"{name}: {u.text()} * {v.text()}"
            break
    checks.append({"name": "Delta multiplicative (30 pairs)", "pass": ok, "witness": witness})

    ok, witness = True, None
    for k in range(30):
        name, A = algebras[k % 2]
        u = _random_uea(rng, A)
        r = CoeffFn(A.chart, random_polynomial(rng, A.chart.dim, 2))
        d = coproduct(u)
        if d.act_right_left_slot(r) != d.act_right_right_slot(r):
            ok, witness = False, f"{name}: {u.text()} with r={r.text()}"
            break
    checks.append({"name": "Delta image in the balanced subspace", "pass": ok, "witness": witness})

    ok, witness = True, None
    for k in range(30):
        name, A = algebras[k % 2]
        u = _random_uea(rng, A)
        if coproduct(u).swap() != coproduct(u):
            ok, witness = False, f"{name}: {u.text()}"
            break
    checks.append({"name": "cocommutativity", "pass": ok, "witness": witness})

    return {"suite": "uea", "pass": all(c["pass"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# 3: etale Hopf algebroid axioms (i)-(viii)
# ---------------------------------------------------------------------------


def _random_etale_element(rng, model, nterms=2) -> ConvElement:
    A = model.algebroid
    bisections = list(model.registry.values())
    a = ConvElement.zero(model)
    for _ in range(rng.randint(1, nterms)):
        E = rng.choice(bisections)
        f = CoeffFn(A.chart, random_polynomial(rng, 1, 2))
        a = a + ConvElement.single(model, E, UEAElement.from_coeff(A, f))
    return a


def suite_hopf_etale(seed=0xC0FFEE, models=None):
    model = _models(models)["etale"]
    A = model.algebroid
    rng = random.Random(seed)
    elements = [_random_etale_element(rng, model) for _ in range(30)]
    pairs = [(elements[i], elements[(i + 7) % 30]) for i in range(30)]
    checks = []

    def run(name, fn):
        ok, witness = True, None
        for i, (a, b) in enumerate(pairs):
            if not fn(a, b):
                ok, witness = False, f"pair {i}: {a.text()} ; {b.text()}"
                break
        checks.append({"name": name, "pass": ok, "witness": witness})

    def rfun(i):
        return CoeffFn(A.chart, random_polynomial(random.Random(seed + i), 1, 2))

    run("(i) Delta(A) in the balanced subspace",
        lambda a, b: conv_coproduct(a).act_right_left(rfun(1)) ==
                     conv_coproduct(a).act_right_right(rfun(1)))
    run("(ii) eps restricted to R is the identity",
        lambda a, b: conv_counit(ConvElement.from_coeff(model, rfun(2))) == rfun(2))
    unit = model.register(unit_bisection(model))
    run("(iii) Delta restricted to R is the canonical embedding",
        lambda a, b: conv_coproduct(ConvElement.from_coeff(model, rfun(3))) ==
                     ConvTensor(model, {(unit.bid, unit.bid): TensorElement.of(
                         UEAElement.from_coeff(A, rfun(3)), UEAElement.one(A))}))
    run("(iv) eps(ab) = eps(a.eps(b))",
        lambda a, b: conv_counit(conv_mul(a, b)) ==
                     conv_counit(conv_mul(a, ConvElement.from_coeff(model, conv_counit(b)))))
    run("(v) Delta(ab) = Delta(a)Delta(b)",
        lambda a, b: conv_coproduct(conv_mul(a, b)) ==
                     conv_coproduct(a).mul(conv_coproduct(b)))
    run("cocommutativity",
        lambda a, b: conv_coproduct(a).swap() == conv_coproduct(a))
    run("(vi) S restricted to R is the identity",
        lambda a, b: antipode_etale(ConvElement.from_coeff(model, rfun(6))) ==
                     ConvElement.from_coeff(model, rfun(6)))
    run("(vii) S(ab) = S(b)S(a)",
        lambda a, b: antipode_etale(conv_mul(a, b)) ==
                     conv_mul(antipode_etale(b), antipode_etale(a)))
    run("S involution",
        lambda a, b: antipode_etale(antipode_etale(a)) == a)

    def axiom_viii(a, b):
        lhs = conv_coproduct(a).apply_antipode_left().mu()
        # expected: sum <f o tau_E, E^-1.E> with E^-1.E the unit over s(E)
        expected = ConvElement.zero(model)
        total = CoeffFn.const(A.chart, 0)
        for bid, u in a.terms.items():
            E = model.registry[bid]
            fs = u.degree0().compose([E.tau_coeff()])
            prod = model.register(bisection_mul(bisection_inv(E), E))
            expected = expected + ConvElement(model, {prod.bid: UEAElement.from_coeff(A, fs)})
            total = total + fs
        if not conv_eq(lhs, expected):
            return False
        return conv_counit(antipode_etale(a)) == total

    run("(viii) mu(S x id)Delta = eps o S (support-respecting form)", axiom_viii)

    return {"suite": "hopf-etale", "pass": all(c["pass"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# 4: the commuting square
# ---------------------------------------------------------------------------


def suite_commuting_square(seed=0xC0FFEE, models=None, nu=20, nf=5):
    rng = random.Random(seed)
    checks = []
    for mname, model in sorted(_models(models).items()):
        A = model.algebroid
        n = model.arrow_chart.dim
        ok, witness, exact_count, numeric_count, worst = True, None, 0, 0, 0.0
        for E in list(model.registry.values()):
            flat = model.kind == "pair" and E.tau.affine_parts() is None
            for iu in range(nu):
                u = _random_uea(rng, A, max_deg=2)
                for jf in range(nf):
                    F = random_polynomial(rng, n, 3)
                    if flat:
                        for g in ((0.5, 0.35), (-1.25, -0.8)):
                            gap = commuting_square_gap_numeric(model, E, u, F, g)
                            worst = max(worst, gap)
                            numeric_count += 1
                            if gap > 1e-9:
                                ok, witness = False, f"{E.bid} |gap|={gap}"
                    else:
                        gap = commuting_square_gap(model, E, u, F)
                        exact_count += 1
                        if not gap.is_zero:
                            ok, witness = False, f"{E.bid} u={u.text()} F={F.text()}"
        checks.append({
            "name": f"{mname}: exact on {exact_count} cases"
                    + (f", series (<1e-9) on {numeric_count}" if numeric_count else ""),
            "pass": ok, "witness": witness, "max_numeric_gap": worst,
        })
    return {"suite": "commuting-square", "pass": all(c["pass"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# 5: defining *-product formula vs Prop-style rewriting
# ---------------------------------------------------------------------------


def _term_bank(model, rng):
    """Small bank of single-term distributions with polynomial data."""
    A = model.algebroid
    out = []
    if model.kind == "etale_action":
        for E in model.registry.values():
            for P in (Polynomial.const(1, 2), Polynomial(1, {(1,): Q(1)}),
                      Polynomial(1, {(2,): Q(1), (0,): Q(-1)})):
                out.append((E, UEAElement.from_coeff(A, CoeffFn(A.chart, P))))
        return out
    for E in model.registry.values():
        if model.kind == "pair" and E.tau.affine_parts() is None:
            continue  # the defining formula needs a polynomial beta
        us = [UEAElement.from_coeff(A, CoeffFn(A.chart, random_polynomial(rng, A.chart.dim, 2)))]
        if A.rank:
            us.append(UEAElement.generator(A, 0))
            us.append(uea_mul(UEAElement.generator(A, A.rank - 1),
                              UEAElement.from_coeff(A, CoeffFn(A.chart,
                                                               random_polynomial(rng, A.chart.dim, 1)))))
        out.extend((E, u) for u in us)
    return out


def suite_prop43(seed=0xC0FFEE, models=None):
    rng = random.Random(seed)
    checks = []
    total_pairs = 0
    for mname, model in sorted(_models(models).items()):
        bank = _term_bank(model, rng)
        n = model.arrow_chart.dim
        if model.kind == "etale_action":
            gammas = sorted({E.gamma for E in model.registry.values()},
                            key=lambda g: (g.p, g.q))
            fbank = [{g.after(h): CoeffFn(model.base, random_polynomial(rng, 1, 2))
                      for g in gammas for h in gammas} for _ in range(2)]
        else:
            fbank = [random_polynomial(rng, n, 2) for _ in range(2)]
        xs = [Q(0), Q(1, 3), Q(-7, 5)]
        ok, witness, count = True, None, 0
        for E2, u2 in bank:
            for E1, u1 in bank:
                T2 = TransvDist.single(model, E2, u2)
                T1 = TransvDist.single(model, E1, u1)
                prod = dist_mul(T2, T1)
                F = fbank[count % len(fbank)]
                x = xs[count % len(xs)]
                lhs = dist_eval_at(prod, F, x)
                rhs = dist_mul_defcheck(T2, T1, F, x)
                count += 1
                if lhs != rhs:
                    ok, witness = False, f"{E2.bid}*{E1.bid} at x={x}: {lhs} != {rhs}"
                    break
            if not ok:
                break
        total_pairs += count
        checks.append({"name": f"{mname}: {count} term pairs exact", "pass": ok,
                       "witness": witness})
    checks.append({"name": f">= 100 pairs total (got {total_pairs})",
                   "pass": total_pairs >= 100})
    return {"suite": "prop43", "pass": all(c["pass"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# 6: Phi is an algebra homomorphism
# ---------------------------------------------------------------------------


def _random_conv_element(rng, model, poly_only=True) -> ConvElement:
    A = model.algebroid
    pool = [
        E for E in model.registry.values()
        if model.kind != "pair" or E.tau.affine_parts() is not None
    ]
    a = ConvElement.zero(model)
    for _ in range(rng.randint(1, 2)):
        E = rng.choice(pool)
        a = a + ConvElement.single(model, E, _random_uea(rng, A, max_deg=2))
    return a


def suite_phi_homomorphism(seed=0xC0FFEE, models=None, npairs=100):
    rng = random.Random(seed)
    checks = []
    for mname, model in sorted(_models(models).items()):
        ok, witness = True, None
        for i in range(npairs):
            a = _random_conv_element(rng, model)
            b = _random_conv_element(rng, model)
            if phi(conv_mul(a, b)) != dist_mul(phi(a), phi(b)):
                ok, witness = False, f"pair {i}: {a.text()} ; {b.text()}"
                break
        checks.append({"name": f"{mname}: {npairs} random pairs exact", "pass": ok,
                       "witness": witness})
    return {"suite": "phi-homomorphism", "pass": all(c["pass"] for c in checks),
            "checks": checks}


# ---------------------------------------------------------------------------
# 7-9: named scenarios
# ---------------------------------------------------------------------------


def suite_kernel_example(seed=0xC0FFEE, models=None):
    rep = scenario_kernel_example(_models(models)["pair"])
    return {"suite": "kernel-example", "pass": rep["pass"], "checks": rep["checks"],
            "strata": rep["strata"]}


def suite_cartier_gabriel(seed=0xC0FFEE, models=None):
    rep = scenario_cartier_gabriel(_models(models)["heisenberg"], seed=seed)
    return {"suite": "cartier-gabriel", "pass": rep["pass"], "checks": rep["checks"]}


def suite_etale_iso(seed=0xC0FFEE, models=None):
    rep = scenario_etale_iso(_models(models)["etale"], seed=seed)
    return {"suite": "etale-iso", "pass": rep["pass"], "checks": rep["checks"]}


# ---------------------------------------------------------------------------
# 10: finite-difference sanity
# ---------------------------------------------------------------------------


def suite_fd_sanity(seed=0xC0FFEE, models=None, npoints=20, rel_tol=1e-6):
    from .coeffs import Chart

    rng = random.Random(seed)
    chart = Chart.line("M")
    families = [
        ("random polynomial", CoeffFn(chart, random_polynomial(rng, 1, 4))),
        ("random polynomial 2", CoeffFn(chart, random_polynomial(rng, 1, 3))),
        ("phi", CoeffFn.phi(chart)),
        ("t + 2*phi", CoeffFn.flat_piece(chart, Polynomial.var(1, 0), 2, 2)),
        ("kink t + phi/4phi", CoeffFn.flat_piece(chart, Polynomial.var(1, 0), 1, 4)),
    ]
    h = 1e-5
    checks = []
    for name, f in families:
        df = f.derive(0)
        ok, worst = True, 0.0
        for k in range(npoints):
            x = 0.3 + 2.4 * k / (npoints - 1)
            if k % 2:
                x = -x
            fd = (float(f.eval((x + h,))) - float(f.eval((x - h,)))) / (2 * h)
            ex = float(df.eval((x,)))
            rel = abs(fd - ex) / max(1.0, abs(ex))
            worst = max(worst, rel)
            if rel > rel_tol:
                ok = False
        checks.append({"name": f"{name}: {npoints} points, rel <= {rel_tol}",
                       "pass": ok, "max_rel": worst})
    return {"suite": "fd-sanity", "pass": all(c["pass"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


SUITES = {
    "lie-rinehart": suite_lie_rinehart,
    "uea": suite_uea,
    "hopf-etale": suite_hopf_etale,
    "commuting-square": suite_commuting_square,
    "prop43": suite_prop43,
    "phi-homomorphism": suite_phi_homomorphism,
    "kernel-example": suite_kernel_example,
    "cartier-gabriel": suite_cartier_gabriel,
    "etale-iso": suite_etale_iso,
    "fd-sanity": suite_fd_sanity,
}


def run_suite(name, seed=0xC0FFEE, models=None):
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    return SUITES[name](seed=seed, models=models)


def run_all(seed=0xC0FFEE, models=None, jobs=1):
    models = _models(models)
    names = sorted(SUITES)
    if jobs and jobs > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as ex:
            reports = list(ex.map(lambda n: run_suite(n, seed=seed, models=models), names))
    else:
        reports = [run_suite(n, seed=seed, models=models) for n in names]
    return {"pass": all(r["pass"] for r in reports), "suites": reports}
