"""Left-invariant differential operators and t-transversal distributions.

Ω maps an enveloping-algebra element to the left-invariant t-fiber-tangential
differential operator it generates; a transversal distribution is a finite
sum of terms [[E, Ω(u)]] acting on test functions F by

    [[E, D]](F)(x) = D(F)(beta_E(x)).

The *-product follows Prop-style term rewriting
    [[E', D']] * [[E, D]] = [[E'.E, Adbar_{E^-1}(D') D]],
and dist_mul_defcheck evaluates the *defining* double formula
    T'(g -> T|_{s(g)}(F o L_g))(x)
independently via doubled-variable polynomial manipulation, as an oracle.

Functions on the arrow space appearing along the way are kept in the form
sum (f_i o s) * P_i with f_i a coefficient function on the base and P_i a
polynomial on the arrow chart; this block is closed under the frame fields.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .adjoint import ad_uea
from .coeffs import Chart, CoeffFn, Polynomial, Q, Region
from .errors import ChartMismatch, UnsupportedComposition, VerificationFailed
from .groupoid import AffineMap, Bisection, bisection_inv, bisection_mul
from .lie_rinehart import Section, random_polynomial
from .uea import UEAElement, uea_mul


def _embed(P: Polynomial, total: int, offset: int) -> Polynomial:
    """View an n-variable polynomial inside a larger variable block."""
    return Polynomial(
        total,
        {
            tuple([0] * offset + list(e) + [0] * (total - offset - P.nvars)): c
            for e, c in P.terms.items()
        },
    )


# ---------------------------------------------------------------------------
# Left-invariant frame fields (derived from the structure maps)
# ---------------------------------------------------------------------------


def frame_field(model, i):
    """X-bar_i: the left-invariant extension of the i-th frame element,
    derived from the multiplication polynomials (independent of the frame
    stored on the model)."""
    n = model.arrow_chart.dim
    gvars = [Polynomial.var(n, k) for k in range(n)]
    s_of_g = list(model.s_map)
    if model.base.dim:
        unit_at_s = [p.substitute(s_of_g) for p in model.unit_map]
        v = [p.substitute(s_of_g) for p in model.unit_frame[i]]
    else:
        unit_at_s = [Polynomial.const(n, p.constant_value()) for p in model.unit_map]
        v = [Polynomial.const(n, p.constant_value()) for p in model.unit_frame[i]]
    subs = gvars + unit_at_s
    field = []
    for d in range(n):
        acc = Polynomial(n, {})
        for e in range(n):
            J = model.mult_map[d].derive(n + e).substitute(subs)
            acc = acc + J * v[e]
        field.append(acc)
    return field


def field_commutator(V, W):
    n = len(V)
    out = []
    for d in range(n):
        acc = Polynomial(n, {})
        for e in range(n):
            acc = acc + V[e] * W[d].derive(e) - W[e] * V[d].derive(e)
        out.append(acc)
    return out


def field_equal(V, W):
    return all(a == b for a, b in zip(V, W))


def left_invariant_field(model, X: Section):
    """The left-invariant extension of a section with polynomial
    coefficients, as a polynomial vector field on the arrow chart."""
    n = model.arrow_chart.dim
    out = [Polynomial(n, {}) for _ in range(n)]
    for i, h in enumerate(X.coeffs):
        if h.is_zero:
            continue
        if not h.is_poly:
            raise UnsupportedComposition("flat coefficients have no polynomial extension")
        hs = h.poly.substitute(model.s_map) if model.base.dim else Polynomial.const(
            n, h.poly.constant_value()
        )
        out = [o + hs * c for o, c in zip(out, model.frame[i])]
    return out


# ---------------------------------------------------------------------------
# Functions on the arrow space:  sum (f o s)(h-block) * P
# ---------------------------------------------------------------------------


class ArrowFn:
    """sum_i (f_i o s)(h) * P_i over a variable space that contains the
    arrow coordinates of h as a contiguous block at h_offset."""

    __slots__ = ("model", "nvars", "h_offset", "terms")

    def __init__(self, model, nvars, h_offset, terms):
        self.model = model
        self.nvars = nvars
        self.h_offset = h_offset
        self.terms = [(c, P) for c, P in terms if not (c.is_zero or P.is_zero)]

    @staticmethod
    def lift(model, P: Polynomial, nvars=None, h_offset=0) -> "ArrowFn":
        nvars = model.arrow_chart.dim if nvars is None else nvars
        if P.nvars != nvars:
            raise ValueError("polynomial variable count mismatch")
        one = CoeffFn.const(model.base, 1)
        return ArrowFn(model, nvars, h_offset, [(one, P)])

    def __add__(self, other: "ArrowFn") -> "ArrowFn":
        return ArrowFn(self.model, self.nvars, self.h_offset, self.terms + other.terms)

    def apply_frame(self, i: int) -> "ArrowFn":
        """Apply the left-invariant frame field X-bar_i in the h-block."""
        model = self.model
        n = model.arrow_chart.dim
        new = []
        for c, P in self.terms:
            for d in range(n):
                pd = _embed(model.frame[i][d], self.nvars, self.h_offset)
                if pd.is_zero:
                    continue
                dP = P.derive(self.h_offset + d)
                if not dP.is_zero:
                    new.append((c, pd * dP))
                for m in range(model.base.dim):
                    dsm = _embed(model.s_map[m].derive(d), self.nvars, self.h_offset)
                    if dsm.is_zero:
                        continue
                    cm = c.derive(m)
                    if not cm.is_zero:
                        new.append((cm, pd * dsm * P))
        return ArrowFn(self.model, self.nvars, self.h_offset, new)

    def mul_base(self, f: CoeffFn) -> "ArrowFn":
        return ArrowFn(self.model, self.nvars, self.h_offset, [(f * c, P) for c, P in self.terms])

    def apply_uea(self, u: UEAElement) -> "ArrowFn":
        out = ArrowFn(self.model, self.nvars, self.h_offset, [])
        for exp, f in u.terms.items():
            acc = self
            word = [i for i, k in enumerate(exp) for _ in range(k)]
            for i in reversed(word):
                acc = acc.apply_frame(i)
            out = out + acc.mul_base(f)
        return out

    def substitute(self, new_nvars, subs, base_sub=None) -> "ArrowFn":
        """Substitute all variables (subs: polynomials in the new space);
        base_sub composes every base coefficient on the way."""
        terms = []
        for c, P in self.terms:
            c2 = c.compose(base_sub) if base_sub is not None else c
            terms.append((c2, P.substitute(subs)))
        # the h-block is consumed; treat the result as plain parameters
        return ArrowFn(self.model, new_nvars, 0, terms)

    def as_polynomial(self) -> Polynomial:
        """Exact polynomial form when every coefficient is polynomial and the
        variable space is exactly the arrow chart."""
        model = self.model
        n = model.arrow_chart.dim
        if self.nvars != n or self.h_offset != 0:
            raise ValueError("not a plain arrow-space function")
        total = Polynomial(n, {})
        for c, P in self.terms:
            if not c.is_poly:
                raise UnsupportedComposition("flat coefficient has no polynomial form")
            cs = c.poly.substitute(model.s_map) if model.base.dim else Polynomial.const(
                n, c.poly.constant_value()
            )
            total = total + cs * P
        return total

    def eval_arrow(self, g):
        """Value at an arrow (h-block = the whole variable space)."""
        x = self.model.s_of(g)
        total = 0
        for c, P in self.terms:
            total = total + c.eval(x) * P.eval(g)
        return total


def omega_apply(model, u: UEAElement, F) -> ArrowFn:
    """Ω(u) applied to a test function (a polynomial on the arrow chart)."""
    if isinstance(F, Polynomial):
        F = ArrowFn.lift(model, F)
    return F.apply_uea(u)


# ---------------------------------------------------------------------------
# Transversal distributions
# ---------------------------------------------------------------------------


class TransvDist:
    """Finite formal sum of terms [[E, Ω(u)]], keyed by bisection id."""

    __slots__ = ("model", "terms")

    def __init__(self, model, terms=None):
        self.model = model
        clean = {}
        for bid, u in dict(terms or {}).items():
            if bid not in model.registry:
                raise KeyError(f"unregistered bisection {bid!r}")
            if not u.is_zero:
                prev = clean.get(bid)
                clean[bid] = u if prev is None else prev + u
        self.terms = {bid: u for bid, u in clean.items() if not u.is_zero}

    @staticmethod
    def single(model, E: Bisection, u: UEAElement) -> "TransvDist":
        model.register(E)
        return TransvDist(model, {E.bid: u})

    @staticmethod
    def zero(model) -> "TransvDist":
        return TransvDist(model, {})

    @property
    def is_zero_canonical(self) -> bool:
        return not self.terms

    def is_zero(self) -> bool:
        """Zero as a distribution (canonical form merged along germ classes)."""
        if not self.terms:
            return True
        from .phi import dist_is_zero

        return dist_is_zero(self)

    def __eq__(self, other):
        return (
            isinstance(other, TransvDist)
            and self.model is other.model
            and self.terms == other.terms
        )

    def __add__(self, other: "TransvDist") -> "TransvDist":
        terms = dict(self.terms)
        for bid, u in other.terms.items():
            terms[bid] = terms[bid] + u if bid in terms else u
        return TransvDist(self.model, terms)

    def __neg__(self):
        return TransvDist(self.model, {bid: -u for bid, u in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def text(self) -> str:
        if not self.terms:
            return "0"
        names = {bid: alias for alias, bid in self.model.aliases.items()}
        return " + ".join(
            f"[[{names.get(bid, bid)}, {u.text()}]]" for bid, u in sorted(self.terms.items())
        )

    def __repr__(self):
        return f"TransvDist({self.text()})"


def dist_eval(T: TransvDist, F):
    """T(F) as a coefficient function on the base (exactly representable
    cases); for the etale model a list of (target region, CoeffFn) pieces."""
    model = T.model
    if model.kind == "etale_action":
        pieces = []
        for bid, u in T.terms.items():
            E = model.registry[bid]
            f = u.degree0()
            Fg = F.get(E.gamma)
            if Fg is None or f.is_zero:
                continue
            inv = E.gamma.inverse()
            invfn = CoeffFn(model.base, Polynomial(1, {(1,): inv.p, (0,): inv.q}))
            pieces.append((E.target_domain(), (f * Fg).compose([invfn])))
        return pieces
    out = CoeffFn.const(model.base, 0)
    for bid, u in T.terms.items():
        E = model.registry[bid]
        af = omega_apply(model, u, F)
        if model.kind == "group":
            for c, P in af.terms:
                out = out + c.scale(P.eval(E.element))
        else:
            tau_inv = E.tau_inv_coeff()
            if not tau_inv.is_poly:
                raise UnsupportedComposition("beta_E is not polynomial")
            beta = [Polynomial.var(1, 0), tau_inv.poly]
            for c, P in af.terms:
                out = out + c.compose([tau_inv]) * CoeffFn(model.base, P.substitute(beta))
    return out


def dist_eval_at(T: TransvDist, F, x):
    """Numeric (or exact, when the data is rational) value of T(F)(x)."""
    model = T.model
    total = 0
    for bid, u in T.terms.items():
        E = model.registry[bid]
        if model.kind == "etale_action":
            f = u.degree0()
            Fg = F.get(E.gamma)
            if Fg is None:
                continue
            xr = E.gamma.inverse()(x)
            if E.domain.contains((xr,)):
                total = total + f.eval((xr,)) * Fg.eval((xr,))
            continue
        if model.kind == "group":
            af = omega_apply(model, u, F)
            for c, P in af.terms:
                total = total + c.eval(()) * P.eval(E.element)
            continue
        tdom = E.target_domain()
        if not (tdom.is_whole or tdom.contains((x,))):
            continue
        xr = E.tau_inv_apply(x)
        af = omega_apply(model, u, F)
        for c, P in af.terms:
            total = total + c.eval((xr,)) * P.eval((x, xr))
    return total


def dist_mul(T2: TransvDist, T1: TransvDist) -> TransvDist:
    """[[E', u']] * [[E, u]] = [[E'.E, Adbar_{E^-1}(u') u]] termwise."""
    if T2.model is not T1.model:
        raise ChartMismatch("distributions over different models")
    model = T2.model
    out = {}
    for bid2, u2 in T2.terms.items():
        E2 = model.registry[bid2]
        for bid1, u1 in T1.terms.items():
            E1 = model.registry[bid1]
            v = uea_mul(ad_uea(bisection_inv(E1), u2), u1)
            prod = model.register(bisection_mul(E2, E1))
            out[prod.bid] = out[prod.bid] + v if prod.bid in out else v
    return TransvDist(model, out)


# ---------------------------------------------------------------------------
# The defining double formula, evaluated independently
# ---------------------------------------------------------------------------


def _defcheck_term_pair(model, E2, u2, E1, u1, F, x0):
    """T'(g -> T|_{s(g)}(F o L_g))(x0) for single terms T' = [[E2, u2]],
    T = [[E1, u1]], via doubled-variable symbolic composition."""
    if model.kind == "etale_action":
        f2, f1 = u2.degree0(), u1.degree0()
        g2inv, g1inv = E2.gamma.inverse(), E1.gamma.inverse()
        x1 = g2inv(x0)
        if not (E2.domain.contains((x1,))):
            return Q(0)
        x2 = g1inv(x1)
        if not E1.domain.contains((x2,)):
            return Q(0)
        Fg = F.get(E2.gamma.after(E1.gamma))
        if Fg is None:
            return Q(0)
        return f2.eval((x1,)) * f1.eval((x2,)) * Fg.eval((x2,))

    n = model.arrow_chart.dim
    # stage 1: H(g, h) = F(mult(g, h)) on doubled variables (g block first)
    H = F.substitute(model.mult_map)
    af = ArrowFn(model, 2 * n, n, [(CoeffFn.const(model.base, 1), H)])
    af = af.apply_uea(u1)
    # substitute h := beta_{E1}(s(g)); the g block survives
    gvars = [Polynomial.var(n, k) for k in range(n)]
    if model.kind == "group":
        h_vals = [Polynomial.const(n, c) for c in E1.element]
        inner = af.substitute(n, gvars + h_vals)
    else:
        tau1_inv = E1.tau_inv_coeff()
        if not tau1_inv.is_poly:
            raise UnsupportedComposition("defining formula needs polynomial beta")
        s_of_g = model.s_map[0]  # 1-D base
        h_vals = [s_of_g, tau1_inv.poly.substitute([s_of_g])]
        inner = af.substitute(n, gvars + h_vals, base_sub=[tau1_inv])
    # stage 2: apply the outer operator in the g block and evaluate at
    # g := beta_{E2}(x0)
    inner = ArrowFn(model, n, 0, inner.terms)
    outer = inner.apply_uea(u2)
    if model.kind == "group":
        return outer.eval_arrow(E2.element)
    tdom = E2.target_domain()
    if not (tdom.is_whole or tdom.contains((x0,))):
        return Q(0)
    x2 = E2.tau_inv_apply(x0)
    return outer.eval_arrow((x0, x2))


def dist_mul_defcheck(T2: TransvDist, T1: TransvDist, F, x):
    """Evaluate the defining *-product formula at x, bilinearly over terms."""
    model = T2.model
    total = Q(0)
    for bid2, u2 in T2.terms.items():
        for bid1, u1 in T1.terms.items():
            total = total + _defcheck_term_pair(
                model, model.registry[bid2], u2, model.registry[bid1], u1, F, x
            )
    return total


# ---------------------------------------------------------------------------
# Adbar with the commuting-square verification
# ---------------------------------------------------------------------------


def commuting_square_gap(model, E: Bisection, u: UEAElement, F: Polynomial):
    """Ω(U(Ad_E)u)(F) o R_E^{-1}  minus  Ω(u)(F o R_E^{-1}), exactly.

    Both sides of the section-4.1 square are composed with R_E^{-1} so that
    only the forward map tau enters; for the representable (polynomial)
    cases the gap is returned as a polynomial on the arrow chart.
    """
    n = model.arrow_chart.dim
    if model.kind == "group":
        kinv = [Polynomial.const(n, c) for c in bisection_inv(E).element]
        gvars = [Polynomial.var(n, k) for k in range(n)]
        rinv = [p.substitute(gvars + kinv) for p in model.mult_map]
        # careful: R_E^{-1}(g) = g . k^{-1}
        lhs = omega_apply(model, ad_uea(E, u), F).as_polynomial().substitute(rinv)
        rhs = omega_apply(model, u, F.substitute(rinv)).as_polynomial()
        return lhs - rhs
    if model.kind == "etale_action":
        # rank 0: u is a coefficient; the square reduces to a base identity
        f = u.degree0()
        lhs = ad_uea(E, u).degree0()  # f o tau^{-1}
        tau = E.tau_coeff()
        return lhs.compose([tau]) - f
    # pair model: R_E^{-1}(y, x) = (y, tau(x))
    tau = E.tau_coeff()
    if not tau.is_poly:
        raise UnsupportedComposition("flat bisections need the series check")
    rinv = [Polynomial.var(2, 0), tau.poly.substitute([Polynomial.var(2, 1)])]
    lhs_af = omega_apply(model, ad_uea(E, u), F)
    lhs = Polynomial(2, {})
    for c, P in lhs_af.terms:
        cs = c.compose([tau])  # (c o s) o R_E^{-1} = c o tau at the source slot
        lhs = lhs + cs.poly.substitute([Polynomial.var(2, 1)]) * P.substitute(rinv)
    rhs = omega_apply(model, u, F.substitute(rinv)).as_polynomial()
    return lhs - rhs


def adbar(E: Bisection, u: UEAElement, nchecks: int = 5, seed: int = 0xC0FFEE) -> UEAElement:
    """Ad_E transported to operators, verified against the defining formula
    D(F o R_E^{-1}) o R_E on random test polynomials."""
    model = E.model
    result = ad_uea(E, u)
    rng = random.Random(seed)
    n = model.arrow_chart.dim
    for _ in range(nchecks):
        F = random_polynomial(rng, n, 3)
        gap = commuting_square_gap(model, E, u, F)
        ok = gap.is_zero if isinstance(gap, Polynomial) else gap.is_zero
        if not ok:
            raise VerificationFailed(f"commuting square fails for {E.bid} on {F!r}")
    return result


# ---------------------------------------------------------------------------
# Truncated series (jets): numeric commuting-square check for flat bisections
# ---------------------------------------------------------------------------


JET_ORDER = 8


class Jet:
    """Truncated Taylor series sum a_k eps^k of fixed order."""

    __slots__ = ("a",)

    def __init__(self, coeffs):
        a = list(coeffs)[:JET_ORDER]
        self.a = a + [0.0] * (JET_ORDER - len(a))

    @staticmethod
    def const(c):
        return Jet([float(c)])

    @staticmethod
    def variable(x0):
        return Jet([float(x0), 1.0])

    def __add__(self, other):
        return Jet([x + y for x, y in zip(self.a, other.a)])

    def __sub__(self, other):
        return Jet([x - y for x, y in zip(self.a, other.a)])

    def __mul__(self, other):
        out = [0.0] * JET_ORDER
        for i, x in enumerate(self.a):
            if x == 0.0:
                continue
            for j, y in enumerate(other.a):
                if i + j < JET_ORDER and y != 0.0:
                    out[i + j] += x * y
        return Jet(out)

    def scale(self, c):
        return Jet([float(c) * x for x in self.a])

    def shift(self) -> "Jet":
        """The derivative series: d/deps."""
        return Jet([(k + 1) * self.a[k + 1] for k in range(JET_ORDER - 1)])

    def value(self):
        return self.a[0]


def jet_of_coeff(f: CoeffFn, x0: float) -> Jet:
    """Taylor jet of a 1-D coefficient function at x0 (float arithmetic on
    exactly computed symbolic derivatives)."""
    coeffs = []
    g = f
    fact = 1.0
    for k in range(JET_ORDER):
        coeffs.append(float(g.eval((x0,))) / fact)
        g = g.derive(0)
        fact *= k + 1
    return Jet(coeffs)


def jet_poly(P: Polynomial, jets) -> Jet:
    """Evaluate a polynomial on jet arguments."""
    total = Jet.const(0)
    for e, c in P.terms.items():
        term = Jet.const(c)
        for j, k in zip(jets, e):
            for _ in range(k):
                term = term * j
        total = total + term
    return total


def jet_inverse(tj: Jet, s0: float) -> Jet:
    """Jet at x0 = tj.value() of the compositional inverse of t -> tau(t),
    given the jet of tau at s0 (Newton iteration on truncated series)."""
    x0 = tj.value()
    # seek sigma with tau(sigma(x)) = x; sigma(x0) = s0
    sigma = Jet([s0, 1.0 / tj.a[1]])
    ident = Jet.variable(x0)
    for _ in range(JET_ORDER):
        tau_comp = _jet_compose(tj, sigma, s0)
        dtau = _jet_compose(_jet_derivative_series(tj), sigma, s0)
        err = tau_comp - ident
        sigma = sigma - err * _jet_reciprocal(dtau)
    return sigma


def _jet_derivative_series(j: Jet) -> Jet:
    return j.shift()


def _jet_compose(outer: Jet, inner: Jet, inner_center) -> Jet:
    """outer(inner(eps)) where outer is a jet in (t - inner_center)."""
    dev = Jet([inner.a[0] - float(inner_center)] + inner.a[1:])
    total = Jet.const(0)
    power = Jet.const(1)
    for k in range(JET_ORDER):
        total = total + power.scale(outer.a[k])
        power = power * dev
    return total


def _jet_reciprocal(j: Jet) -> Jet:
    inv = Jet.const(1.0 / j.a[0])
    two = Jet.const(2.0)
    for _ in range(JET_ORDER):
        inv = inv * (two - j * inv)
    return inv


def commuting_square_gap_numeric(model, E: Bisection, u: UEAElement, F: Polynomial, g):
    """|LHS - RHS| of the commuting square at the arrow g, for pair-model
    bisections whose tau is a flat kink (rank-1 case, series arithmetic)."""
    if model.kind != "pair":
        raise ValueError("series check is for the pair model")
    y0, x0 = float(g[0]), float(g[1])
    tau = E.tau_coeff()
    s0 = float(E.tau_inv_apply(x0))
    # ---- side A: Ω(U(Ad_E)u)(F) at (y0, x0) -------------------------------
    # U(Ad_E)(f * D^j) = (f o tau^{-1}) * (w D)^j with w = tau' o tau^{-1};
    # build the operator's coefficient jets at x0 and apply them to F.
    tau_jet_s = jet_of_coeff(tau, s0)        # jet of tau at s0
    sigma = jet_inverse(tau_jet_s, s0)       # jet of tau^{-1} at x0
    taup_jet_s = jet_of_coeff(tau.derive(0), s0)
    w = _jet_compose(taup_jet_s, sigma, s0)  # jet of tau' o tau^{-1} at x0
    side_a = 0.0
    for exp, f in u.terms.items():
        j = exp[0]
        # operator coefficients c_k with (wD)^j = sum c_k D^k, as jets
        coeffs = {0: Jet.const(1)}
        for _ in range(j):
            new = {}
            for k, c in coeffs.items():
                # (c D^k)(w D g) : c * sum_m C(k,m) w^(m) D^(k-m+1)
                wm = w
                binom = 1
                for m in range(k + 1):
                    key = k - m + 1
                    term = (c * wm).scale(binom)
                    new[key] = new.get(key, Jet.const(0)) + term
                    wm = wm.shift()
                    binom = binom * (k - m) // (m + 1)
            coeffs = new
        fval = jet_of_coeff(f, s0)
        fx = _jet_compose(fval, sigma, s0)   # f o tau^{-1} at x0
        for k, c in coeffs.items():
            dF = F
            for _ in range(k):
                dF = dF.derive(1)
            side_a += (fx * c).value() * float(dF.eval((y0, x0)))
    # ---- side B: Ω(u)(F o R_E^{-1}) at R_E(g) = (y0, s0) -------------------
    # H(y, x) = F(y, tau(x)); D^j H via the jet of x -> F(y0, tau(x)) at s0.
    tau_jet = jet_of_coeff(tau, s0)
    H_jet = jet_poly(F, [Jet.const(y0), tau_jet])
    side_b = 0.0
    fact = [1.0]
    for k in range(1, JET_ORDER):
        fact.append(fact[-1] * k)
    for exp, f in u.terms.items():
        j = exp[0]
        side_b += float(f.eval((s0,))) * H_jet.a[j] * fact[j]
    return abs(side_a - side_b)


# ---------------------------------------------------------------------------
# Test banks
# ---------------------------------------------------------------------------


def test_bank(model, seed: int = 0xC0FFEE, max_deg: int = 4):
    """Polynomial test functions separating the desk-scale distributions."""
    rng = random.Random(seed)
    if model.kind == "etale_action":
        gammas = _gamma_closure(model)
        bank = []
        for gamma in gammas:
            for d in range(max_deg + 1):
                bank.append({gamma: CoeffFn(model.base, Polynomial(1, {(d,): Q(1)}))})
        for _ in range(5):
            bank.append(
                {g: CoeffFn(model.base, random_polynomial(rng, 1, 3)) for g in gammas}
            )
        return bank
    n = model.arrow_chart.dim
    bank = []

    def monos(deg, prefix):
        if len(prefix) == n:
            if sum(prefix) <= deg:
                bank.append(Polynomial(n, {tuple(prefix): Q(1)}))
            return
        for k in range(deg + 1 - sum(prefix)):
            monos(deg, prefix + [k])

    monos(max_deg, [])
    for _ in range(5):
        bank.append(random_polynomial(rng, n, 3))
    return bank


def _gamma_closure(model, rounds: int = 2):
    """Group elements reachable by short products of registered ones."""
    gammas = {E.gamma for E in model.registry.values() if E.gamma is not None}
    out = set(gammas)
    frontier = set(gammas)
    for _ in range(rounds):
        frontier = {a.after(b) for a in frontier for b in gammas}
        out |= frontier
    return sorted(out, key=lambda g: (g.p, g.q))
