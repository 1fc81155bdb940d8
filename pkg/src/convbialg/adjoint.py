"""The adjoint action of bisections: C_E, Ad_E, U(Ad_E) and germ-level Ad_e.

Ad_E is the derivative of the conjugation C_E(h) = alpha_E(t(h)) . h .
alpha_E(s(h))^{-1}.  For each model the matrix of Ad_E in the frame is
obtained in two independent ways (a closed-form expression, and symbolic
or numeric differentiation of C_E) and cross-checked.
"""

from __future__ import annotations

from fractions import Fraction

from .coeffs import CoeffFn, Polynomial, Q
from .errors import DomainError, UnsupportedComposition, VerificationFailed
from .groupoid import Bisection, GermArrow
from .lie_rinehart import Section
from .uea import GermUEA, UEAElement, uea_germ, uea_mul


def conjugate_arrow(E: Bisection, h):
    """C_E(h) = alpha_E(t(h)) . h . alpha_E(s(h))^{-1}."""
    model = E.model
    sx, tx = model.s_of(h), model.t_of(h)
    for x in (sx, tx):
        if model.kind != "group" and not E.contains_source(x):
            raise DomainError("arrow endpoints outside s(E)")
    left = E.alpha(tx)
    right = model.inv_arrow(E.alpha(sx))
    return model.mult_arrow(left, model.mult_arrow(h, right))


def _pair_matrix(E: Bisection):
    d = E.tau_diffeo()
    if d.fwd is None:
        raise UnsupportedComposition("Ad matrix of an inverted flat bisection")
    return [[d.fwd.derive()]]


def _group_matrix_derived(E: Bisection):
    """Jacobian of h -> C_k(h) at the unit, from the structure polynomials."""
    model = E.model
    n = model.arrow_chart.dim
    k = [Polynomial.const(n, c) for c in E.element]
    hvars = [Polynomial.var(n, i) for i in range(n)]
    kinv = [p.substitute(k) for p in model.inv_map]
    kh = [p.substitute(k + hvars) for p in model.mult_map]
    conj = [p.substitute(kh + kinv) for p in model.mult_map]
    unit = tuple(Q(0) for _ in range(n))
    chart = model.base
    return [
        [CoeffFn.const(chart, conj[i].derive(j).eval(unit)) for j in range(n)]
        for i in range(n)
    ]


def ad_matrix(E: Bisection):
    """The r x r matrix of Ad_E in the frame, as CoeffFns over s(E).

    Ad_E(X_j) = sum_i (M[i][j] o tau^{-1}) X_i.
    """
    model = E.model
    A = model.algebroid
    if A.rank == 0:
        return []
    if model.kind == "pair":
        M = _pair_matrix(E)
        _crosscheck_pair(E, M)
        return M
    if model.kind == "group":
        M = _group_matrix_derived(E)
        stored = model.stored_ad_matrix(E.element)
        for i in range(A.rank):
            for j in range(A.rank):
                if M[i][j] != A._fn(stored[i][j]):
                    raise VerificationFailed(
                        f"Ad matrix mismatch at ({i},{j}) for {E.bid}"
                    )
        return M
    raise ValueError("etale models have a rank-0 algebroid")


def _crosscheck_pair(E: Bisection, M):
    """Numeric check: d/dx of the source leg of C_E matches tau'."""
    eps = 1e-6
    for x in (Q(-3, 4), Q(1, 2)):
        if not (E.domain.is_whole or E.domain.contains((x,))):
            continue
        y = E.tau_apply(x)
        plus = conjugate_arrow(E, (float(y), float(x) + eps))[1]
        minus = conjugate_arrow(E, (float(y), float(x) - eps))[1]
        fd = (plus - minus) / (2 * eps)
        if abs(fd - float(M[0][0].eval((x,)))) > 1e-4 * (1 + abs(fd)):
            raise VerificationFailed(f"Ad cross-check failed for {E.bid} at x={x}")


def ad_section(E: Bisection, X: Section) -> Section:
    """The pushforward Ad_E(X), expressed over t(E)."""
    A = X.parent
    M = ad_matrix(E)
    tau_inv = E.tau_inv_coeff() if A.chart.dim else None
    out = []
    for i in range(A.rank):
        acc = CoeffFn.const(A.chart, 0)
        for j in range(A.rank):
            acc = acc + M[i][j] * X.coeffs[j]
        out.append(acc.compose([tau_inv]) if tau_inv is not None else acc)
    return Section(A, out)


def ad_uea(E: Bisection, u: UEAElement) -> UEAElement:
    """U(Ad_E): f -> f o tau^{-1} on degree 0, Ad_E on degree 1, extended
    multiplicatively and renormalized."""
    A = u.parent
    model = E.model
    if u.is_zero:
        return u
    tau_inv = None
    if A.chart.dim:
        tau_inv = E.tau_inv_coeff()

    def transport(f: CoeffFn) -> CoeffFn:
        return f.compose([tau_inv]) if tau_inv is not None else f

    if u.degree() <= 0:
        return u.map_coeffs(transport)
    gens = [UEAElement.from_section(ad_section(E, A.basis_section(j))) for j in range(A.rank)]
    out = UEAElement.zero(A)
    for exp, f in u.terms.items():
        acc = UEAElement.one(A)
        for j, k in enumerate(exp):
            for _ in range(k):
                acc = uea_mul(acc, gens[j])
        out = out + acc.coeff_mul(transport(f))
    return out


def ad_germ(e: GermArrow, model, germ_u: GermUEA) -> GermUEA:
    """Ad_e on germs; independent of the representative bisection."""
    E = e.bisection(model)
    if model.kind != "group" and tuple(germ_u.base_point) != e.source:
        raise DomainError("germ base point must be the source of e")
    image = model.t_of(E.alpha(e.source))
    return uea_germ(ad_uea(E, germ_u.elem), image)
