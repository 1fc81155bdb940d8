"""Groupoid models, local bisections and the germ groupoid.

Three model families are supported:

* pair groupoid over the line (arrows (y, x), bisections = graphs of
  diffeomorphisms of a restricted class),
* a Lie group over a point (bisections = group elements), and
* the action groupoid of a finitely generated group of affine maps acting
  on the line (an etale groupoid; bisections = group elements restricted
  to open domains).

All bisections live in a per-model registry keyed by a canonical content
key, so that products of registered bisections merge syntactically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .coeffs import Chart, CoeffFn, Polynomial, Q, Region
from .errors import (
    ChartMismatch,
    DomainError,
    NotComposable,
    UnsupportedComposition,
    UnsupportedRegistry,
    VerificationFailed,
)


# ---------------------------------------------------------------------------
# Diffeomorphisms of the line (pair-groupoid bisection data)
# ---------------------------------------------------------------------------


class Diffeo1D:
    """A diffeomorphism of (a region of) the line.

    Stores the forward map and, when representable, the inverse map as
    CoeffFns.  Affine maps carry both; the flat-kink maps carry only the
    forward direction, and their inverses only the backward one.  Both
    directions can always be *evaluated* (numerically if need be).
    """

    __slots__ = ("fwd", "inv")

    def __init__(self, fwd, inv):
        if fwd is None and inv is None:
            raise ValueError("need at least one direction")
        self.fwd = fwd
        self.inv = inv

    @staticmethod
    def affine(chart: Chart, a, b) -> "Diffeo1D":
        a, b = Q(a), Q(b)
        if a == 0:
            raise ValueError("degenerate affine map")
        fwd = CoeffFn(chart, Polynomial(1, {(1,): a, (0,): b}))
        inv = CoeffFn(chart, Polynomial(1, {(1,): 1 / a, (0,): -b / a}))
        return Diffeo1D(fwd, inv)

    @staticmethod
    def identity(chart: Chart) -> "Diffeo1D":
        return Diffeo1D.affine(chart, 1, 0)

    @staticmethod
    def from_coeff(fn: CoeffFn) -> "Diffeo1D":
        aff = fn.affine_parts()
        if aff is not None:
            return Diffeo1D.affine(fn.chart, *aff)
        return Diffeo1D(fn, None)

    @staticmethod
    def flat_kink(chart: Chart, c_neg, c_pos) -> "Diffeo1D":
        """t + c_neg*phi(t) for t <= 0, t + c_pos*phi(t) for t >= 0."""
        t = Polynomial.var(1, 0)
        return Diffeo1D(CoeffFn.flat_piece(chart, t, c_neg, c_pos), None)

    # -- queries ------------------------------------------------------------

    @property
    def chart(self) -> Chart:
        return (self.fwd or self.inv).chart

    @property
    def is_identity(self) -> bool:
        return self.fwd is not None and self.fwd.affine_parts() == (Q(1), Q(0))

    def affine_parts(self):
        return None if self.fwd is None else self.fwd.affine_parts()

    def __eq__(self, other):
        return (
            isinstance(other, Diffeo1D)
            and self.fwd == other.fwd
            and self.inv == other.inv
        )

    def coeff(self) -> CoeffFn:
        if self.fwd is None:
            raise UnsupportedComposition("forward map not representable")
        return self.fwd

    def inv_coeff(self) -> CoeffFn:
        if self.inv is None:
            raise UnsupportedComposition("inverse map not representable")
        return self.inv

    def inverse(self) -> "Diffeo1D":
        return Diffeo1D(self.inv, self.fwd)

    # -- evaluation ---------------------------------------------------------

    def apply(self, x):
        if self.fwd is not None:
            return self.fwd.eval((x,))
        return _solve_monotone(self.inv, x)

    def apply_inv(self, y):
        if self.inv is not None:
            return self.inv.eval((y,))
        return _solve_monotone(self.fwd, y)

    # -- composition --------------------------------------------------------

    def compose(self, other: "Diffeo1D") -> "Diffeo1D":
        """self after other."""
        fwd = None
        if self.fwd is not None and other.fwd is not None:
            try:
                fwd = self.fwd.compose([other.fwd])
            except UnsupportedComposition:
                fwd = None
        inv = None
        if self.inv is not None and other.inv is not None:
            try:
                inv = other.inv.compose([self.inv])
            except UnsupportedComposition:
                inv = None
        if fwd is None and inv is None:
            raise UnsupportedComposition("diffeomorphism composite not representable")
        return Diffeo1D(fwd, inv)

    def text(self) -> str:
        if self.fwd is not None:
            return self.fwd.text()
        return f"inverse-of[{self.inv.text()}]"


def _solve_monotone(f: CoeffFn, y) -> float:
    """Solve f(t) = y for a strictly monotone f, numerically (bisection)."""
    y = float(y)
    sign = 1.0 if float(f.eval((1.0,))) > float(f.eval((-1.0,))) else -1.0

    def val(t):
        return sign * float(f.eval((t,)))

    y = sign * y
    lo, hi = -1.0, 1.0
    for _ in range(200):
        if val(lo) <= y:
            break
        lo = 2 * lo - 1
    else:
        raise DomainError("failed to bracket the root from below")
    for _ in range(200):
        if val(hi) >= y:
            break
        hi = 2 * hi + 1
    else:
        raise DomainError("failed to bracket the root from above")
    for _ in range(200):
        mid = (lo + hi) / 2
        if val(mid) <= y:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


# ---------------------------------------------------------------------------
# Affine maps of the line (etale model group elements)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineMap:
    """x -> p*x + q with rational p != 0."""

    p: Fraction
    q: Fraction

    @staticmethod
    def of(p, q) -> "AffineMap":
        p, q = Q(p), Q(q)
        if p == 0:
            raise ValueError("degenerate affine map")
        return AffineMap(p, q)

    def __call__(self, x):
        return self.p * x + self.q

    def after(self, other: "AffineMap") -> "AffineMap":
        return AffineMap(self.p * other.p, self.p * other.q + self.q)

    def inverse(self) -> "AffineMap":
        return AffineMap(1 / self.p, -self.q / self.p)

    @property
    def is_identity(self):
        return self.p == 1 and self.q == 0

    def text(self) -> str:
        return f"[{self.p},{self.q}]"


# ---------------------------------------------------------------------------
# Groupoid models
# ---------------------------------------------------------------------------


def _region_text(r: Region) -> str:
    if r.is_whole:
        return "R"

    def key(box):
        return tuple(
            (float("-inf") if lo is None else lo, float("inf") if hi is None else hi)
            for lo, hi in box
        )

    return "u".join(
        "x".join(f"({lo},{hi})" for lo, hi in box) for box in sorted(r.boxes, key=key)
    )


class GroupoidModel:
    """A concrete groupoid with polynomial structure maps."""

    def __init__(self, kind, base, arrow_chart, s_map, t_map, unit_map, inv_map, mult_map, name):
        self.kind = kind
        self.base = base
        self.arrow_chart = arrow_chart
        self.s_map = s_map
        self.t_map = t_map
        self.unit_map = unit_map
        self.inv_map = inv_map
        self.mult_map = mult_map
        self.name = name
        self.algebroid = None  # set by the model constructors
        self.registry = {}
        self.aliases = {}
        if kind in ("pair", "group"):
            self._verify_structure()

    # -- structure-map algebra ----------------------------------------------

    def _verify_structure(self):
        n = self.arrow_chart.dim
        gvars = [Polynomial.var(n, i) for i in range(n)]
        bvars = [Polynomial.var(self.base.dim, i) for i in range(self.base.dim)]
        # s(unit(x)) = x and t(unit(x)) = x
        for m in range(self.base.dim):
            if self.s_map[m].substitute(self.unit_map) != bvars[m]:
                raise VerificationFailed("s o unit != id")
            if self.t_map[m].substitute(self.unit_map) != bvars[m]:
                raise VerificationFailed("t o unit != id")
        # source/target of products
        left = [Polynomial.var(2 * n, i) for i in range(n)]
        right = [Polynomial.var(2 * n, n + i) for i in range(n)]
        for m in range(self.base.dim):
            if self.s_map[m].substitute(self.mult_map) != self.s_map[m].substitute(right):
                raise VerificationFailed("s(mult(g',g)) != s(g)")
            if self.t_map[m].substitute(self.mult_map) != self.t_map[m].substitute(left):
                raise VerificationFailed("t(mult(g',g)) != t(g')")
        # mult(inv(g), g) = unit(s(g))
        inv_then_g = [p.substitute([q.substitute(gvars) for q in self.inv_map] + gvars)
                      for p in self.mult_map]
        if self.base.dim:
            unit_s = [p.substitute([q.substitute(gvars) for q in self.s_map])
                      for p in self.unit_map]
        else:
            unit_s = [Polynomial.const(n, p.constant_value()) for p in self.unit_map]
        if inv_then_g != unit_s:
            raise VerificationFailed("mult(inv(g), g) != unit(s(g))")
        # associativity on tripled variables
        a = [Polynomial.var(3 * n, i) for i in range(n)]
        b = [Polynomial.var(3 * n, n + i) for i in range(n)]
        c = [Polynomial.var(3 * n, 2 * n + i) for i in range(n)]
        ab = [p.substitute(a + b) for p in self.mult_map]
        bc = [p.substitute(b + c) for p in self.mult_map]
        if [p.substitute(ab + c) for p in self.mult_map] != [
            p.substitute(a + bc) for p in self.mult_map
        ]:
            raise VerificationFailed("mult is not associative")

    # -- arrow arithmetic ----------------------------------------------------

    def s_of(self, g):
        if self.kind == "etale_action":
            return (g[1],)
        return tuple(p.eval(g) for p in self.s_map)

    def t_of(self, g):
        if self.kind == "etale_action":
            return (g[0](g[1]),)
        return tuple(p.eval(g) for p in self.t_map)

    def unit_of(self, x):
        if self.kind == "etale_action":
            return (AffineMap.of(1, 0), x[0])
        return tuple(p.eval(x) for p in self.unit_map)

    def mult_arrow(self, g2, g1):
        """g2 * g1, defined when s(g2) = t(g1)."""
        if self.s_of(g2) != self.t_of(g1):
            raise NotComposable("arrows do not compose")
        if self.kind == "etale_action":
            return (g2[0].after(g1[0]), g1[1])
        return tuple(p.eval(tuple(g2) + tuple(g1)) for p in self.mult_map)

    def inv_arrow(self, g):
        if self.kind == "etale_action":
            return (g[0].inverse(), g[0](g[1]))
        return tuple(p.eval(g) for p in self.inv_map)

    # -- registry ------------------------------------------------------------

    def register(self, E: "Bisection", alias=None) -> "Bisection":
        existing = self.registry.get(E.bid)
        if existing is None:
            self.registry[E.bid] = E
        if alias:
            self.aliases[alias] = E.bid
        return self.registry[E.bid]

    def lookup(self, name: str) -> "Bisection":
        bid = self.aliases.get(name, name)
        if bid not in self.registry:
            raise KeyError(f"unknown bisection {name!r}")
        return self.registry[bid]

    def __repr__(self):
        return f"GroupoidModel({self.name}, {len(self.registry)} bisections)"


# ---------------------------------------------------------------------------
# Bisections
# ---------------------------------------------------------------------------


class Bisection:
    """A local bisection of a groupoid model.

    pair:  the graph {(tau(x), x) : x in domain} of a diffeomorphism.
    group: a single group element (the base is a point).
    etale: a group element gamma restricted to an open domain.
    """

    __slots__ = ("model", "bid", "tau", "domain", "element", "gamma")

    def __init__(self, model, tau=None, domain=None, element=None, gamma=None):
        self.model = model
        self.tau = tau
        self.element = element
        self.gamma = gamma
        if model.kind == "pair":
            if tau is None:
                raise ValueError("pair bisection needs a diffeomorphism")
            domain = domain if domain is not None else Region.whole(1)
            if tau.affine_parts() is None and not domain.is_whole:
                # flat-kink maps are only tracked on the full line
                raise UnsupportedRegistry("flat bisections must have full-line domain")
            self.domain = domain
            self.bid = f"pair[{tau.text()}]@{_region_text(domain)}"
        elif model.kind == "group":
            if element is None:
                raise ValueError("group bisection needs a group element")
            self.element = tuple(Q(c) for c in element)
            self.domain = model.base.domain
            self.bid = "k[" + ",".join(str(c) for c in self.element) + "]"
        elif model.kind == "etale_action":
            if gamma is None:
                raise ValueError("etale bisection needs a group element")
            self.domain = domain if domain is not None else Region.whole(1)
            self.bid = f"g{gamma.text()}@{_region_text(self.domain)}"
        else:
            raise ValueError(f"unknown model kind {model.kind!r}")

    def __eq__(self, other):
        return isinstance(other, Bisection) and self.model is other.model and self.bid == other.bid

    def __hash__(self):
        return hash(self.bid)

    def __repr__(self):
        return f"Bisection({self.bid})"

    # -- the partial diffeomorphism tau_E ------------------------------------

    def tau_diffeo(self) -> Diffeo1D:
        if self.model.kind == "pair":
            return self.tau
        if self.model.kind == "etale_action":
            return Diffeo1D.affine(self.model.base, self.gamma.p, self.gamma.q)
        raise ValueError("point-base bisections have no tau")

    def tau_coeff(self) -> CoeffFn:
        return self.tau_diffeo().coeff()

    def tau_inv_coeff(self) -> CoeffFn:
        return self.tau_diffeo().inv_coeff()

    def tau_apply(self, x):
        return self.tau_diffeo().apply(x)

    def tau_inv_apply(self, y):
        return self.tau_diffeo().apply_inv(y)

    def target_domain(self) -> Region:
        """t(E) as a region of the base."""
        if self.model.kind == "group":
            return self.domain
        aff = self.tau_diffeo().affine_parts()
        if aff is not None:
            return self.domain.affine_image(*aff)
        return self.domain  # flat kinks are bijections of the full line

    # -- sections of s and t --------------------------------------------------

    def alpha(self, x):
        """The arrow of E with source x."""
        x0 = x[0] if isinstance(x, (tuple, list)) else x
        if self.model.kind == "pair":
            return (self.tau_apply(x0), x0)
        if self.model.kind == "group":
            return self.element
        return (self.gamma, x0)

    def beta(self, y):
        """The arrow of E with target y."""
        y0 = y[0] if isinstance(y, (tuple, list)) else y
        if self.model.kind == "pair":
            return (y0, self.tau_inv_apply(y0))
        if self.model.kind == "group":
            return self.element
        return (self.gamma, self.gamma.inverse()(y0))

    def contains_source(self, x) -> bool:
        x0 = x[0] if isinstance(x, (tuple, list)) else x
        if self.model.kind == "group":
            return True
        return self.domain.contains((x0,)) or self.domain.is_whole

    def contains_arrow(self, g) -> bool:
        """Is the arrow g on this bisection?  Exact for rational data."""
        if self.model.kind == "group":
            return tuple(g) == self.element
        if self.model.kind == "etale_action":
            return g[0] == self.gamma and self.domain.contains((g[1],))
        y, x = g
        if not self.domain.contains((x,)):
            return False
        diff = self.tau_diffeo()
        if diff.fwd is not None:
            gap = diff.fwd - CoeffFn.const(diff.chart, y)
            return gap.value_is_zero_exact(x)
        gap = diff.inv - CoeffFn.const(diff.chart, x)
        return gap.value_is_zero_exact(y)


def unit_bisection(model) -> Bisection:
    if model.kind == "pair":
        return Bisection(model, tau=Diffeo1D.identity(model.base))
    if model.kind == "group":
        return Bisection(model, element=(0,) * model.arrow_chart.dim)
    return Bisection(model, gamma=AffineMap.of(1, 0))


def bisection_mul(E2: Bisection, E1: Bisection) -> Bisection:
    """E2 . E1 = {g2 g1 : g1 in E1, g2 in E2, s(g2) = t(g1)}."""
    model = E2.model
    if model is not E1.model:
        raise ChartMismatch("bisections of different models")
    if model.kind == "group":
        k = model.mult_arrow(E2.element, E1.element)
        return Bisection(model, element=k)
    if model.kind == "etale_action":
        gamma = E2.gamma.after(E1.gamma)
        inv1 = E1.gamma.inverse()
        pulled = E2.domain.affine_image(inv1.p, inv1.q)
        return Bisection(model, gamma=gamma, domain=E1.domain.intersect(pulled))
    # pair model
    tau = E2.tau.compose(E1.tau)
    aff1 = E1.tau.affine_parts()
    if E2.domain.is_whole:
        domain = E1.domain
    elif aff1 is not None:
        a, b = aff1
        domain = E1.domain.intersect(E2.domain.affine_image(1 / a, -b / a))
    else:
        raise UnsupportedRegistry("flat bisection composed with a restricted domain")
    return Bisection(model, tau=tau, domain=domain)


def bisection_inv(E: Bisection) -> Bisection:
    model = E.model
    if model.kind == "group":
        return Bisection(model, element=model.inv_arrow(E.element))
    if model.kind == "etale_action":
        g = E.gamma
        return Bisection(model, gamma=g.inverse(), domain=E.domain.affine_image(g.p, g.q))
    return Bisection(model, tau=E.tau.inverse(), domain=E.target_domain())


# ---------------------------------------------------------------------------
# Germ arrows
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GermArrow:
    """The germ of a bisection at the arrow with the given source point."""

    bid: str
    source: tuple

    def bisection(self, model) -> Bisection:
        return model.registry[self.bid]


def germ_of(E: Bisection, x) -> GermArrow:
    x = tuple(x) if isinstance(x, (tuple, list)) else (x,)
    if not E.contains_source(x):
        raise DomainError("source point outside the bisection domain")
    return GermArrow(E.bid, x)


def theta(model, e: GermArrow):
    """theta: G# -> G, forget the germ."""
    return e.bisection(model).alpha(e.source)


def bisection_germ_eq(E1: Bisection, E2: Bisection, x) -> bool:
    """Do E1 and E2 have the same germ at the arrow over source point x?"""
    model = E1.model
    x = tuple(x) if isinstance(x, (tuple, list)) else (x,)
    if model.kind == "group":
        return E1.element == E2.element
    if model.kind == "etale_action":
        return E1.gamma == E2.gamma
    d1, d2 = E1.tau, E2.tau
    if d1.fwd is not None and d2.fwd is not None:
        return (d1.fwd - d2.fwd).has_zero_germ_at(x)
    if d1.fwd is None and d2.fwd is None:
        y = (d1.apply(x[0]),)
        # compare the inverse maps at the (shared) image point
        return (d1.inv - d2.inv).has_zero_germ_at(y)
    return False


def germ_arrow_eq(model, e1: GermArrow, e2: GermArrow) -> bool:
    if e1.source != e2.source:
        return False
    E1, E2 = e1.bisection(model), e2.bisection(model)
    return bisection_germ_eq(E1, E2, e1.source)


def germ_mul(model, e2: GermArrow, e1: GermArrow) -> GermArrow:
    E2, E1 = e2.bisection(model), e1.bisection(model)
    if model.kind != "group" and e2.source != (E1.tau_apply(e1.source[0]),):
        raise NotComposable("germ sources do not match targets")
    prod = model.register(bisection_mul(E2, E1))
    return GermArrow(prod.bid, e1.source)


def germ_inv(model, e: GermArrow) -> GermArrow:
    E = e.bisection(model)
    inv = model.register(bisection_inv(E))
    if model.kind == "group":
        return GermArrow(inv.bid, e.source)
    return GermArrow(inv.bid, (E.tau_apply(e.source[0]),))


def germ_fiber(model, g, bisections=None):
    """Partition the registered bisections through the arrow g into germ
    classes at g; returns a list of classes (lists of Bisections)."""
    if bisections is None:
        bisections = list(model.registry.values())
    through = [E for E in bisections if E.contains_arrow(g)]
    x = model.s_of(g)
    classes = []
    for E in through:
        for cls in classes:
            if bisection_germ_eq(E, cls[0], x):
                cls.append(E)
                break
        else:
            classes.append([E])
    return classes
