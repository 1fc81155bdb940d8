"""Exact coefficient functions on chart domains.

Coefficient functions play the role of scalar functions on the base or
arrow space of a groupoid model.  Two families are supported:

* multivariate polynomials with rational coefficients, and
* a one-dimensional "flat piecewise" family: a polynomial plus, on each
  side of t = 0, a finite sum  sum_k c_k * t^(-k) * exp(-1/t^2).

The second family contains the increasing diffeomorphism kinks
t + c*phi(t), where phi(t) = sign(t)*exp(-1/t^2) (phi(0) = 0), and is
closed under derivative, addition and scaling by rationals.  It is *not*
closed under general products or compositions; those raise
UnsupportedProduct / UnsupportedComposition.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    ChartMismatch,
    DomainError,
    ParseError,
    UnsupportedComposition,
    UnsupportedProduct,
)

Q = Fraction


def _q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


# ---------------------------------------------------------------------------
# Regions and charts
# ---------------------------------------------------------------------------

# An interval is a pair (lo, hi) of Fractions, either of which may be None
# for an unbounded side.  A box is a tuple of dim intervals; a region is a
# finite union of open boxes.


@dataclass(frozen=True)
class Region:
    dim: int
    boxes: tuple  # tuple of boxes; each box a tuple of (lo, hi) pairs

    @staticmethod
    def whole(dim: int) -> "Region":
        return Region(dim, (tuple((None, None) for _ in range(dim)),))

    @staticmethod
    def interval(lo, hi) -> "Region":
        lo = None if lo is None else _q(lo)
        hi = None if hi is None else _q(hi)
        if lo is not None and hi is not None and not lo < hi:
            raise ValueError("need lo < hi")
        return Region(1, (((lo, hi),),))

    @staticmethod
    def union(*regions: "Region") -> "Region":
        if not regions:
            raise ValueError("empty union")
        dim = regions[0].dim
        boxes = []
        for r in regions:
            if r.dim != dim:
                raise ValueError("dimension mismatch in union")
            boxes.extend(r.boxes)
        return Region(dim, tuple(boxes))

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    @property
    def is_whole(self) -> bool:
        return any(all(lo is None and hi is None for lo, hi in box) for box in self.boxes)

    def contains(self, point: Sequence) -> bool:
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        for box in self.boxes:
            ok = True
            for (lo, hi), x in zip(box, point):
                if lo is not None and not x > lo:
                    ok = False
                    break
                if hi is not None and not x < hi:
                    ok = False
                    break
            if ok:
                return True
        # dim-0 region: the single point is the empty tuple
        return self.dim == 0 and bool(self.boxes)

    def intersect(self, other: "Region") -> "Region":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        boxes = []
        for a in self.boxes:
            for b in other.boxes:
                box = []
                empty = False
                for (lo1, hi1), (lo2, hi2) in zip(a, b):
                    lo = lo1 if lo2 is None else (lo2 if lo1 is None else max(lo1, lo2))
                    hi = hi1 if hi2 is None else (hi2 if hi1 is None else min(hi1, hi2))
                    if lo is not None and hi is not None and not lo < hi:
                        empty = True
                        break
                    box.append((lo, hi))
                if not empty:
                    boxes.append(tuple(box))
        if self.dim == 0:
            return Region(0, ((),)) if (self.boxes and other.boxes) else Region(0, ())
        return Region(self.dim, tuple(boxes))

    def affine_image(self, p: Fraction, q: Fraction) -> "Region":
        """Image of a 1-D region under t -> p*t + q (p != 0)."""
        if self.dim != 1:
            raise ValueError("affine_image needs a 1-D region")
        p, q = _q(p), _q(q)
        if p == 0:
            raise ValueError("degenerate affine map")
        boxes = []
        for ((lo, hi),) in self.boxes:
            a = None if lo is None else p * lo + q
            b = None if hi is None else p * hi + q
            if p > 0:
                boxes.append(((a, b),))
            else:
                boxes.append(((b, a),))
        return Region(1, tuple(boxes))

    def sample_points(self):
        """One rational point per box (interior); unbounded sides clamped."""
        pts = []
        for box in self.boxes:
            pt = []
            for lo, hi in box:
                if lo is None and hi is None:
                    pt.append(Q(0))
                elif lo is None:
                    pt.append(hi - 1)
                elif hi is None:
                    pt.append(lo + 1)
                else:
                    pt.append((lo + hi) / 2)
            pts.append(tuple(pt))
        return pts


@dataclass(frozen=True)
class Chart:
    """A chart domain: dimension, region and a name.

    A 0-dimensional chart is a single point.
    """

    dim: int
    domain: Region
    name: str = "chart"

    def __post_init__(self):
        if self.dim < 0:
            raise ValueError("dim must be >= 0")
        if self.domain.dim != self.dim:
            raise ValueError("domain dimension mismatch")

    @staticmethod
    def line(name: str = "R") -> "Chart":
        return Chart(1, Region.whole(1), name)

    @staticmethod
    def point(name: str = "pt") -> "Chart":
        return Chart(0, Region(0, ((),)), name)

    @staticmethod
    def space(dim: int, name: str = "chart") -> "Chart":
        return Chart(dim, Region.whole(dim), name)


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


class Polynomial:
    """Sparse multivariate polynomial over the rationals.

    terms maps exponent tuples to nonzero Fraction coefficients.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms=None):
        self.nvars = nvars
        clean = {}
        for exp, c in (terms or {}).items():
            c = _q(c)
            if c != 0:
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars or any(e < 0 for e in exp):
                    raise ValueError(f"bad exponent tuple {exp}")
                clean[exp] = clean.get(exp, Q(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(nvars: int, c) -> "Polynomial":
        return Polynomial(nvars, {tuple([0] * nvars): _q(c)})

    @staticmethod
    def var(nvars: int, i: int) -> "Polynomial":
        exp = [0] * nvars
        exp[i] = 1
        return Polynomial(nvars, {tuple(exp): Q(1)})

    # -- queries ------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant:
            raise ValueError("not a constant polynomial")
        return self.terms.get(tuple([0] * self.nvars), Q(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "Polynomial"):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, Q(0)) + c
        return Polynomial(self.nvars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Q(0)) + c1 * c2
        return Polynomial(self.nvars, terms)

    def scale(self, c) -> "Polynomial":
        c = _q(c)
        return Polynomial(self.nvars, {e: c * k for e, k in self.terms.items()})

    def derive(self, axis: int) -> "Polynomial":
        if not 0 <= axis < self.nvars:
            raise ValueError("axis out of range")
        terms = {}
        for e, c in self.terms.items():
            if e[axis] == 0:
                continue
            e2 = list(e)
            e2[axis] -= 1
            terms[tuple(e2)] = terms.get(tuple(e2), Q(0)) + c * e[axis]
        return Polynomial(self.nvars, terms)

    def substitute(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Plug a polynomial (on a common target variable set) into each variable."""
        if len(values) != self.nvars:
            raise ValueError("need one value per variable")
        if values:
            tgt = values[0].nvars
            if any(v.nvars != tgt for v in values):
                raise ValueError("substitution targets disagree")
        else:
            tgt = 0
        out = Polynomial(tgt, {})
        for e, c in self.terms.items():
            term = Polynomial.const(tgt, c)
            for v, k in zip(values, e):
                for _ in range(k):
                    term = term * v
            out = out + term
        return out

    def eval(self, point: Sequence):
        if len(point) != self.nvars:
            raise ValueError("point dimension mismatch")
        exact = all(isinstance(x, (int, Fraction)) for x in point)
        total = Q(0) if exact else 0.0
        for e, c in self.terms.items():
            v = c if exact else float(c)
            for x, k in zip(point, e):
                for _ in range(k):
                    v = v * x
            total = total + v
        return total

    # -- text form ----------------------------------------------------------

    def text(self, varname: str = "x") -> str:
        """Canonical sparse form `c*x0^a0*x1^a1 + ...`."""
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = [str(c)]
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(f"{varname}{i}")
                elif k > 1:
                    factors.append(f"{varname}{i}^{k}")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"Polynomial({self.text()})"

    _TERM_RE = re.compile(r"\s*(?P<coeff>[+-]?\d+(?:/\d+)?)?\s*(?P<mons>(?:\*?\s*x\d+(?:\^\d+)?\s*)*)")

    @staticmethod
    def parse(text: str, nvars: int) -> "Polynomial":
        """Parse the canonical sparse form (inverse of .text())."""
        text = text.strip()
        if not text:
            raise ParseError("empty polynomial", 0)
        if text == "0":
            return Polynomial(nvars, {})
        terms = {}
        for chunk in re.split(r"(?<![\^*/])\s*\+\s*", text.replace("- ", "+ -")):
            chunk = chunk.strip()
            if not chunk:
                continue
            m = Polynomial._TERM_RE.fullmatch(chunk)
            if not m or (m.group("coeff") is None and not m.group("mons").strip()):
                raise ParseError(f"bad polynomial term {chunk!r}")
            coeff = Q(m.group("coeff")) if m.group("coeff") else Q(1)
            exp = [0] * nvars
            for vm in re.finditer(r"x(\d+)(?:\^(\d+))?", m.group("mons")):
                i = int(vm.group(1))
                if i >= nvars:
                    raise ParseError(f"variable x{i} out of range (nvars={nvars})")
                exp[i] += int(vm.group(2) or 1)
            key = tuple(exp)
            terms[key] = terms.get(key, Q(0)) + coeff
        return Polynomial(nvars, terms)


# ---------------------------------------------------------------------------
# Flat parts
# ---------------------------------------------------------------------------

# A flat part is a finite sum  sum_k c_k * t^(-k) * exp(-1/t^2)  on one side
# of t = 0, stored as {k: c_k}.  The family is closed under d/dt:
#   d/dt [t^(-k) e^(-1/t^2)] = (-k t^(-k-1) + 2 t^(-k-3)) e^(-1/t^2).


def _flat_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, c in b.items():
        out[k] = out.get(k, Q(0)) + c
    return {k: c for k, c in out.items() if c != 0}


def _flat_scale(a: dict, c: Fraction) -> dict:
    c = _q(c)
    return {} if c == 0 else {k: c * v for k, v in a.items()}


def _flat_derive(a: dict) -> dict:
    out = {}
    for k, c in a.items():
        out[k + 1] = out.get(k + 1, Q(0)) - k * c
        out[k + 3] = out.get(k + 3, Q(0)) + 2 * c
    return {k: c for k, c in out.items() if c != 0}


def _flat_eval(a: dict, t) -> float:
    tf = float(t)
    if tf == 0.0:
        return 0.0
    damp = math.exp(-1.0 / (tf * tf))
    return sum(float(c) * tf ** (-k) for k, c in a.items()) * damp


def _flat_value_coeff(a: dict, t: Fraction) -> Fraction:
    """Exact rational r with value = r * exp(-1/t^2) at rational t != 0."""
    t = _q(t)
    if t == 0:
        raise ValueError("flat value coefficient undefined at 0")
    return sum((c * t ** (-k) for k, c in a.items()), Q(0))


# ---------------------------------------------------------------------------
# Coefficient functions
# ---------------------------------------------------------------------------


class CoeffFn:
    """A coefficient function on a chart: polynomial plus optional flat parts.

    Flat parts exist only on 1-D charts.  All arithmetic is exact; the only
    floating point enters through .eval at points where a flat part is
    active.
    """

    __slots__ = ("chart", "poly", "flat_neg", "flat_pos")

    def __init__(self, chart: Chart, poly: Polynomial, flat_neg=None, flat_pos=None):
        if poly.nvars != chart.dim:
            raise ValueError("polynomial variable count != chart dim")
        flat_neg = {k: _q(c) for k, c in (flat_neg or {}).items() if c != 0}
        flat_pos = {k: _q(c) for k, c in (flat_pos or {}).items() if c != 0}
        if (flat_neg or flat_pos) and chart.dim != 1:
            raise ValueError("flat parts exist only on 1-D charts")
        self.chart = chart
        self.poly = poly
        self.flat_neg = flat_neg
        self.flat_pos = flat_pos

    # -- constructors -------------------------------------------------------

    @staticmethod
    def from_poly(chart: Chart, poly: Polynomial) -> "CoeffFn":
        return CoeffFn(chart, poly)

    @staticmethod
    def const(chart: Chart, c) -> "CoeffFn":
        return CoeffFn(chart, Polynomial.const(chart.dim, c))

    @staticmethod
    def var(chart: Chart, i: int = 0) -> "CoeffFn":
        return CoeffFn(chart, Polynomial.var(chart.dim, i))

    @staticmethod
    def flat_piece(chart: Chart, p: Polynomial, c_neg, c_pos) -> "CoeffFn":
        """p(t) + c_neg*phi(t) for t <= 0 and p(t) + c_pos*phi(t) for t >= 0,
        with phi(t) = sign(t)*exp(-1/t^2)."""
        if chart.dim != 1:
            raise ValueError("flat pieces exist only on 1-D charts")
        return CoeffFn(chart, p, flat_neg={0: -_q(c_neg)}, flat_pos={0: _q(c_pos)})

    @staticmethod
    def phi(chart: Chart) -> "CoeffFn":
        return CoeffFn.flat_piece(chart, Polynomial(1, {}), 1, 1)

    # -- queries ------------------------------------------------------------

    @property
    def is_poly(self) -> bool:
        return not self.flat_neg and not self.flat_pos

    @property
    def is_zero(self) -> bool:
        return self.poly.is_zero and self.is_poly

    def is_rational_const(self) -> bool:
        return self.is_poly and self.poly.is_constant

    def phi_coeffs(self):
        """(c_neg, c_pos) if self is polynomial + c*phi branchwise, else None."""
        if set(self.flat_neg) - {0} or set(self.flat_pos) - {0}:
            return None
        return (-self.flat_neg.get(0, Q(0)), self.flat_pos.get(0, Q(0)))

    def __eq__(self, other):
        return (
            isinstance(other, CoeffFn)
            and self.chart == other.chart
            and self.poly == other.poly
            and self.flat_neg == other.flat_neg
            and self.flat_pos == other.flat_pos
        )

    def __hash__(self):
        return hash(
            (
                self.chart,
                self.poly,
                frozenset(self.flat_neg.items()),
                frozenset(self.flat_pos.items()),
            )
        )

    def _check(self, other: "CoeffFn"):
        if self.chart != other.chart:
            raise ChartMismatch("coefficient functions on different charts")

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "CoeffFn") -> "CoeffFn":
        self._check(other)
        return CoeffFn(
            self.chart,
            self.poly + other.poly,
            _flat_add(self.flat_neg, other.flat_neg),
            _flat_add(self.flat_pos, other.flat_pos),
        )

    def __neg__(self) -> "CoeffFn":
        return self.scale(-1)

    def __sub__(self, other: "CoeffFn") -> "CoeffFn":
        return self + (-other)

    def scale(self, c) -> "CoeffFn":
        c = _q(c)
        return CoeffFn(
            self.chart,
            self.poly.scale(c),
            _flat_scale(self.flat_neg, c),
            _flat_scale(self.flat_pos, c),
        )

    def __mul__(self, other: "CoeffFn") -> "CoeffFn":
        self._check(other)
        if self.is_poly and other.is_poly:
            return CoeffFn(self.chart, self.poly * other.poly)
        if self.is_rational_const():
            return other.scale(self.poly.constant_value())
        if other.is_rational_const():
            return self.scale(other.poly.constant_value())
        raise UnsupportedProduct(
            "only Poly*Poly and rational*FlatPiece products are representable"
        )

    def derive(self, axis: int = 0) -> "CoeffFn":
        if not 0 <= axis < self.chart.dim:
            raise ValueError("axis out of range")
        return CoeffFn(
            self.chart,
            self.poly.derive(axis),
            _flat_derive(self.flat_neg),
            _flat_derive(self.flat_pos),
        )

    # -- composition --------------------------------------------------------

    def affine_parts(self):
        """(a, b) with self = a*t + b if self is a 1-D affine polynomial."""
        if not (self.chart.dim == 1 and self.is_poly and self.poly.degree() <= 1):
            return None
        a = self.poly.terms.get((1,), Q(0))
        b = self.poly.terms.get((0,), Q(0))
        return a, b

    def compose(self, inner: Sequence["CoeffFn"]) -> "CoeffFn":
        """self after the map whose components are `inner` (on a common chart)."""
        if len(inner) != self.chart.dim:
            raise ValueError("need one inner function per variable")
        if self.chart.dim == 0:
            if not inner:
                raise UnsupportedComposition("0-dim composition needs a target chart")
        target = inner[0].chart if inner else None
        if target is None:
            # constant on a point chart: nothing to substitute
            return self
        if any(g.chart != target for g in inner):
            raise ChartMismatch("inner functions on different charts")
        if self.is_poly and all(g.is_poly for g in inner):
            return CoeffFn(target, self.poly.substitute([g.poly for g in inner]))
        if self.chart.dim == 1:
            g = inner[0]
            aff = self.affine_parts()
            if aff is not None:
                a, b = aff
                return g.scale(a) + CoeffFn.const(target, b)
            ginner = g.affine_parts()
            if ginner == (Q(1), Q(0)) and target.dim == 1:
                # flat piece after the identity; only a chart change
                return CoeffFn(target, self.poly, self.flat_neg, self.flat_pos)
        raise UnsupportedComposition(
            "composition leaves the representable coefficient class"
        )

    # -- evaluation ---------------------------------------------------------

    def eval(self, point: Sequence):
        """Exact rational where possible; float once a flat part is active."""
        if len(point) != self.chart.dim:
            raise ValueError("point dimension mismatch")
        if not self.chart.domain.contains(point) and not self.chart.domain.is_whole:
            raise DomainError(f"{point} outside chart domain")
        base = self.poly.eval(point)
        if self.is_poly:
            return base
        t = point[0]
        if isinstance(t, (int, Fraction)) and t == 0:
            return base
        flat = self.flat_neg if t < 0 else self.flat_pos
        return float(base) + _flat_eval(flat, t)

    # -- germ structure -----------------------------------------------------

    def has_zero_germ_at(self, point: Sequence) -> bool:
        """True iff self vanishes identically on a neighbourhood of point."""
        if len(point) != self.chart.dim:
            raise ValueError("point dimension mismatch")
        if self.chart.dim != 1:
            return self.poly.is_zero
        t = point[0]
        if not self.poly.is_zero:
            return False
        if t < 0:
            return not self.flat_neg
        if t > 0:
            return not self.flat_pos
        return not self.flat_neg and not self.flat_pos

    def is_zero_on(self, lo: Optional[Fraction], hi: Optional[Fraction]) -> bool:
        """True iff self vanishes identically on the open interval (lo, hi).

        Only for 1-D functions; the interval must be nonempty.  Analyticity
        away from 0 makes this decidable coefficientwise.
        """
        if self.chart.dim != 1:
            raise ValueError("interval vanishing is a 1-D question")
        if not self.poly.is_zero:
            return False
        meets_neg = lo is None or lo < 0
        meets_pos = hi is None or hi > 0
        if meets_neg and self.flat_neg:
            return False
        if meets_pos and self.flat_pos:
            return False
        return True

    def value_is_zero_exact(self, t: Fraction) -> bool:
        """Exact vanishing at a rational point (1-D).

        exp(-1/t^2) is transcendental for rational t != 0, so the value is 0
        iff the polynomial value and the flat coefficient vanish separately.
        """
        if self.chart.dim != 1:
            raise ValueError("use eval for higher-dimensional charts")
        t = _q(t)
        if self.poly.eval((t,)) != 0:
            return False
        if t == 0:
            return True
        flat = self.flat_neg if t < 0 else self.flat_pos
        return not flat or _flat_value_coeff(flat, t) == 0

    # -- text ---------------------------------------------------------------

    def text(self) -> str:
        if self.is_poly:
            return self.poly.text()
        pc = self.phi_coeffs()
        if pc is not None:
            return f"{self.poly.text()} + phi[{pc[0]},{pc[1]}]"
        return (
            f"{self.poly.text()} + flat[neg={dict(sorted(self.flat_neg.items()))},"
            f" pos={dict(sorted(self.flat_pos.items()))}]"
        )

    def __repr__(self):
        return f"CoeffFn({self.text()})"


@dataclass(frozen=True)
class Germ:
    """A coefficient function considered near a base point."""

    base_point: tuple
    fn: CoeffFn

    def __post_init__(self):
        if not self.fn.chart.domain.contains(self.base_point) and not self.fn.chart.domain.is_whole:
            raise DomainError("base point outside chart domain")


def germ_eq(a: Germ, b: Germ) -> bool:
    """Do the two functions agree on some neighbourhood of the shared point?"""
    if a.fn.chart != b.fn.chart:
        raise ChartMismatch("germs on different charts")
    if a.base_point != b.base_point:
        raise ChartMismatch("germs at different base points")
    return (a.fn - b.fn).has_zero_germ_at(a.base_point)


# ---------------------------------------------------------------------------
# Named operation wrappers (module interface)
# ---------------------------------------------------------------------------


def poly_arith(f: CoeffFn, g, op: str) -> CoeffFn:
    """add / mul / neg on coefficient functions; mul also accepts a rational."""
    if op == "neg":
        return -f
    if isinstance(g, (int, Fraction)):
        g = CoeffFn.const(f.chart, g)
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown op {op!r}")


def derive(f: CoeffFn, axis: int = 0) -> CoeffFn:
    return f.derive(axis)


def compose(f: CoeffFn, inner: Sequence[CoeffFn]) -> CoeffFn:
    return f.compose(inner)


def eval_fn(f: CoeffFn, point: Sequence):
    return f.eval(point)
