"""Lie-Rinehart algebras (Lie algebroids with a global frame).

A LieRinehart value stores a chart, a module rank r, an anchor matrix
(rho(X_i) as a vector field, one row per frame element) and the bracket
structure table c[i][j] with [X_i, X_j] = sum_k c[i][j][k] * X_k.  All
structure data are CoeffFn's on the chart.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction

from .coeffs import Chart, CoeffFn, Polynomial, Q
from .errors import ParentMismatch, VerificationFailed


def random_polynomial(rng: random.Random, nvars: int, max_deg: int = 2) -> Polynomial:
    """Small random polynomial with coefficients in {-3..3}."""
    terms = {}
    for _ in range(rng.randint(1, 4)):
        exp = [0] * nvars
        for _ in range(rng.randint(0, max_deg)):
            if nvars:
                exp[rng.randrange(nvars)] += 1
        terms[tuple(exp)] = terms.get(tuple(exp), Q(0)) + rng.randint(-3, 3)
    return Polynomial(nvars, terms)


class LieRinehart:
    """A free Lie-Rinehart algebra over the coefficient ring of a chart."""

    def __init__(self, chart: Chart, rank: int, anchor, bracket, basis_names=None):
        self.chart = chart
        self.rank = rank
        # anchor[i][d]: CoeffFn, the d-th component of rho(X_i)
        self.anchor = [[self._fn(c) for c in row] for row in anchor]
        if len(self.anchor) != rank or any(len(row) != chart.dim for row in self.anchor):
            raise ValueError("anchor must be a rank x dim matrix")
        # bracket[i][j]: list of r CoeffFn
        self.bracket_table = [
            [[self._fn(c) for c in bracket[i][j]] for j in range(rank)] for i in range(rank)
        ]
        for i in range(rank):
            for j in range(rank):
                if len(self.bracket_table[i][j]) != rank:
                    raise ValueError("bracket entries must have length rank")
        self.basis_names = list(basis_names) if basis_names else [f"X{i+1}" for i in range(rank)]

    def _fn(self, c) -> CoeffFn:
        if isinstance(c, CoeffFn):
            return c
        if isinstance(c, Polynomial):
            return CoeffFn(self.chart, c)
        return CoeffFn.const(self.chart, c)

    def __eq__(self, other):
        return (
            isinstance(other, LieRinehart)
            and self.chart == other.chart
            and self.rank == other.rank
            and self.anchor == other.anchor
            and self.bracket_table == other.bracket_table
        )

    def __hash__(self):
        return hash((self.chart, self.rank))

    # -- sections -----------------------------------------------------------

    def section(self, coeffs) -> "Section":
        return Section(self, coeffs)

    def basis_section(self, i: int) -> "Section":
        coeffs = [CoeffFn.const(self.chart, 1 if k == i else 0) for k in range(self.rank)]
        return Section(self, coeffs)

    def zero_section(self) -> "Section":
        return Section(self, [CoeffFn.const(self.chart, 0)] * self.rank)

    def frame_anchor_apply(self, i: int, f: CoeffFn) -> CoeffFn:
        """rho(X_i) applied to f."""
        out = CoeffFn.const(self.chart, 0)
        for d in range(self.chart.dim):
            out = out + self.anchor[i][d] * f.derive(d)
        return out

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "chart": {"dim": self.chart.dim, "name": self.chart.name},
            "rank": self.rank,
            "anchor": [[c.poly.text() for c in row] for row in self.anchor],
            "bracket": {
                f"{i},{j}": [c.poly.text() for c in self.bracket_table[i][j]]
                for i in range(self.rank)
                for j in range(self.rank)
                if any(not c.is_zero for c in self.bracket_table[i][j])
            },
        }

    @staticmethod
    def from_json(data) -> "LieRinehart":
        if isinstance(data, str):
            data = json.loads(data)
        dim = int(data["chart"]["dim"])
        chart = Chart.space(dim, data["chart"].get("name", "chart")) if dim else Chart.point(
            data["chart"].get("name", "pt")
        )
        rank = int(data["rank"])
        anchor = [
            [CoeffFn(chart, Polynomial.parse(p, dim)) for p in row] for row in data["anchor"]
        ]
        zero = [CoeffFn.const(chart, 0)] * rank
        bracket = [[list(zero) for _ in range(rank)] for _ in range(rank)]
        for key, polys in data.get("bracket", {}).items():
            i, j = (int(k) for k in key.split(","))
            entry = [CoeffFn(chart, Polynomial.parse(p, dim)) for p in polys]
            bracket[i][j] = entry
            bracket[j][i] = [-c for c in entry]
        return LieRinehart(chart, rank, anchor, bracket)


class Section:
    """X = sum_i h_i * X_i with CoeffFn coefficients."""

    def __init__(self, parent: LieRinehart, coeffs):
        if len(coeffs) != parent.rank:
            raise ValueError("need one coefficient per frame element")
        self.parent = parent
        self.coeffs = [parent._fn(c) for c in coeffs]

    def _check(self, other: "Section"):
        if self.parent is not other.parent and self.parent != other.parent:
            raise ParentMismatch("sections of different Lie-Rinehart algebras")

    def __eq__(self, other):
        return (
            isinstance(other, Section)
            and self.parent == other.parent
            and self.coeffs == other.coeffs
        )

    def __add__(self, other: "Section") -> "Section":
        self._check(other)
        return Section(self.parent, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Section":
        return Section(self.parent, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def rmul(self, f: CoeffFn) -> "Section":
        return Section(self.parent, [f * a for a in self.coeffs])

    @property
    def is_zero(self) -> bool:
        return all(c.is_zero for c in self.coeffs)

    def __repr__(self):
        parts = [
            f"({c.text()})*{n}" for c, n in zip(self.coeffs, self.parent.basis_names) if not c.is_zero
        ]
        return " + ".join(parts) if parts else "0"


def anchor_apply(X: Section, f: CoeffFn) -> CoeffFn:
    """The derivation rho(X) applied to f."""
    A = X.parent
    if f.chart != A.chart:
        raise ParentMismatch("function lives on a different chart")
    out = CoeffFn.const(A.chart, 0)
    for i in range(A.rank):
        out = out + X.coeffs[i] * A.frame_anchor_apply(i, f)
    return out


def bracket(X: Section, Y: Section) -> Section:
    """[X, Y] extended from the structure table by the Leibniz rule."""
    X._check(Y)
    A = X.parent
    out = A.zero_section()
    for i in range(A.rank):
        hi = X.coeffs[i]
        if hi.is_zero:
            continue
        for j in range(A.rank):
            kj = Y.coeffs[j]
            if kj.is_zero:
                continue
            table = Section(A, A.bracket_table[i][j])
            out = out + table.rmul(hi * kj)
    # derivative terms: rho(X)(k_j) X_j - rho(Y)(h_i) X_i
    for j in range(A.rank):
        out = out + A.basis_section(j).rmul(anchor_apply(X, Y.coeffs[j]))
    for i in range(A.rank):
        out = out - A.basis_section(i).rmul(anchor_apply(Y, X.coeffs[i]))
    return out


def check_axioms(A: LieRinehart, samples=None, seed: int = 0xC0FFEE) -> dict:
    """Verify the Lie-Rinehart axioms exactly; returns a pass/fail report.

    Checks antisymmetry of the table, Jacobi on frame triples (and on the
    supplied sample sections), anchor compatibility rho([X,Y]) = [rhoX, rhoY]
    on random polynomials, and the Leibniz rule with random functions.
    """
    rng = random.Random(seed)
    checks = []

    def record(name, ok, witness=None):
        checks.append({"name": name, "pass": bool(ok), "witness": witness})

    ok = True
    witness = None
    for i in range(A.rank):
        for j in range(A.rank):
            for k in range(A.rank):
                if not (A.bracket_table[i][j][k] + A.bracket_table[j][i][k]).is_zero:
                    ok, witness = False, f"c[{i}][{j}][{k}] != -c[{j}][{i}][{k}]"
    record("antisymmetry", ok, witness)

    basis = [A.basis_section(i) for i in range(A.rank)]
    triples = [(x, y, z) for x in basis for y in basis for z in basis]
    for s in samples or []:
        triples.append(s)
    ok, witness = True, None
    for x, y, z in triples:
        jac = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        if not jac.is_zero:
            ok, witness = False, f"Jacobi fails on ({x!r}, {y!r}, {z!r})"
            break
    record("jacobi", ok, witness)

    ok, witness = True, None
    for x in basis:
        for y in basis:
            for _ in range(5):
                p = CoeffFn(A.chart, random_polynomial(rng, A.chart.dim))
                lhs = anchor_apply(bracket(x, y), p)
                rhs = anchor_apply(x, anchor_apply(y, p)) - anchor_apply(y, anchor_apply(x, p))
                if lhs != rhs:
                    ok, witness = False, f"anchor not a Lie map on ({x!r},{y!r},{p!r})"
    record("anchor_bracket", ok, witness)

    ok, witness = True, None
    for x in basis:
        for y in basis:
            for _ in range(5):
                f = CoeffFn(A.chart, random_polynomial(rng, A.chart.dim))
                lhs = bracket(x, y.rmul(f))
                rhs = bracket(x, y).rmul(f) + y.rmul(anchor_apply(x, f))
                if not (lhs - rhs).is_zero:
                    ok, witness = False, f"Leibniz fails on ({x!r},{y!r},{f!r})"
    record("leibniz", ok, witness)

    return {"passed": all(c["pass"] for c in checks), "checks": checks}


def algebroid_of_groupoid(model) -> LieRinehart:
    """The stored algebroid of a groupoid model, re-verified independently.

    For each frame element the left-invariant extension must be tangent to
    t-fibers, push to the anchor under ds at units, and the commutators of
    the extensions must reproduce the bracket table.
    """
    from .dist import frame_field, field_commutator, field_equal

    A = model.algebroid
    nv = model.arrow_chart.dim
    fields = [frame_field(model, i) for i in range(A.rank)]
    for i, V in enumerate(fields):
        if not field_equal(V, model.frame[i]):
            raise VerificationFailed(f"stored frame field {i} disagrees with dL_g derivation")
        # tangency: dt(V) = 0 as a polynomial identity
        for m, tm in enumerate(model.t_map):
            dtV = Polynomial(nv, {})
            for d in range(nv):
                dtV = dtV + tm.derive(d) * V[d]
            if not dtV.is_zero:
                raise VerificationFailed(f"frame field {i} is not tangent to t-fibers")
        # anchor: ds(V) at units equals rho(X_i)
        for m, sm in enumerate(model.s_map):
            dsV = Polynomial(nv, {})
            for d in range(nv):
                dsV = dsV + sm.derive(d) * V[d]
            at_units = dsV.substitute(model.unit_map)
            expected = A.anchor[i][m]
            if not (expected.is_poly and expected.poly == at_units):
                raise VerificationFailed(f"frame field {i} anchor mismatch on axis {m}")
    for i in range(A.rank):
        for j in range(A.rank):
            comm = field_commutator(fields[i], fields[j])
            want = [Polynomial(nv, {}) for _ in range(nv)]
            for k in range(A.rank):
                c = A.bracket_table[i][j][k]
                if c.is_zero:
                    continue
                if not c.is_poly:
                    raise VerificationFailed("non-polynomial structure constants")
                ck = c.poly.substitute(model.s_map) if A.chart.dim else Polynomial.const(nv, c.poly.constant_value())
                want = [w + ck * v for w, v in zip(want, fields[k])]
            if not field_equal(comm, want):
                raise VerificationFailed(f"bracket table mismatch at pair ({i},{j})")
    return A


# ---------------------------------------------------------------------------
# Desk-model structure data
# ---------------------------------------------------------------------------


def tangent_line_algebroid() -> LieRinehart:
    """Rank-1 algebroid of the pair groupoid over the line: anchor d/dt."""
    chart = Chart.line("M")
    one = CoeffFn.const(chart, 1)
    zero = CoeffFn.const(chart, 0)
    return LieRinehart(chart, 1, [[one]], [[[zero]]], ["D"])


def heisenberg_algebra() -> LieRinehart:
    """h3 over a point: [X, Y] = Z, anchor zero."""
    chart = Chart.point("pt")
    zero = CoeffFn.const(chart, 0)
    one = CoeffFn.const(chart, 1)
    z3 = [zero, zero, zero]
    bracket_table = [[list(z3) for _ in range(3)] for _ in range(3)]
    bracket_table[0][1] = [zero, zero, one]
    bracket_table[1][0] = [zero, zero, -one]
    return LieRinehart(chart, 3, [[], [], []], bracket_table, ["X", "Y", "Z"])


def rank_zero_algebroid(chart: Chart) -> LieRinehart:
    """The zero algebroid of an etale groupoid."""
    return LieRinehart(chart, 0, [], [], [])
