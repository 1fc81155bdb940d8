import random
from fractions import Fraction as F

import pytest

from convbialg.coeffs import CoeffFn, Polynomial, Q
from convbialg.dist import (
    TransvDist,
    commuting_square_gap,
    commuting_square_gap_numeric,
    dist_eval,
    dist_eval_at,
    dist_mul,
    dist_mul_defcheck,
    left_invariant_field,
    omega_apply,
)
from convbialg.dist import test_bank as dist_test_bank
from convbialg.lie_rinehart import random_polynomial
from convbialg.models import etale_model, heisenberg_model, pair_model
from convbialg.uea import UEAElement, uea_mul


@pytest.fixture(scope="module")
def pair():
    return pair_model()


@pytest.fixture(scope="module")
def h3():
    return heisenberg_model()


@pytest.fixture(scope="module")
def etale():
    return etale_model()


class TestOmega:
    def test_pair_derivative_along_source(self, pair):
        # [[graph(x+1), D]](F)(y) = (dF/dx)(y, y-1)
        A = pair.algebroid
        D = UEAElement.generator(A, 0)
        T = TransvDist.single(pair, pair.lookup("shift"), D)
        F2 = Polynomial.parse("x0^2*x1", 2)
        assert dist_eval(T, F2) == CoeffFn(A.chart, Polynomial.parse("x0^2", 1))

    def test_heisenberg_y_on_ab(self, h3):
        # the left-invariant Y applied to F(a,b,c) = a b gives a at the unit
        Y = UEAElement.generator(h3.algebroid, 1)
        out = omega_apply(h3, Y, Polynomial.parse("x0*x1", 3)).as_polynomial()
        assert out == Polynomial.parse("x0", 3)

    def test_left_invariant_extension(self, h3):
        # the extension of Y is the stored frame column (0, 1, a)
        H = h3.algebroid
        V = left_invariant_field(h3, H.basis_section(1))
        assert V == [Polynomial(3, {}), Polynomial.const(3, 1), Polynomial.var(3, 0)]

    def test_omega_is_homomorphism(self, h3):
        rng = random.Random(2)
        H = h3.algebroid
        for _ in range(10):
            exps = [tuple(rng.randint(0, 1) for _ in range(3)) for _ in range(2)]
            u = UEAElement(H, {exps[0]: CoeffFn.const(H.chart, 1)})
            v = UEAElement(H, {exps[1]: CoeffFn.const(H.chart, 1)})
            F3 = random_polynomial(rng, 3, 3)
            lhs = omega_apply(h3, uea_mul(u, v), F3).as_polynomial()
            rhs = omega_apply(h3, u, omega_apply(h3, v, F3).as_polynomial()).as_polynomial()
            assert lhs == rhs


class TestEval:
    def test_eval_at_exact(self, pair):
        A = pair.algebroid
        D = UEAElement.generator(A, 0)
        T = TransvDist.single(pair, pair.lookup("shift"), D)
        F2 = Polynomial.parse("x0*x1", 2)
        # dF/dx at (y, y-1) is y
        assert dist_eval_at(T, F2, F(3)) == F(3)

    def test_eval_etale_pieces(self, etale):
        A = etale.algebroid
        f = UEAElement.from_coeff(A, CoeffFn(A.chart, Polynomial.parse("x0", 1)))
        T = TransvDist.single(etale, etale.lookup("d"), f)
        table = {etale.lookup("d").gamma: CoeffFn(A.chart, Polynomial.parse("x0^2", 1))}
        # at target x = 4 the source point is gamma^{-1}(4) = 2: f(2) * F(2)
        assert dist_eval_at(T, table, F(4)) == F(8)

    def test_group_eval(self, h3):
        H = h3.algebroid
        Y = UEAElement.generator(H, 1)
        T = TransvDist.single(h3, h3.lookup("k123"), Y)
        F3 = Polynomial.parse("x1", 3)
        v = dist_eval_at(T, F3, None)
        assert v == 1


class TestProduct:
    def test_pair_product_shape(self, pair):
        A = pair.algebroid
        D = UEAElement.generator(A, 0)
        T2 = TransvDist.single(pair, pair.lookup("shift"), D)
        T1 = TransvDist.single(pair, pair.lookup("dbl"), D)
        prod = dist_mul(T2, T1)
        assert len(prod.terms) == 1
        (bid,) = prod.terms
        assert pair.registry[bid].tau.affine_parts() == (Q(2), Q(1))

    def test_defcheck_agreement_small(self, pair, h3, etale):
        rng = random.Random(0xC0FFEE)
        for model in (pair, h3, etale):
            A = model.algebroid
            pool = [
                E for E in model.registry.values()
                if model.kind != "pair" or E.tau.affine_parts() is not None
            ]
            n = model.arrow_chart.dim
            for _ in range(10):
                E2, E1 = rng.choice(pool), rng.choice(pool)
                if A.rank:
                    u2 = UEAElement.generator(A, rng.randrange(A.rank))
                else:
                    u2 = UEAElement.from_coeff(
                        A, CoeffFn(A.chart, random_polynomial(rng, 1, 2)))
                u1 = UEAElement.from_coeff(
                    A, CoeffFn(A.chart, random_polynomial(rng, A.chart.dim, 2)))
                T2 = TransvDist.single(model, E2, u2)
                T1 = TransvDist.single(model, E1, u1)
                if model.kind == "etale_action":
                    Ftest = {g2.gamma.after(g1.gamma): CoeffFn(
                        model.base, random_polynomial(rng, 1, 2))
                        for g2 in pool for g1 in pool}
                else:
                    Ftest = random_polynomial(rng, n, 2)
                x = Q(rng.randint(-5, 5), rng.randint(1, 4))
                assert dist_eval_at(dist_mul(T2, T1), Ftest, x) == dist_mul_defcheck(
                    T2, T1, Ftest, x)


class TestCommutingSquare:
    def test_exact_gap_zero(self, pair, h3):
        rng = random.Random(9)
        A = pair.algebroid
        D = UEAElement.generator(A, 0)
        for _ in range(5):
            Fq = random_polynomial(rng, 2, 3)
            assert commuting_square_gap(pair, pair.lookup("dbl"), D, Fq).is_zero
        H = h3.algebroid
        for _ in range(5):
            Fq = random_polynomial(rng, 3, 3)
            u = UEAElement.generator(H, rng.randrange(3))
            assert commuting_square_gap(h3, h3.lookup("k123"), u, Fq).is_zero

    def test_flat_numeric_gap_small(self, pair):
        rng = random.Random(10)
        A = pair.algebroid
        D = UEAElement.generator(A, 0)
        for _ in range(3):
            Fq = random_polynomial(rng, 2, 2)
            gap = commuting_square_gap_numeric(pair, pair.lookup("E01"), D, Fq,
                                               (0.5, 0.35))
            assert gap < 1e-9


def test_test_bank_nonempty(pair, h3, etale):
    for model in (pair, h3, etale):
        bank = dist_test_bank(model)
        assert len(bank) >= 10
