import random
from fractions import Fraction as F

import pytest

from convbialg.conv import ConvElement, conv_is_zero, conv_mul
from convbialg.coeffs import CoeffFn, Polynomial, Q
from convbialg.dist import TransvDist, dist_mul
from convbialg.models import etale_model, heisenberg_model, pair_model
from convbialg.phi import (
    dist_is_zero,
    kernel_test,
    phi,
    scenario_cartier_gabriel,
    scenario_etale_iso,
    scenario_kernel_example,
    stratify,
)
from convbialg.uea import UEAElement


@pytest.fixture(scope="module")
def pair():
    return pair_model()


@pytest.fixture(scope="module")
def h3():
    return heisenberg_model()


@pytest.fixture(scope="module")
def etale():
    return etale_model()


class TestStratify:
    def test_kink_strata(self, pair):
        names = ["E00", "E01", "E10", "E11"]
        table = stratify(pair, [pair.lookup(n) for n in names]).table()
        by_stratum = {s: sorted(sorted(c) for c in classes) for s, classes in table}
        assert by_stratum["(-inf,0)"] == [["E00", "E01"], ["E10", "E11"]]
        assert by_stratum["{0}"] == [["E00"], ["E01"], ["E10"], ["E11"]]
        assert by_stratum["(0,+inf)"] == [["E00", "E10"], ["E01", "E11"]]

    def test_affine_crossing_becomes_breakpoint(self, pair):
        # shift (x+1) and dbl (2x) cross at x = 1
        table = stratify(pair, [pair.lookup("shift"), pair.lookup("dbl")]).table()
        strata = [s for s, _ in table]
        assert "{1}" in strata
        by_stratum = dict(table)
        # same arrow at x = 1, but different slopes: two singleton germ classes
        assert sorted(len(c) for c in by_stratum["{1}"]) == [1, 1]

    def test_group_strata(self, h3):
        table = stratify(h3, [h3.lookup("kx"), h3.lookup("ky")]).table()
        assert len(table) == 1
        _, classes = table[0]
        assert sorted(len(c) for c in classes) == [1, 1]


class TestPhi:
    def test_degree0_rule(self, pair):
        # phi<f, E> = [[E, f o tau]]
        A = pair.algebroid
        f = CoeffFn(A.chart, Polynomial.parse("x0^2", 1))
        a = ConvElement.single(pair, pair.lookup("shift"), UEAElement.from_coeff(A, f))
        T = phi(a)
        (v,) = T.terms.values()
        assert v.degree0() == CoeffFn(A.chart, Polynomial.parse("x0^2 + 2*x0 + 1", 1))

    def test_homomorphism_spot(self, h3):
        H = h3.algebroid
        a = ConvElement.single(h3, h3.lookup("kx"), UEAElement.generator(H, 0))
        b = ConvElement.single(h3, h3.lookup("ky"), UEAElement.generator(H, 1))
        assert phi(conv_mul(a, b)) == dist_mul(phi(a), phi(b))


class TestKernel:
    def make_kernel_element(self, pair):
        A = pair.algebroid
        f = CoeffFn(A.chart, Polynomial.parse("x0 + 1", 1))
        a = ConvElement.zero(pair)
        for i in (0, 1):
            for j in (0, 1):
                sign = 1 if (i + j) % 2 == 0 else -1
                a = a + ConvElement.single(
                    pair, pair.lookup(f"E{i}{j}"),
                    UEAElement.from_coeff(A, f.scale(sign)))
        return a

    def test_kernel_element(self, pair):
        a = self.make_kernel_element(pair)
        assert not conv_is_zero(a)
        assert kernel_test(a)["in_kernel"]
        assert dist_is_zero(phi(a))

    def test_perturbed_element_not_in_kernel(self, pair):
        a = self.make_kernel_element(pair)
        A = pair.algebroid
        a = a + ConvElement.single(
            pair, pair.lookup("E00"),
            UEAElement.from_coeff(A, CoeffFn.const(A.chart, 1)))
        rep = kernel_test(a)
        assert not rep["in_kernel"]
        assert rep["witness"]
        assert not dist_is_zero(phi(a))

    def test_group_kernel_trivial(self, h3):
        # for the group model Phi is injective: only zero passes
        H = h3.algebroid
        a = ConvElement.single(h3, h3.lookup("kx"), UEAElement.generator(H, 0))
        assert not kernel_test(a)["in_kernel"]
        z = a - a
        assert kernel_test(z)["in_kernel"]


class TestScenarios:
    def test_kernel_example(self):
        rep = scenario_kernel_example()
        assert rep["pass"], rep["checks"]

    def test_cartier_gabriel(self):
        rep = scenario_cartier_gabriel()
        assert rep["pass"], rep["checks"]

    def test_etale_iso(self):
        rep = scenario_etale_iso()
        assert rep["pass"], rep["checks"]
