from fractions import Fraction as F

import pytest

from convbialg.coeffs import Chart, Polynomial, Q, Region
from convbialg.errors import DomainError, VerificationFailed
from convbialg.groupoid import (
    AffineMap,
    Bisection,
    Diffeo1D,
    GroupoidModel,
    bisection_germ_eq,
    bisection_inv,
    bisection_mul,
    germ_fiber,
    germ_inv,
    germ_mul,
    germ_of,
    theta,
    unit_bisection,
)
from convbialg.models import etale_model, heisenberg_model, pair_model


@pytest.fixture(scope="module")
def pair():
    return pair_model()


@pytest.fixture(scope="module")
def h3():
    return heisenberg_model()


@pytest.fixture(scope="module")
def etale():
    return etale_model()


class TestStructureMaps:
    def test_pair_maps(self, pair):
        g = (F(3), F(5))  # arrow 5 -> 3
        assert pair.s_of(g) == (F(5),)
        assert pair.t_of(g) == (F(3),)
        assert pair.inv_arrow(g) == (F(5), F(3))
        h = (F(7), F(3))
        assert pair.mult_arrow(h, g) == (F(7), F(5))

    def test_heisenberg_inverse(self, h3):
        g = (F(2), F(3), F(5))
        # (a, b, c)^-1 = (-a, -b, -c + a b)
        assert h3.inv_arrow(g) == (F(-2), F(-3), F(1))
        assert h3.mult_arrow(h3.inv_arrow(g), g) == (F(0), F(0), F(0))

    def test_heisenberg_noncommutative(self, h3):
        g = (F(1), F(0), F(0))
        h = (F(0), F(1), F(0))
        assert h3.mult_arrow(g, h) != h3.mult_arrow(h, g)

    def test_verify_catches_bad_mult(self):
        v2 = [Polynomial.var(2, i) for i in range(2)]
        v4 = [Polynomial.var(4, i) for i in range(4)]
        x = Polynomial.var(1, 0)
        with pytest.raises(VerificationFailed):
            GroupoidModel(
                kind="pair",
                base=Chart.line("M"),
                arrow_chart=Chart.space(2, "G"),
                s_map=[v2[1]],
                t_map=[v2[0]],
                unit_map=[x, x],
                inv_map=[v2[1], v2[0]],
                mult_map=[v4[0], v4[2]],  # wrong source slot
                name="broken",
            )


class TestDiffeo:
    def test_affine_apply_inverse(self):
        d = Diffeo1D.affine(Chart.line("M"), 2, 1)
        assert d.apply(F(3)) == F(7)
        assert d.apply_inv(F(7)) == F(3)

    def test_flat_kink_inverse_numeric(self):
        d = Diffeo1D.flat_kink(Chart.line("M"), 1, 2)
        y = d.apply(1.0)
        assert d.apply_inv(y) == pytest.approx(1.0, abs=1e-9)
        y = d.apply(-0.7)
        assert d.apply_inv(y) == pytest.approx(-0.7, abs=1e-9)

    def test_compose(self):
        ch = Chart.line("M")
        d = Diffeo1D.affine(ch, 2, 0).compose(Diffeo1D.affine(ch, 1, 3))
        assert d.affine_parts() == (Q(2), Q(6))


class TestBisections:
    def test_pair_mul_inv(self, pair):
        shift = pair.lookup("shift")
        dbl = pair.lookup("dbl")
        prod = bisection_mul(shift, dbl)  # tau = 2x + 1
        assert prod.tau.affine_parts() == (Q(2), Q(1))
        inv = bisection_inv(shift)
        assert inv.tau.affine_parts() == (Q(1), Q(-1))

    def test_group_mul(self, h3):
        kx, ky = h3.lookup("kx"), h3.lookup("ky")
        assert bisection_mul(kx, ky).element == (F(1), F(1), F(1))
        assert bisection_mul(ky, kx).element == (F(1), F(1), F(0))
        # (1,2,3)^-1 = (-1, -2, -3 + 1*2)
        assert bisection_inv(h3.lookup("k123")).element == (F(-1), F(-2), F(-1))

    def test_etale_domain_arithmetic(self, etale):
        w = etale.lookup("w")
        winv = bisection_inv(w)
        # inverse domain is the image gamma(dom)
        assert winv.domain.contains((F(3, 2),))
        assert not winv.domain.contains((F(1, 2),))
        prod = bisection_mul(etale.lookup("sh"), w)
        assert prod.gamma == AffineMap.of(1, 2)
        assert prod.domain == w.domain

    def test_unit(self, pair, h3, etale):
        assert unit_bisection(pair).tau.is_identity
        assert unit_bisection(h3).element == (F(0), F(0), F(0))
        assert unit_bisection(etale).gamma.is_identity


class TestGerms:
    def test_theta(self, pair):
        shift = pair.lookup("shift")
        e = germ_of(shift, (F(2),))
        assert theta(pair, e) == (F(3), F(2))

    def test_germ_mul_inv(self, pair):
        shift, dbl = pair.lookup("shift"), pair.lookup("dbl")
        e1 = germ_of(dbl, (F(2),))
        e2 = germ_of(shift, (F(4),))
        prod = germ_mul(pair, e2, e1)
        assert theta(pair, prod) == (F(5), F(2))
        assert theta(pair, germ_inv(pair, e1)) == (F(2), F(4))

    def test_flat_kinks_agree_only_off_origin(self, pair):
        E00, E01 = pair.lookup("E00"), pair.lookup("E01")
        assert bisection_germ_eq(E00, E01, (F(-1),))  # same negative branch
        assert not bisection_germ_eq(E00, E01, (F(1),))
        assert not bisection_germ_eq(E00, E01, (F(0),))

    def test_germ_fiber_partitions(self, pair):
        # at the identity arrow through x=-1 the four kinks form two classes
        classes = germ_fiber(pair, (F(-1) + F(0), F(-1)),
                             [pair.lookup(n) for n in ("E00", "E01", "E10", "E11")])
        # wrong arrow value: none pass through an affine point like that
        sizes = sorted(len(c) for c in classes)
        assert sizes == [] or sizes == [2, 2]

    def test_group_fiber(self, h3):
        classes = germ_fiber(h3, (F(1), F(0), F(0)))
        assert [len(c) for c in classes] == [1]
        assert classes[0][0].element == (F(1), F(0), F(0))
