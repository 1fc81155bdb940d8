"""Walk through the exact coefficient ring and the enveloping algebra.

Run:  python3 demos/01_rewriting_basics.py
"""

from convbialg import (
    CoeffFn,
    Polynomial,
    UEAElement,
    coproduct,
    counit,
    heisenberg_algebra,
    tangent_line_algebroid,
    uea_mul,
)

# -- coefficients: polynomials plus flat pieces -----------------------------

A = tangent_line_algebroid()
f = CoeffFn(A.chart, Polynomial.parse("x0^2 + 1", 1))
phi = CoeffFn.phi(A.chart)  # sign(t) e^{-1/t^2}, smooth and flat at 0
print("f           =", f.text())
print("phi         =", phi.text())
print("f + 2 phi   =", (f + phi.scale(2)).text())
print("phi(1.0)    =", phi.eval((1.0,)))
print("germ of phi at 0 is zero?", phi.has_zero_germ_at((0,)))

# -- rewriting to normal form -----------------------------------------------

D = UEAElement.generator(A, 0)
t = UEAElement.from_coeff(A, CoeffFn.var(A.chart))
print()
print("D * t       =", uea_mul(D, t).text(), "   (the Leibniz rule)")

H = heisenberg_algebra()
X, Y = UEAElement.generator(H, 0), UEAElement.generator(H, 1)
print("Y * X       =", uea_mul(Y, X).text(), "   ([X, Y] = Z)")
print("X * Y * Y   =", uea_mul(X, uea_mul(Y, Y)).text())

# -- the coalgebra structure ------------------------------------------------

X2 = uea_mul(X, X)
print()
print("Delta(X^2)  =", {k: v.text() for k, v in coproduct(X2).terms.items()})
print("eps(X^2)    =", counit(X2).text())
print("eps(t D + 1)=", counit(uea_mul(t, D) + UEAElement.one(A)).text())
