"""Over a point the convolution algebra decomposes into group-element
deltas twisted by enveloping-algebra coefficients, and the representation
is faithful: the Heisenberg group model.

Run:  python3 demos/03_cartier_gabriel.py
"""

from convbialg import (
    ConvElement,
    UEAElement,
    ad_uea,
    bisection_inv,
    conv_mul,
    dist_mul,
    heisenberg_model,
    kernel_test,
    phi,
    unit_bisection,
    uea_mul,
)

model = heisenberg_model()
H = model.algebroid
X, Y, Z = (UEAElement.generator(H, i) for i in range(3))
k = model.lookup("k123")  # the group element (1, 2, 3)
unit = model.register(unit_bisection(model))

# every <u, k> factors as <u, e> . <1, k>
u = uea_mul(X, Y) + Z.scale(2)
a = ConvElement.single(model, k, u)
factored = conv_mul(ConvElement.single(model, unit, u),
                    ConvElement.single(model, k, UEAElement.one(H)))
print("<u, k>            =", a.text())
print("<u, e> . <1, k>   =", factored.text())
print("equal?", a == factored)

# ... and in the other order the coefficient picks up the adjoint twist
other = conv_mul(ConvElement.single(model, k, UEAElement.one(H)),
                 ConvElement.single(model, unit, ad_uea(bisection_inv(k), u)))
print("<1, k> . <Ad_{k^-1} u, e> equals it too?", a == other)

# the twisted product on the distribution side mirrors convolution
kx = model.lookup("kx")
delta = ConvElement.single(model, kx, UEAElement.one(H))
lhs = dist_mul(phi(delta), phi(a))
rhs = phi(conv_mul(delta, a))
print()
print("delta_kx * Phi<u, k> == Phi(delta_kx . <u, k>)?", lhs == rhs)

# faithfulness: no nonzero element passes the kernel test
print()
print("kernel_test(<u, k>):", kernel_test(a)["in_kernel"])
print("kernel_test(0):     ", kernel_test(a - a)["in_kernel"])
