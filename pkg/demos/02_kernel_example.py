"""A nonzero element of the convolution algebra that the representation
kills: the four flat-kink bisections over the pair groupoid.

Run:  python3 demos/02_kernel_example.py
"""

from convbialg import (
    CoeffFn,
    ConvElement,
    Polynomial,
    UEAElement,
    conv_is_zero,
    dist_eval_at,
    dist_is_zero,
    germ_of,
    eval_germ,
    kernel_test,
    pair_model,
    phi,
    stratify,
)

model = pair_model()
A = model.algebroid

# tau_ij(t) = t + 2^i phi(t) on t <= 0 and t + 2^j phi(t) on t >= 0.
# All four agree with the identity to infinite order at 0, but their germs
# at 0 are pairwise distinct.
kinks = [model.lookup(f"E{i}{j}") for i in (0, 1) for j in (0, 1)]
print("stratification of the four kinks (germ classes per stratum):")
for stext, classes in stratify(model, kinks).table():
    print(f"  {stext:10s}", " | ".join("{" + ", ".join(c) + "}" for c in classes))

# the alternating sum a = sum (-1)^{i+j} <f, E_ij> with f = 1 + t
f = CoeffFn(A.chart, Polynomial.parse("x0 + 1", 1))
a = ConvElement.zero(model)
for i in (0, 1):
    for j in (0, 1):
        sign = 1 if (i + j) % 2 == 0 else -1
        a = a + ConvElement.single(model, model.lookup(f"E{i}{j}"),
                                   UEAElement.from_coeff(A, f.scale(sign)))

print()
print("a =", a.text())
print()
print("a == 0 in the convolution algebra?", conv_is_zero(a))
g0 = eval_germ(a, germ_of(model.lookup("E00"), (0,)))
print("value of a on the E00-germ at the origin is zero?", g0.is_zero)
print("kernel_test(a):", kernel_test(a)["in_kernel"])

T = phi(a)
print("Phi(a) =", T.text())
print("Phi(a) == 0 as a transversal distribution?", dist_is_zero(T))

print()
print("numeric spot check of Phi(a)(F) for F = x0*x1 + x1^2:")
F = Polynomial.parse("x0*x1 + x1^2", 2)
for x in (-1.3, -0.4, 0.7, 2.1):
    print(f"  x = {x:5.2f}:  {abs(dist_eval_at(T, F, x)):.3e}")
