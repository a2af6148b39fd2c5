"""Semistable densities on Q_p, two ways, plus the scaling relation.

The density of the law with characteristic function e^{-Ct|y|^gamma} has
a Gamma_p series expansion in |x|_p and an independent shell-by-shell
Fourier inversion.  Their agreement is the package's core p-adic check.
"""
from fractions import Fraction

from trace_lab import SemistableLaw, density, mass_check

law = SemistableLaw(2, 1.0, 1.0)

print("p=2, gamma=1, Ct=1:")
print("  |x|_2    series              shell               |diff|")
for k in range(-3, 4):
    x = Fraction(2) ** (-k)
    ser = density(law, 1.0, x, "series")
    shl = density(law, 1.0, x, "shell")
    print(f"  2^{k:+d}     {ser.value:.15f}   {shl.value:.15f}   {abs(ser.value - shl.value):.1e}")

print()
mc = mass_check(law, 1.0)
print(f"total mass: {mc.result.value:.15f}  (bound {mc.result.error_bound:.1e})")
print(f"min density seen: {mc.min_density:.6f} at shell {mc.min_density_shell}")

# the defining self-similarity: scaling x by p rescales time by p^{-gamma}
print()
print("scaling check f_t(x) = f_{t p^-gamma}(p x)/p:")
for gamma in (0.5, 1.0, 2.0):
    law_g = SemistableLaw(3, gamma, 1.0)
    lhs = density(law_g, 1.0, Fraction(3), "shell").value
    rhs = density(law_g, 3.0 ** -gamma, Fraction(9), "shell").value / 3.0
    print(f"  gamma={gamma}: {lhs:.15f} vs {rhs:.15f}")

# heavy corner: deep inside Z_5 the alternating series must be regrouped
# into an all-positive ordering before it is numerically usable
law5 = SemistableLaw(5, 2.0, 2.0)
x = Fraction(5) ** 4
ser = density(law5, 1.0, x, "series")
shl = density(law5, 1.0, x, "shell")
print()
print(f"p=5, gamma=2, Ct=2, |x|=5^-4: series {ser.value:.12e} shell {shl.value:.12e}")
