"""Jacobi theta: the functional equation and the potential integral.

theta(t) = sum_n e^{-t pi n^2} is its own Fourier partner under
f(x) = t^{-1/2} e^{-pi x^2/t} <-> e^{-t pi y^2}, so summing both sides
over the integers forces theta(1/t) = sqrt(t) theta(t).  Integrating
the centered trace theta(t) - 1 over (0, inf) gives pi/3.
"""
import math

from trace_lab import theta, theta_functional_defect, theta_potential_integral

print("t        theta(t)              sqrt(t)*theta(t) - theta(1/t)")
for t in (0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 10.0):
    val = theta(t)
    print(f"{t:<8g} {val.value:.15f}   {theta_functional_defect(t):.3e}")

print()
res = theta_potential_integral()
print(f"int_0^inf (theta(t) - 1) dt = {res.value:.15f}")
print(f"pi/3                        = {math.pi / 3.0:.15f}")
print(f"defect {abs(res.value - math.pi / 3.0):.2e}, quadrature bound {res.error_bound:.2e}")

# the two halves: (0,1] is where the functional equation does the work,
# turning the t -> 0 blowup into the convergent sqrt substitution
lower = theta_potential_integral(interval="lower")
upper = theta_potential_integral(interval="upper")
print(f"split at 1: {lower.value:.12f} + {upper.value:.12f}")
