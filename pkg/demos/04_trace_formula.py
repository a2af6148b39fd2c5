"""The probabilistic trace formula on the circle, and one printed failure.

Wrapping a stable density around Z gives a density on the torus whose
value at 0 equals the spectral sum  sum_n e^{-t sigma |n|^alpha}.  For
the Cauchy law both sides are coth(tsigma/2) in closed form.  The
package also reproduces, digit for digit, a pair of printed sums whose
conventions do not match, then shows the repaired version.
"""
import math

from trace_lab import (
    cauchy_psf_report,
    gaussian_law,
    potential_identity,
    stable_law,
    trace_defect,
)

print("gaussian trace, both sides of the formula:")
for t in (0.1, 0.5, 1.0, 4.0):
    rep = trace_defect(gaussian_law(), t)
    print(f"  t={t:<4g} lattice {rep.lattice_value.value:.15f}  defect {rep.defect:.1e}")

rep = trace_defect(stable_law(1.0, 1.0), 1.0)
print(f"\ncauchy t=1: lattice {rep.lattice_value.value:.15f}")
print(f"           spectral {rep.spectral_value.value:.15f}")
print(f"           coth(1/2) {1.0 / math.tanh(0.5):.15f}")

rep = trace_defect(stable_law(1.5, 1.0), 1.0)
print(f"\nalpha=1.5 t=1: defect {rep.defect:.1e} (bound {rep.combined_bound:.1e})")

# integrate the centered trace over all time: sum_n 2/(sigma n^alpha),
# finite exactly when alpha > 1
print()
for alpha in (1.5, 0.8):
    pot = potential_identity(alpha, 1.0)
    if pot.diverged:
        print(f"alpha={alpha}: diverged (needs alpha > 1)")
    else:
        print(f"alpha={alpha}: {pot.value.value:.9f} vs 2 zeta({alpha}) = {pot.reference:.9f}")

# the printed Cauchy check pairs the classical density 1/(pi(1+x^2))
# with the transform of a different normalization; reproduce it as
# printed, then in one consistent convention
print()
paper = cauchy_psf_report("paper")
print(f"as printed:  density side {paper.density_sum.value:.6f}, "
      f"transform side {paper.transform_sum.value:.6f}  (no match)")
fixed = cauchy_psf_report("consistent")
print(f"consistent:  density side {fixed.density_sum.value:.10f}, "
      f"transform side {fixed.transform_sum.value:.10f}  = coth(pi)")
