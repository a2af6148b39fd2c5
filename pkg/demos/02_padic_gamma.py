"""The p-adic gamma integral and its closed form.

Gamma_p(s) = int_{Q_p} |x|^{s-1} chi(x) dx evaluates shell by shell: the
additive character kills every shell of norm p^2 and beyond, leaving a
geometric series inside Z_p plus one boundary term.  The closed form
(1 - p^{s-1})/(1 - p^{-s}) satisfies Gamma_p(s) Gamma_p(1-s) = 1.
"""
from trace_lab import padic_gamma, padic_gamma_reflection_defect

for p in (2, 3, 5):
    print(f"p = {p}")
    print("  s     closed form        shell oracle       |diff|      reflection")
    for k in range(1, 10):
        s = k / 10.0
        closed = padic_gamma(p, s, "closed")
        shell = padic_gamma(p, s, "shell_oracle")
        refl = padic_gamma_reflection_defect(p, s)
        print(
            f"  {s:.1f}   {closed.value:+.12f}    {shell.value:+.12f}"
            f"   {abs(closed.value - shell.value):.1e}     {refl:.1e}"
        )
    print()

# near s = 0 the shell series converges like p^{-s n}: slowly.  the
# oracle sizes its depth from the requested tolerance
slow = padic_gamma(2, 0.05, "shell_oracle")
print(f"Gamma_2(0.05) by shells: {slow.value:.12f} after {slow.terms_used} shells")
