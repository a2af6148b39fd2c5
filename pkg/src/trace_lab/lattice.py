"""Periodisation onto the d-torus and the probabilistic trace formula.

Two independent evaluations of the wrapped density are kept side by side:

* lattice mode sums the real density over x + Z^d with explicit tail
  control (superexponential for gaussian-type laws, arctan midpoint
  comparison for Cauchy, asymptotic-expansion tails summed by Hurwitz
  zeta for other stable indices);
* spectral mode sums e^{-t eta(n)} cos(2 pi n.x) over sup-norm shells.

Their agreement at x = 0 is the trace identity; on a grid it is Poisson
summation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from scipy import special

from .core import (
    CapabilityError,
    CompensatedSum,
    EvalResult,
    ParameterError,
    QuadratureConfig,
    ShellSumPlan,
    product_results,
)
from .real_stable import (
    StableSymbol,
    stable_asymptotic_coefficients,
    stable_asymptotic_density,
    stable_density_numeric,
)

_DEFAULT_PLAN = ShellSumPlan()
_TWO_PI = 2.0 * math.pi

# quadrature used for per-point density evaluations inside lattice sums
_LATTICE_QUAD = QuadratureConfig(abs_tol=1e-10, panel_limit=300)


@dataclass(frozen=True)
class LatticeLawSpec:
    """A symmetric law on R^d wrapped onto the torus.

    kind "gaussian" pins (alpha, sigma) = (2, pi) so eta(n) = pi|n|^2;
    kind "stable" carries eta(n) = sigma|n|^alpha.
    """

    kind: str
    symbol: StableSymbol

    def __post_init__(self):
        if self.kind not in ("gaussian", "stable"):
            raise ParameterError(f"unknown law kind {self.kind!r}")
        if self.symbol.d > 3:
            raise ParameterError("d <= 3 enforced at the interface")

    @property
    def d(self) -> int:
        return self.symbol.d

    @property
    def has_density(self) -> bool:
        # closed forms exist for gaussian-type laws in any d (the symbol
        # separates over coordinates) and for every alpha in d = 1
        return self.kind == "gaussian" or self.symbol.alpha == 2.0 or self.symbol.d == 1

    def eta(self, n) -> float:
        return self.symbol.eta(n)


def gaussian_law(d: int = 1) -> LatticeLawSpec:
    return LatticeLawSpec("gaussian", StableSymbol(2.0, math.pi, d))


def stable_law(alpha: float, sigma: float, d: int = 1) -> LatticeLawSpec:
    return LatticeLawSpec("stable", StableSymbol(alpha, sigma, d))


def _supnorm_shell(d: int, m: int) -> Iterator[tuple[int, ...]]:
    """Integer points with sup-norm exactly m."""
    if m == 0:
        yield (0,) * d
        return
    if d == 1:
        yield (m,)
        yield (-m,)
    elif d == 2:
        for i in range(-m, m + 1):
            yield (i, -m)
            yield (i, m)
        for j in range(-m + 1, m):
            yield (-m, j)
            yield (m, j)
    elif d == 3:
        for i in range(-m, m + 1):
            for j in range(-m, m + 1):
                yield (i, j, -m)
                yield (i, j, m)
        for i in range(-m, m + 1):
            for k in range(-m + 1, m):
                yield (i, -m, k)
                yield (i, m, k)
        for j in range(-m + 1, m):
            for k in range(-m + 1, m):
                yield (-m, j, k)
                yield (m, j, k)
    else:
        raise ParameterError("d <= 3 enforced at the interface")


def _shell_tail_bound(d: int, c: float, alpha: float, m_next: float) -> float:
    # every point of sup-norm m has Euclidean norm >= m, and there are
    # at most 2 d 3^{d-1} m^{d-1} of them; the m-sum is bounded by its
    # first term plus the integral once u^{d-1} e^{-c u^alpha} decreases
    pref = 2.0 * d * 3.0 ** (d - 1)
    w = c * m_next**alpha
    first = m_next ** (d - 1) * (math.exp(-w) if w < 745.0 else 0.0)
    s = d / alpha
    integral = special.gammaincc(s, w) * special.gamma(s) * c ** (-s) / alpha
    return pref * (first + integral)


def _normalize_point(x, d: int) -> tuple[float, ...]:
    if isinstance(x, (int, float, Fraction)):
        x = (x,)
    xs = tuple(x)
    if len(xs) != d:
        raise ParameterError(f"point has {len(xs)} coordinates, law lives in d={d}")
    out = []
    for c in xs:
        if isinstance(c, Fraction):
            out.append(float(c % 1))
        else:
            out.append(float(c) % 1.0)
    return tuple(out)


def _spectral_sum(
    spec: LatticeLawSpec, t: float, x: tuple[float, ...] | None, plan: ShellSumPlan
) -> EvalResult:
    c = t * spec.symbol.sigma
    alpha = spec.symbol.alpha
    d = spec.d
    acc = CompensatedSum()
    points = 0
    m = 0
    while points <= plan.max_terms:
        shell = 0.0
        for n in _supnorm_shell(d, m):
            w = t * spec.eta(n)
            e = math.exp(-w) if w < 745.0 else 0.0
            if x is not None and e != 0.0:
                e *= math.cos(_TWO_PI * sum(ni * xi for ni, xi in zip(n, x)))
            shell += e
            points += 1
        acc.add(shell)
        m += 1
        # the first-term-plus-integral comparison needs the shell weight
        # to be decreasing from m on: c alpha m^alpha >= d suffices
        if c * alpha * float(m) ** alpha >= d:
            tail = _shell_tail_bound(d, c, alpha, float(m))
            if tail < plan.tail_tolerance:
                return EvalResult(acc.value, tail, points, True)
    return EvalResult(acc.value, math.inf, points, False)


def spectral_trace(
    spec: LatticeLawSpec, t: float, plan: ShellSumPlan = _DEFAULT_PLAN
) -> EvalResult:
    """sum_{n in Z^d} e^{-t eta(n)} over sup-norm shells with tail bound."""
    if t <= 0:
        raise ParameterError("spectral_trace needs t > 0")
    return _spectral_sum(spec, t, None, plan)


def _wrapped_gauss_1d(a: float, x0: float, plan: ShellSumPlan) -> EvalResult:
    # f(u) = sqrt(pi/a) e^{-pi^2 u^2 / a}; superexponential direct sum
    pref = math.sqrt(math.pi / a)
    q = math.pi * math.pi / a

    def f(u: float) -> float:
        w = q * u * u
        return pref * math.exp(-w) if w < 745.0 else 0.0

    acc = CompensatedSum()
    acc.add(f(x0))
    prev = math.inf
    n = 1
    while n < plan.max_terms:
        term = f(x0 + n) + f(x0 - n)
        acc.add(term)
        if term < plan.tail_tolerance / 10.0 and term < prev:
            # log-concave tails: the term ratio only decreases from here
            r = term / prev if prev > 0 else 0.0
            if r < 0.9:
                return EvalResult(acc.value, term * r / (1.0 - r), n, True)
        prev = term if term > 0.0 else prev
        n += 1
    return EvalResult(acc.value, math.inf, n, False)


def _cauchy_g(c: float, u: float) -> float:
    w = _TWO_PI * u
    return 2.0 * c / (c * c + w * w)


def _cauchy_tail(c: float, m: float) -> tuple[float, float]:
    # (integral from m to inf, midpoint-rule error bound)
    val = 0.5 - math.atan(_TWO_PI * m / c) / math.pi
    w = _TWO_PI * m
    gp = 8.0 * math.pi * c * w / (c * c + w * w) ** 2
    gpp = 16.0 * math.pi**2 * c * abs(3.0 * w * w - c * c) / (c * c + w * w) ** 3
    return val, (gp + gpp) / 24.0


def _wrapped_cauchy_1d(c: float, x0: float, cutoff: int = 4000) -> EvalResult:
    acc = CompensatedSum()
    acc.add(_cauchy_g(c, x0))
    for n in range(1, cutoff + 1):
        acc.add(_cauchy_g(c, x0 + n) + _cauchy_g(c, x0 - n))
    bound = 0.0
    for m in (cutoff + 0.5 + x0, cutoff + 0.5 - x0):
        val, err = _cauchy_tail(c, m)
        acc.add(val)
        bound += err
    return EvalResult(acc.value, bound, 2 * cutoff + 1, True)


def _wrapped_stable_numeric_1d(
    symbol: StableSymbol,
    t: float,
    x0: float,
    quad: QuadratureConfig,
    direct_radius: int = 32,
    k_max: int = 6,
) -> EvalResult:
    alpha = symbol.alpha
    acc = CompensatedSum()
    bound = 0.0
    neval = 0
    for n in range(-direct_radius, direct_radius + 1):
        r = stable_density_numeric(symbol, t, abs(x0 + n), quad)
        acc.add(r.value)
        bound += r.error_bound
        neval += r.terms_used

    # both tails via the large-x expansion, lattice-summed by Hurwitz zeta
    coeffs = stable_asymptotic_coefficients(symbol, t, k_max + 1)
    q_right = direct_radius + 1 + x0
    q_left = direct_radius + 1 - x0
    for q in (q_right, q_left):
        tail = sum(
            ck * float(special.zeta(alpha * k + 1.0, q))
            for k, ck in enumerate(coeffs[:-1], start=1)
        )
        acc.add(tail / math.pi)

    # declared tail error: next expansion order plus a calibration of the
    # expansion against direct quadrature at the nearest omitted point,
    # propagated with the worst-case decay u^{-(alpha+1)}
    q_min = min(q_right, q_left)
    next_order = (
        abs(coeffs[-1]) * float(special.zeta(alpha * (k_max + 1) + 1.0, q_min)) / math.pi
    )
    asym, _ = stable_asymptotic_density(symbol, t, q_min, k_max)
    probe = stable_density_numeric(symbol, t, q_min, quad)
    mismatch = abs(asym - probe.value) + probe.error_bound
    cal = mismatch * float(special.zeta(alpha + 1.0, q_min)) * q_min ** (alpha + 1.0)
    bound += 2.0 * (next_order + cal)
    return EvalResult(acc.value, bound, neval, bound < math.inf)


def wrapped_density(
    spec: LatticeLawSpec,
    t: float,
    x,
    mode: str = "spectral",
    plan: ShellSumPlan = _DEFAULT_PLAN,
) -> EvalResult:
    """Density of the wrapped law at x in [0,1)^d, by either summation."""
    if t <= 0:
        raise ParameterError("wrapped_density needs t > 0")
    xs = _normalize_point(x, spec.d)
    if mode == "spectral":
        return _spectral_sum(spec, t, xs, plan)
    if mode != "lattice":
        raise ParameterError(f"mode must be lattice or spectral, got {mode!r}")
    a = t * spec.symbol.sigma
    if spec.kind == "gaussian" or spec.symbol.alpha == 2.0:
        parts = [_wrapped_gauss_1d(a, x0, plan) for x0 in xs]
        return product_results(parts)
    if spec.d != 1:
        raise CapabilityError("no density evaluator for d > 1 stable laws")
    if spec.symbol.alpha == 1.0:
        return _wrapped_cauchy_1d(a, xs[0])
    return _wrapped_stable_numeric_1d(spec.symbol, t, xs[0], _LATTICE_QUAD)


@dataclass(frozen=True)
class TraceReport:
    t: float
    lattice_value: EvalResult
    spectral_value: EvalResult

    @property
    def defect(self) -> float:
        return abs(self.lattice_value.value - self.spectral_value.value)

    @property
    def combined_bound(self) -> float:
        return self.lattice_value.error_bound + self.spectral_value.error_bound


def trace_defect(
    spec: LatticeLawSpec, t: float, plan: ShellSumPlan = _DEFAULT_PLAN
) -> TraceReport:
    """Wrapped density at the identity against the spectral trace."""
    if not spec.has_density:
        raise CapabilityError("trace_defect needs a density evaluator")
    origin = (0.0,) * spec.d
    lat = wrapped_density(spec, t, origin, "lattice", plan)
    sp = spectral_trace(spec, t, plan)
    return TraceReport(t, lat, sp)


@dataclass(frozen=True)
class PotentialReport:
    alpha: float
    sigma: float
    diverged: bool
    value: EvalResult | None
    reference: float | None

    @property
    def defect(self) -> float | None:
        if self.value is None or self.reference is None:
            return None
        return abs(self.value.value - self.reference)


def potential_identity(
    alpha: float,
    sigma: float,
    quad: QuadratureConfig | None = None,
    kind: str = "stable",
) -> PotentialReport:
    """Term-wise time integral of the centered trace, against 2 zeta(alpha)/sigma.

    Each spectral term integrates exactly: int_0^inf e^{-t sigma n^alpha} dt
    = 1/(sigma n^alpha).  The identity needs alpha > 1; for alpha <= 1 the
    n-sum diverges and only a flag is returned.  kind="gaussian" pins
    (alpha, sigma) = (2, pi), where the reference 2 zeta(2)/pi is pi/3.
    """
    if kind == "gaussian":
        alpha, sigma = 2.0, math.pi
    elif kind != "stable":
        raise ParameterError(f"kind must be stable or gaussian, got {kind!r}")
    if not 0.0 < alpha <= 2.0:
        raise ParameterError("alpha must lie in (0, 2]")
    if sigma <= 0:
        raise ParameterError("sigma must be positive")
    if alpha <= 1.0:
        return PotentialReport(alpha, sigma, True, None, None)

    cutoff = 20_000
    acc = CompensatedSum()
    for n in range(1, cutoff + 1):
        acc.add(float(n) ** (-alpha))
    # Euler-Maclaurin continuation from the cutoff
    nf = float(cutoff)
    tail = nf ** (1.0 - alpha) / (alpha - 1.0) - 0.5 * nf ** (-alpha)
    tail += alpha / 12.0 * nf ** (-alpha - 1.0)
    err = alpha * (alpha + 1.0) * (alpha + 2.0) / 720.0 * nf ** (-alpha - 3.0)
    acc.add(tail)
    value = EvalResult(2.0 * acc.value / sigma, 2.0 * err / sigma, cutoff, True)
    if kind == "gaussian":
        reference = math.pi / 3.0
    else:
        reference = 2.0 * float(special.zeta(alpha, 1.0)) / sigma
    return PotentialReport(alpha, sigma, False, value, reference)
