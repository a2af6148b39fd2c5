"""Shared plumbing: evaluation results, truncation plans, compensated sums.

Every series evaluator in the package reports its value together with a
truncation-error bound, the number of terms consumed, and a convergence
flag, so that identity checks can compare defects against declared bounds
instead of bare tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable


class TraceLabError(Exception):
    """Base class for errors raised by this package."""


class ParameterError(TraceLabError):
    """A precondition on the inputs is violated (CLI exit code 2)."""


class CapabilityError(TraceLabError):
    """The requested evaluation mode does not exist for these inputs."""


@dataclass(frozen=True)
class EvalResult:
    """A numerical value with a truncation-error bound and diagnostics."""

    value: float
    error_bound: float
    terms_used: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "error_bound": self.error_bound,
            "terms_used": self.terms_used,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class ShellSumPlan:
    """Truncation window and tail policy for shell and lattice series.

    n_min/n_max bound the norm exponents (or lattice radii) visited; the
    accumulation stops early once a rigorous tail bound falls below
    tail_tolerance.  For monotone integrands the reported error bound
    dominates the true omitted tail.
    """

    n_min: int = -60
    n_max: int = 60
    tail_tolerance: float = 1e-12
    max_terms: int = 200_000

    def __post_init__(self):
        if self.n_min > self.n_max:
            raise ParameterError("ShellSumPlan requires n_min <= n_max")
        if self.tail_tolerance <= 0:
            raise ParameterError("tail_tolerance must be positive")
        if self.max_terms < 1:
            raise ParameterError("max_terms must be >= 1")


@dataclass(frozen=True)
class QuadratureConfig:
    """Absolute tolerance and panel policy for the quadrature routines.

    envelope_cutoff controls where oscillatory inversion integrals are cut:
    the finite panel ends once the integrand envelope drops below it, and
    the remainder is covered by an explicit envelope tail bound.
    """

    abs_tol: float = 1e-8
    panel_limit: int = 200
    envelope_cutoff: float = 1e-16

    def __post_init__(self):
        if self.abs_tol <= 0 or self.envelope_cutoff <= 0:
            raise ParameterError("quadrature tolerances must be positive")
        if self.panel_limit < 10:
            raise ParameterError("panel_limit must be >= 10")


class CompensatedSum:
    """Neumaier compensated accumulator with a fixed reduction order.

    Series are accumulated term by term in a fixed index order so results
    are bit-reproducible run to run.
    """

    __slots__ = ("_s", "_c")

    def __init__(self):
        self._s = 0.0
        self._c = 0.0

    def add(self, x: float) -> None:
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    @property
    def value(self) -> float:
        return self._s + self._c


def comp_sum(terms: Iterable[float]) -> float:
    acc = CompensatedSum()
    for x in terms:
        acc.add(x)
    return acc.value


def product_results(parts: Iterable[EvalResult]) -> EvalResult:
    """Product of component results with first-order bound propagation."""
    parts = list(parts)
    value = 1.0
    for r in parts:
        value *= r.value
    bound = 0.0
    for i, r in enumerate(parts):
        other = 1.0
        for j, s in enumerate(parts):
            if j != i:
                other *= abs(s.value) + s.error_bound
        bound += r.error_bound * other
    terms = sum(r.terms_used for r in parts)
    return EvalResult(value, bound, terms, all(r.converged for r in parts))


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> int:
    if not isinstance(p, int) or isinstance(p, bool) or not is_prime(p):
        raise ParameterError(f"p must be a prime integer, got {p!r}")
    return p


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse the 'a/b' (or 'a') wire format used by the CLI and reports."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"not a rational 'a/b' string: {text!r}") from exc


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"
