"""Valuations, norms, fractional parts, and additive characters on Q_p."""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from trace_lab.core import ParameterError
from trace_lab.padic import (
    char_qp,
    frac_part,
    padic_norm,
    prime_support,
    product_formula_value,
    valuation,
)

primes = st.sampled_from([2, 3, 5, 7, 11])
rationals = st.fractions(
    min_value=Fraction(-500), max_value=Fraction(500), max_denominator=500
)
nonzero = rationals.filter(lambda q: q != 0)


def test_valuation_basics():
    assert valuation(Fraction(12), 2) == 2
    assert valuation(Fraction(12), 3) == 1
    assert valuation(Fraction(5, 8), 2) == -3
    assert valuation(Fraction(0), 7) == math.inf
    with pytest.raises(ParameterError):
        valuation(Fraction(1), 4)


@given(nonzero, nonzero, primes)
def test_norm_multiplicative(a, b, p):
    na = padic_norm(a, p).as_fraction()
    nb = padic_norm(b, p).as_fraction()
    assert padic_norm(a * b, p).as_fraction() == na * nb


@given(rationals, rationals, primes)
def test_ultrametric(a, b, p):
    na = padic_norm(a, p).as_fraction()
    nb = padic_norm(b, p).as_fraction()
    ns = padic_norm(a + b, p).as_fraction()
    assert ns <= max(na, nb)
    if na != nb:
        assert ns == max(na, nb)


@given(nonzero)
def test_product_formula_exact(q):
    assert product_formula_value(q) == 1


@given(rationals, primes)
def test_frac_part_characterizes(q, p):
    f = frac_part(q, p)
    # f is a p-power-denominator representative in [0, 1)
    assert 0 <= f < 1
    den = f.denominator
    while den % p == 0:
        den //= p
    assert den == 1
    # q - f lies in Z_p
    assert valuation(q - f, p) >= 0


@given(rationals, rationals, primes)
def test_frac_part_additive_mod_1(a, b, p):
    assert (frac_part(a + b, p) - frac_part(a, p) - frac_part(b, p)) % 1 == 0


@given(rationals, rationals, rationals, primes)
def test_char_multiplicative_in_x(y, x1, x2, p):
    lhs = char_qp(y, x1 + x2, p)
    rhs = char_qp(y, x1, p) * char_qp(y, x2, p)
    assert abs(lhs - rhs) < 1e-12


@given(rationals, rationals, primes)
def test_char_unit_modulus(y, x, p):
    assert abs(abs(char_qp(y, x, p)) - 1.0) < 1e-14


@given(rationals.filter(lambda q: valuation(q, 3) >= 0), rationals, st.just(3))
def test_char_trivial_on_zp_times_zp(y, x, p):
    # y in Z_p and x in Z_p: the pairing is 1
    if valuation(x, p) >= 0:
        assert abs(char_qp(y, x, p) - 1.0) < 1e-14


def test_char_value_example():
    # [1/2 * 1]_2 = 1/2, so the character is e^{pi i} = -1
    assert abs(char_qp(Fraction(1), Fraction(1, 2), 2) - (-1.0)) < 1e-15
    assert abs(char_qp(Fraction(1, 4), Fraction(1), 2) - cmath.exp(2j * math.pi / 4)) < 1e-15


def test_prime_support():
    assert prime_support(Fraction(12, 35)) == (2, 3, 5, 7)
    assert prime_support(Fraction(1)) == ()
    assert prime_support(Fraction(0)) == ()
