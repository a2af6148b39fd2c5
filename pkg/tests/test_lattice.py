"""Wrapped densities on the torus, spectral traces, and the potential identity."""
from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trace_lab.core import CapabilityError, ParameterError
from trace_lab.lattice import (
    gaussian_law,
    potential_identity,
    spectral_trace,
    stable_law,
    trace_defect,
    wrapped_density,
)

COTH_HALF = 2.16395341373865285
A15_TRACE = 1.86574570032432878  # wrapped alpha=1.5 trace at t=1, frozen oracle


def test_wrapped_gaussian_frozen_value():
    for mode in ("spectral", "lattice"):
        r = wrapped_density(gaussian_law(), 1.0, 0.5, mode)
        assert r.value == pytest.approx(0.913579138156116821, abs=1e-14), mode
        assert r.converged


def test_wrapped_cauchy_closed_point():
    # sum_n e^{-|n|} e^{2 pi i n/4} telescopes to (1 - e^{-2})/(1 + e^{-2})
    r = wrapped_density(stable_law(1.0, 1.0), 1.0, 0.25, "spectral")
    assert r.value == pytest.approx(math.tanh(1.0), abs=5e-13)


@given(
    st.sampled_from(["gaussian", "cauchy", "a15"]),
    st.floats(min_value=0.3, max_value=3.0),
    st.floats(min_value=0.0, max_value=1.0, exclude_max=True),
)
@settings(max_examples=30, deadline=None)
def test_wrapped_modes_agree(kind, t, x):
    spec = {"gaussian": gaussian_law(), "cauchy": stable_law(1.0, 1.0), "a15": stable_law(1.5, 1.0)}[
        kind
    ]
    a = wrapped_density(spec, t, x, "spectral")
    b = wrapped_density(spec, t, x, "lattice")
    assert abs(a.value - b.value) <= a.error_bound + b.error_bound + 1e-10


def test_wrapped_density_product_structure():
    # d = 2 factorizes over coordinates
    two = wrapped_density(gaussian_law(2), 1.0, (0.5, 0.25), "spectral")
    one_a = wrapped_density(gaussian_law(), 1.0, 0.5, "spectral")
    one_b = wrapped_density(gaussian_law(), 1.0, 0.25, "spectral")
    assert two.value == pytest.approx(one_a.value * one_b.value, rel=1e-14)
    lat = wrapped_density(gaussian_law(2), 1.0, (0.5, 0.25), "lattice")
    assert lat.value == pytest.approx(two.value, rel=1e-13)


def test_wrapped_rejects_bad_input():
    with pytest.raises(ParameterError):
        wrapped_density(gaussian_law(), 0.0, 0.5)
    with pytest.raises(CapabilityError):
        wrapped_density(stable_law(1.5, 1.0, d=2), 1.0, (0.1, 0.2), "lattice")


def test_spectral_trace_gaussian_is_theta():
    from trace_lab.real_stable import theta

    for t in (0.25, 1.0, 4.0):
        tr = spectral_trace(gaussian_law(), t)
        assert tr.value == pytest.approx(theta(t).value, abs=1e-14)


def test_trace_identity_gaussian():
    for t in (0.1, 0.5, 1.0, 4.0):
        rep = trace_defect(gaussian_law(), t)
        assert rep.defect <= 1e-10
        assert rep.defect <= rep.combined_bound + 1e-13


def test_trace_identity_cauchy_closed_value():
    rep = trace_defect(stable_law(1.0, 1.0), 1.0)
    # both sides are coth(1/2)
    assert rep.lattice_value.value == pytest.approx(COTH_HALF, abs=1e-10)
    assert rep.spectral_value.value == pytest.approx(COTH_HALF, abs=1e-10)
    assert rep.defect <= 1e-8


def test_trace_identity_alpha_15():
    rep = trace_defect(stable_law(1.5, 1.0), 1.0)
    assert rep.spectral_value.value == pytest.approx(A15_TRACE, abs=1e-12)
    assert rep.lattice_value.value == pytest.approx(A15_TRACE, abs=1e-6)
    assert rep.defect <= 1e-6


def test_potential_identity_values():
    rep = potential_identity(1.5, 1.0)
    assert not rep.diverged
    assert rep.reference == pytest.approx(5.22475069737097669, abs=1e-12)
    assert rep.defect <= 1e-3
    gauss = potential_identity(2.0, math.pi, kind="gaussian")
    assert gauss.reference == pytest.approx(math.pi / 3.0, abs=1e-15)
    assert gauss.defect <= 1e-6


def test_potential_identity_divergence_boundary():
    assert potential_identity(0.8, 1.0).diverged
    assert potential_identity(1.0, 1.0).diverged
    assert not potential_identity(1.01, 1.0).diverged
    with pytest.raises(ParameterError):
        potential_identity(2.5, 1.0)


def test_heat_equation_finite_difference_order():
    # d_t f = (1/4pi) d_x^2 f for the self-dual gaussian and its wrapping
    def residual(f, t, x, h):
        dt = (f(t + h, x) - f(t - h, x)) / (2.0 * h)
        dxx = (f(t, x + h) - 2.0 * f(t, x) + f(t, x - h)) / (h * h)
        return abs(dt - dxx / (4.0 * math.pi))

    from trace_lab.real_stable import gaussian_density

    wrap = lambda t, x: wrapped_density(gaussian_law(), t, x, "spectral").value
    for f in (gaussian_density, wrap):
        r1 = residual(f, 0.8, 0.35, 1e-2)
        r2 = residual(f, 0.8, 0.35, 5e-3)
        assert math.log2(r1 / r2) >= 1.8
