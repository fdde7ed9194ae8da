from __future__ import annotations

import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from deltac.errors import InvalidArgumentError, UnsupportedIntegrandError
from deltac.numerics import (QuadratureSpec, erf_complex, erfcx_complex, integrate_finite,
                             integrate_semi_infinite_oscillatory)

mpmath.mp.dps = 40


def erf_taylor(w: complex) -> complex:
    """Maclaurin series of erf summed at 40 digits."""
    w = mpmath.mpc(w)
    total, term, n = mpmath.mpc(0), w, 0
    while True:
        piece = term / (2 * n + 1)
        total += piece
        if abs(piece) < mpmath.mpf(10) ** -35 * max(1, abs(total)):
            break
        n += 1
        term *= -w * w / n
    return complex(2 / mpmath.sqrt(mpmath.pi) * total)


@pytest.mark.parametrize("w", [0.5 + 0.5j, 1 - 2j, -0.3 + 1.7j, 2.5 + 0.1j, 0.01j, 3 + 3j])
def test_erf_against_taylor_oracle(w):
    res = erf_complex(w)
    ref = erf_taylor(w)
    assert abs(res.value - ref) <= 1e-13 * max(1, abs(ref))
    assert res.est_abs_error >= 0


def test_erf_real_axis_matches_math():
    for x in (-2.0, -0.1, 0.0, 0.7, 3.3):
        assert erf_complex(x).value == pytest.approx(math.erf(x), abs=1e-15)


@settings(max_examples=60, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5))
def test_erf_symmetries(x, y):
    w = complex(x, y)
    v = erf_complex(w).value
    assert abs(erf_complex(w.conjugate()).value - v.conjugate()) <= 1e-12 * max(1, abs(v))
    assert abs(erf_complex(-w).value + v) <= 1e-12 * max(1, abs(v))


def test_erfcx_matches_mpmath():
    for w in (0.5 + 0.5j, 4 + 1j, 10 - 3j, 0.2 + 8j):
        ref = complex(mpmath.exp(mpmath.mpc(w) ** 2) * mpmath.erfc(mpmath.mpc(w)))
        assert abs(erfcx_complex(w) - ref) <= 1e-13 * abs(ref)


def test_erf_rejects_non_finite():
    with pytest.raises(InvalidArgumentError):
        erf_complex(complex(float("nan"), 0))


def test_erf_overflow_is_reported():
    with pytest.raises(OverflowError):
        erf_complex(1j * 40)


def test_spec_validation_and_acceptance():
    with pytest.raises(InvalidArgumentError):
        QuadratureSpec(abs_tol=-1)
    spec = QuadratureSpec().with_tolerance(1e-6)
    assert spec.abs_tol == spec.rel_tol == 1e-6
    assert spec.accepts(10.0, 5e-6)
    assert not spec.accepts(1e-3, 2e-6)


def test_integrate_finite_complex_and_breakpoints():
    res = integrate_finite(lambda x: np.exp(1j * x) * abs(x), -2, 3, points=[0.0])
    ref = complex(mpmath.quad(lambda x: mpmath.exp(1j * x) * abs(x), [-2, 0, 3]))
    assert abs(res.value - ref) < 1e-12
    assert res.converged


@pytest.mark.parametrize("r", [0.3, 1.0, 2.7])
def test_lorentzian_transform(r):
    res = integrate_semi_infinite_oscillatory(lambda k: 1 / (k * k + 1), r)
    assert res.value == pytest.approx(math.pi * math.exp(-r), abs=1e-10)
    assert res.delta_coeff == 0


def test_odd_integrand_gives_imaginary_transform():
    res = integrate_semi_infinite_oscillatory(lambda k: k / (k * k + 1), 1.0, parity="odd", tail_limit=0.0)
    assert res.value == pytest.approx(1j * math.pi / math.e, abs=1e-10)
    at_zero = integrate_semi_infinite_oscillatory(lambda k: k / (k * k + 1), 0.0, parity="odd", tail_limit=0.0)
    assert at_zero.value == 0


def test_constant_tail_becomes_delta():
    res = integrate_semi_infinite_oscillatory(lambda k: k * k / (k * k + 1), 1.0, parity="even")
    assert res.delta_coeff == pytest.approx(2 * math.pi)
    assert res.value == pytest.approx(-math.pi / math.e, abs=1e-10)


def test_against_mpmath_quadosc():
    g = lambda k: 1 / ((k * k + 1) * math.sqrt(k * k + 4))
    r = 1.3
    res = integrate_semi_infinite_oscillatory(g, r)
    ref = 2 * mpmath.quadosc(lambda k: mpmath.cos(r * k) / ((k * k + 1) * mpmath.sqrt(k * k + 4)),
                             [0, mpmath.inf], omega=r)
    assert res.value == pytest.approx(float(ref), abs=1e-11)


@pytest.mark.parametrize("g", [lambda k: k, lambda k: math.sin(k)])
def test_non_decaying_integrands_are_rejected(g):
    with pytest.raises(UnsupportedIntegrandError):
        integrate_semi_infinite_oscillatory(g, 1.0)
