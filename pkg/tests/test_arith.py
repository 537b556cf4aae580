from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from lmoment import NonFiniteError, PrecisionContext
from lmoment.arith import (
    const_euler_gamma,
    digamma,
    ensure_finite,
    gamma_fn,
    root_of_unity,
    to_complex,
    to_real,
    unit_root_at,
)


def test_context_rejects_tiny_precision():
    with pytest.raises(ValueError):
        PrecisionContext(prec_bits=32)


def test_context_tolerance_shape(ctx96):
    assert ctx96.tolerance(32) == mpf(2) ** (32 - 96)
    assert ctx96.eps == mpf(2) ** (1 - 96)


def test_working_scopes_precision(ctx192):
    before = mp.prec
    with ctx192.working():
        assert mp.prec == 192 + 16
    assert mp.prec == before


def test_ensure_finite_rejects():
    with pytest.raises(NonFiniteError):
        ensure_finite(mpf("inf"))
    with pytest.raises(NonFiniteError):
        ensure_finite(mpc(1, mpf("nan")))
    assert ensure_finite(mpf(3)) == 3


def test_to_real_exact_dyadic(ctx96):
    assert to_real(Fraction(3, 8), ctx96) == mpf("0.375")
    assert to_complex(Fraction(1, 2), ctx96) == mpc("0.5")


def test_unit_root_eighth(ctx96):
    with ctx96.working():
        val = unit_root_at(Fraction(1, 8), ctx96)
        expect = (1 + mpc(0, 1)) / mp.sqrt(2)
        assert abs(val - expect) < ctx96.tolerance(8)


@given(st.integers(min_value=1, max_value=40), st.integers(min_value=-50, max_value=50))
def test_root_of_unity_has_unit_modulus_and_period(q, n):
    ctx = PrecisionContext(prec_bits=96)
    with ctx.working():
        z = root_of_unity(n, q, ctx)
        assert abs(abs(z) - 1) < ctx.tolerance(8)
        assert abs(z - root_of_unity(n + q, q, ctx)) == 0


def test_digamma_half(ctx192):
    with ctx192.working():
        val = digamma(Fraction(1, 2), ctx192)
        expect = -const_euler_gamma(ctx192) - 2 * mp.log(2)
        assert abs(val - expect) < ctx192.tolerance(8)
    with pytest.raises(ValueError):
        digamma(0, ctx192)


def test_gamma_rejects_poles(ctx96):
    with pytest.raises(ValueError):
        gamma_fn(0, ctx96)
    with pytest.raises(ValueError):
        gamma_fn(-3, ctx96)
    with ctx96.working():
        assert abs(gamma_fn(mpf("0.5"), ctx96) - mp.sqrt(mp.pi)) < ctx96.tolerance(8)
