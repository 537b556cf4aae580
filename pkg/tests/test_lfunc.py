from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from lmoment import (
    PrecisionContext,
    character,
    completed_l,
    conjugate,
    f_chi,
    funceq_residual,
    hurwitz_zeta,
    l_value,
    q_chi,
    switch_point,
)
from lmoment.characters import char_value


def test_hurwitz_matches_mpmath(ctx128):
    with ctx128.working():
        cases = [
            (mpc(2, 0), Fraction(1, 3)),
            (mpc(3, 0), Fraction(2, 5)),
            (mpc("0.5", "4.0"), Fraction(1, 4)),
            (mpc("0.5", "-11.0"), Fraction(3, 7)),
            (mpc("1.5", "0.25"), Fraction(1, 2)),
        ]
        for s, a in cases:
            ours = hurwitz_zeta(s, a, ctx128)
            ref = mp.zeta(s, mpf(a.numerator) / a.denominator)
            assert abs(ours - ref) < ctx128.tolerance(16) * max(1, abs(ref)), f"s={s}, a={a}"


def test_hurwitz_conjugation_is_bit_exact(ctx96):
    with ctx96.working():
        s = mpc("0.5", "3.25")
        a = Fraction(2, 7)
        up = hurwitz_zeta(s, a, ctx96)
        down = hurwitz_zeta(mp.conj(s), a, ctx96)
        # the lower-half evaluation is exactly the conjugate of the cached
        # upper-half value, both rounded at the same ambient precision
        assert down == mp.conj(up)


def test_l_value_classical_anchors(ctx192):
    chi4 = character(4, 3)
    chi3 = character(3, 2)
    with ctx192.working():
        tol = ctx192.tolerance(24)
        assert abs(l_value(1, chi4, ctx192) - mp.pi / 4) < tol
        assert abs(l_value(2, chi4, ctx192) - mp.catalan) < tol
        assert abs(l_value(1, chi3, ctx192) - mp.pi / (3 * mp.sqrt(3))) < tol


def test_l_value_matches_period_blocks(ctx96):
    # absolutely convergent once the series is grouped into complete periods
    chi = character(5, 3)
    s = mpc(3, 0)
    with ctx96.working():
        def block(k):
            return sum(char_value(chi, r, ctx96) / mpc(5 * k + r) ** s for r in range(1, 6))

        ref = mp.nsum(block, [0, mp.inf])
        assert abs(l_value(s, chi, ctx96) - ref) < mpf("1e-15")


def test_l_value_conjugate_symmetry(ctx96):
    chi = character(7, 3)
    with ctx96.working():
        s = mpc("0.5", "2.125")
        lhs = l_value(s, chi, ctx96)
        rhs = mp.conj(l_value(mp.conj(s), conjugate(chi), ctx96))
        # roots of unity for chi and conj(chi) are evaluated at different
        # exact angles, so agreement is to rounding, not bit-for-bit
        assert abs(lhs - rhs) < ctx96.tolerance(8) * max(1, abs(lhs))


def test_q_chi_positive_on_critical_line(ctx96):
    # Gamma(s)L(s,chi)Gamma(1-s)L(1-s,chibar) at s = 1/2 + it collapses to
    # pi |L|^2 / cosh(pi t), so it must come out real and positive
    chi = character(5, 2)
    with ctx96.working():
        for t in (mpf("0.5"), mpf(2), mpf("-3.25")):
            val = q_chi(mpc(mpf("0.5"), t), chi, ctx96)
            assert val.real > 0
            assert abs(val.imag) < ctx96.tolerance(24) * val.real
            weight = mp.pi * abs(l_value(mpc(mpf("0.5"), t), chi, ctx96)) ** 2 / mp.cosh(mp.pi * t)
            assert abs(val.real - weight) < ctx96.tolerance(24) * weight


def test_f_chi_matches_partial_sum(ctx96):
    chi = character(5, 3)
    with ctx96.working():
        for x in (mpf(2), mpf("3.5"), mpf(6)):
            direct = sum(char_value(chi, n, ctx96) * mp.exp(-n * x) for n in range(1, 200))
            assert abs(f_chi(chi, x, ctx96) - direct) < ctx96.tolerance(16)


def test_f_chi_continuous_at_switch(ctx128):
    for q, n in ((3, 2), (5, 3), (8, 5)):
        chi = character(q, n)
        cut = switch_point(q)
        with ctx128.working():
            x0 = mpf(cut.numerator) / cut.denominator
            eps = mpf(2) ** (-40)
            below = f_chi(chi, x0 - eps, ctx128)
            above = f_chi(chi, x0 + eps, ctx128)
            assert abs(below - above) < mpf(2) ** (-35)


def test_f_chi_principal_pole(ctx96):
    chi0 = character(5, 1)
    with ctx96.working():
        for x in (mpf("1e-4"), mpf("1e-5")):
            val = f_chi(chi0, x, ctx96)
            assert abs(x * val - Fraction(4, 5)) < x * 10


@given(
    st.fractions(min_value=Fraction(1, 5), max_value=Fraction(4, 5), max_denominator=64),
    st.fractions(min_value=Fraction(-5), max_value=Fraction(5), max_denominator=64),
)
def test_reflection_residual_is_tiny(sigma, t):
    ctx = PrecisionContext(prec_bits=96)
    chi = character(5, 3)
    res = funceq_residual(chi, mpc(mpf(sigma.numerator) / sigma.denominator, mpf(t.numerator) / t.denominator), ctx)
    assert res < mpf(10) ** (-0.25 * ctx.prec_bits)


def test_completed_l_requires_primitive(ctx96):
    with pytest.raises(ValueError):
        completed_l(character(9, 8), mpc("0.5"), ctx96)
