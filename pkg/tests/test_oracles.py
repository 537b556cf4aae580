"""Cross-checks among the independent numerical oracles.

These complement the acceptance suite: smaller cases, exercised at lower
precision, plus the domain guards.  The heavier identities (full quadrature
sweeps, contour coefficients) live in test_acceptance.
"""

import pytest
from fractions import Fraction

from mpmath import mp, mpc, mpf

from lmoment import (
    a_chi_continued,
    a_chi_direct,
    character,
    conjugate,
    eisenstein,
    mellin_check,
    moment_closed,
    moment_quadrature,
    psi_chi,
    psi_coeff,
    psi_coeff_oracle,
    r_chi,
    verify_epm1,
    verify_fund_lemma,
)


def test_moment_quadrature_matches_closed(ctx96):
    chi = character(3, 2)
    for n_ord in (0, 2):
        quad = moment_quadrature(chi, n_ord, ctx=ctx96)
        closed = moment_closed(chi, n_ord, ctx96)
        assert abs(quad.value - closed.value) < mpf("1e-12")
        assert quad.method == "quadrature"


def test_moment_quadrature_guards(ctx96):
    with pytest.raises(ValueError):
        moment_quadrature(character(9, 8), 0, ctx=ctx96)
    with pytest.raises(ValueError):
        moment_quadrature(character(3, 2), -1, ctx=ctx96)


def test_autocorrelation_inversion_symmetry(ctx96):
    # A(v) = A_bar(1/v) / v links the two integral representations
    chi = character(5, 3)
    bar = conjugate(chi)
    with ctx96.working():
        for v in (mpf("0.7"), mpf("1.3")):
            lhs = a_chi_direct(chi, v, ctx96)
            rhs = a_chi_direct(bar, 1 / v, ctx96) / v
            assert abs(lhs - rhs) < mpf("1e-12") * max(1, abs(lhs))


def test_continued_matches_direct_on_the_axis(ctx96):
    chi = character(4, 3)
    with ctx96.working():
        for v in (mpf("0.8"), mpf("1.5")):
            lhs = a_chi_direct(chi, v, ctx96)
            rhs = a_chi_continued(chi, v, ctx96)
            assert abs(lhs - rhs) < mpf("1e-14") * max(1, abs(lhs))


def test_continued_rejects_the_cut(ctx96):
    chi = character(4, 3)
    with pytest.raises(ValueError):
        a_chi_continued(chi, mpc(-1, 0), ctx96)


def test_exponential_transform_at_zero(ctx96):
    # R(0) is half the zeroth moment of the conjugate character
    chi = character(5, 2)
    with ctx96.working():
        lhs = r_chi(chi, mpf(0), ctx96)
        rhs = moment_closed(conjugate(chi), 0, ctx96).value / 2
        assert abs(lhs - rhs) < mpf("1e-14")
        assert abs(lhs.imag) < mpf("1e-14")


def test_continuation_identity_single_point(ctx96):
    chi = character(4, 3)
    res = verify_fund_lemma(chi, [mpc(0, 1)], ctx96)
    assert res < mpf("1e-8")


def test_period_function_components(ctx96):
    # psi is assembled from the Eisenstein values; spot-check the assembly
    chi = character(3, 2)
    z = mpc("0.3", "1.1")
    with ctx96.working():
        direct = eisenstein(chi, z, ctx96) - chi.sign_at_minus_one() / z * eisenstein(
            conjugate(chi), -1 / z, ctx96
        )
        assert abs(psi_chi(chi, z, ctx96) - direct) < mpf("1e-20")


def test_eisenstein_periodicity(ctx96):
    chi = character(5, 3)
    z = mpc("0.2", "0.9")
    with ctx96.working():
        a = eisenstein(chi, z, ctx96)
        b = eisenstein(chi, z + 5, ctx96)
        assert abs(a - b) < mpf("1e-20")


def test_eisenstein_leading_term(ctx96):
    # high in the upper half-plane only n = 1 survives: E ~ e(z/q)/tau(chi)
    from lmoment import gauss_sum

    chi = character(5, 3)
    z = mpc(0, 9)
    with ctx96.working():
        lead = mp.exp(mpc(0, 2) * mp.pi * z / 5) / gauss_sum(chi, ctx96).value
        val = eisenstein(chi, z, ctx96)
        assert abs(val - lead) < abs(lead) * mpf("1e-3")


def test_psi_coeff_oracle_radius_independence(ctx96):
    chi = character(3, 2)
    a = psi_coeff_oracle(chi, 2, radius=Fraction(1, 2), ctx=ctx96)
    b = psi_coeff_oracle(chi, 2, radius=Fraction(1, 4), ctx=ctx96)
    assert abs(a - b) < mpf("1e-10")
    assert abs(a - psi_coeff(chi, 2, ctx96).value) < mpf("1e-10")


def test_psi_coeff_oracle_guards(ctx96):
    chi = character(3, 2)
    with pytest.raises(ValueError):
        psi_coeff_oracle(chi, 2, radius=Fraction(2, 3), ctx=ctx96)
    with pytest.raises(ValueError):
        psi_coeff_oracle(chi, -1, ctx=ctx96)


def test_mellin_identity_one_point(ctx96):
    res = mellin_check(character(4, 3), mpf(1) / 2, ctx96)
    assert res < mpf("1e-5")


def test_mellin_rejects_outside_strip(ctx96):
    with pytest.raises(ValueError):
        mellin_check(character(4, 3), mpf("1.5"), ctx96)


def test_cusp_expansion_guards(ctx96):
    chi = character(3, 2)
    with pytest.raises(ValueError):
        verify_epm1(chi, [mpf("0.5")], 2, ctx96)  # t too large for the asymptotic window
