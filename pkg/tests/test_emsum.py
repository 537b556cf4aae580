from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpf

from lmoment import (
    CAnalyticDescriptor,
    PrecisionContext,
    character,
    desc_exp,
    desc_fchi,
    desc_fermi,
    desc_gauss,
    em_direct_sum,
    em_eval,
    em_expand,
    exp_shift_sum,
    shift_constant,
)


def test_shift_constant_values(ctx192):
    with ctx192.working():
        assert abs(shift_constant(Fraction(1, 2), ctx192) - 2 * mp.log(2)) < ctx192.tolerance(8)
        # digamma(1) = -gamma, so K degenerates to 0 at the integer edge
        assert abs(shift_constant(1, ctx192)) < ctx192.tolerance(8)
        # K(1/4) = gamma + ... is available in closed form: -gamma - psi(1/4)
        expect = mp.pi / 2 + 3 * mp.log(2)
        assert abs(shift_constant(Fraction(1, 4), ctx192) - expect) < ctx192.tolerance(8)


def test_stock_descriptors_validate(ctx96):
    chi = character(3, 2)
    for desc in (desc_exp(ctx96), desc_gauss(ctx96), desc_fermi(ctx96), desc_fchi(chi, ctx96)):
        desc.validate(ctx96)


def test_validate_catches_wrong_taylor_data(ctx96):
    bad = CAnalyticDescriptor(
        evaluator=lambda x: mp.exp(-x),
        laurent=(Fraction(0), Fraction(1), Fraction(2), Fraction(1, 2)),
        tail_integral=1,
    )
    with pytest.raises(ValueError):
        bad.validate(ctx96)


def test_em_expand_argument_checks(ctx96):
    desc = desc_exp(ctx96)
    with pytest.raises(ValueError):
        em_expand(desc, Fraction(3, 2), 4, ctx96)
    with pytest.raises(ValueError):
        em_expand(desc, Fraction(1, 2), 20, ctx96)  # more coefficients than the descriptor carries
    with pytest.raises(ValueError):
        em_eval(em_expand(desc, Fraction(1, 2), 4, ctx96), 0)


def test_direct_sum_matches_bruteforce(ctx96):
    desc = desc_gauss(ctx96)
    alpha = Fraction(1, 3)
    h = mpf("0.25")
    with ctx96.working():
        brute = sum(desc.evaluator((m + mpf(1) / 3) * h) for m in range(4000))
        ours = em_direct_sum(desc, alpha, h, mpf("1e-25"), ctx96)
        assert abs(ours - brute) < mpf("1e-22")


@given(st.fractions(min_value=Fraction(1, 10), max_value=Fraction(9, 10), max_denominator=24))
def test_expansion_linear_in_descriptor(alpha):
    ctx = PrecisionContext(prec_bits=96)
    lam = Fraction(3, 2)
    base = desc_exp(ctx)
    scaled = CAnalyticDescriptor(
        evaluator=lambda x: lam.numerator * mp.exp(-x) / lam.denominator,
        laurent=tuple(lam * c for c in base.laurent),
        tail_integral=Fraction(3, 2),
    )
    e1 = em_expand(base, alpha, 3, ctx)
    e2 = em_expand(scaled, alpha, 3, ctx)
    with ctx.working():
        for h in (mpf("0.1"), mpf("0.02")):
            lhs = em_eval(e2, h)
            rhs = mpf(3) / 2 * em_eval(e1, h)
            assert abs(lhs - rhs) < ctx.tolerance(16) * max(1, abs(rhs))


def test_exp_shift_sum_residual_order(ctx128):
    # the model misses the truncated sum by O(w^{N+1})
    alpha = Fraction(2, 5)
    order = 3
    desc = CAnalyticDescriptor(
        evaluator=lambda x: mp.exp(-x) / x,
        laurent=(Fraction(1),)
        + tuple(Fraction((-1) ** (j + 1), _fact(j + 1)) for j in range(order + 3)),
    )
    with ctx128.working():
        tol = mpf("1e-25")
        gaps = []
        for w in (mpf("0.1"), mpf("0.05")):
            direct = em_direct_sum(desc, alpha, w, tol, ctx128)
            gaps.append(abs(direct - exp_shift_sum(alpha, w, order, ctx128)))
        ratio = gaps[0] / gaps[1]
        assert 8 <= ratio <= 32, f"remainder decays at the wrong rate: {ratio}"


def _fact(k: int) -> int:
    out = 1
    for j in range(2, k + 1):
        out *= j
    return out


def test_fchi_descriptor_tail_is_l_value(ctx96):
    from lmoment import l_value

    chi = character(5, 2)
    desc = desc_fchi(chi, ctx96)
    with ctx96.working():
        expect = l_value(1, chi, ctx96) / (2 * mp.pi)
        assert abs(desc.tail_integral - expect) < ctx96.tolerance(16)


def test_expansion_precision_tracks_context():
    lo = PrecisionContext(prec_bits=96)
    hi = PrecisionContext(prec_bits=160)
    alpha = Fraction(1, 6)
    with mp.workprec(200):
        a = em_eval(em_expand(desc_fermi(lo), alpha, 2, lo), mpf("0.125"))
        b = em_eval(em_expand(desc_fermi(hi), alpha, 2, hi), mpf("0.125"))
        assert abs(a - b) < mpf(2) ** (-90)
