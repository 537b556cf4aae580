from fractions import Fraction
from math import comb, gcd

import pytest
from hypothesis import given, strategies as st
from mpmath import mpc, mpf

from lmoment import (
    bernoulli_number,
    bernoulli_poly,
    bernoulli_product_classes,
    character,
    gen_bernoulli,
    stirling2,
    stirling_noncentral_half,
)


def test_bernoulli_anchors():
    known = {
        0: Fraction(1),
        1: Fraction(-1, 2),
        2: Fraction(1, 6),
        4: Fraction(-1, 30),
        8: Fraction(-1, 30),
        12: Fraction(-691, 2730),
    }
    for n, val in known.items():
        assert bernoulli_number(n) == val
    for n in (3, 5, 7, 9, 11):
        assert bernoulli_number(n) == 0


@given(st.integers(min_value=0, max_value=30), st.fractions(max_denominator=20))
def test_bernoulli_poly_reflection(n, x):
    assert bernoulli_poly(n, 1 - x) == (-1) ** n * bernoulli_poly(n, x)


@given(st.integers(min_value=1, max_value=30), st.fractions(max_denominator=12))
def test_bernoulli_poly_difference(n, x):
    # B_n(x+1) - B_n(x) = n x^(n-1), the defining telescoping property
    assert bernoulli_poly(n, x + 1) - bernoulli_poly(n, x) == n * x ** (n - 1)


def test_stirling2_anchors():
    assert stirling2(0, 0) == 1
    assert stirling2(4, 2) == 7
    assert stirling2(5, 3) == 25
    assert stirling2(9, 3) == 3025
    with pytest.raises(ValueError):
        stirling2(2, 3)


@given(st.integers(min_value=0, max_value=12))
def test_stirling2_row_sums_are_bell(n):
    bell = [1]
    for _ in range(n):
        nxt = sum(comb(len(bell) - 1, k) * bell[k] for k in range(len(bell)))
        bell.append(nxt)
    assert sum(stirling2(n, k) for k in range(n + 1)) == bell[n]


def test_noncentral_half_recurrence_and_base():
    assert stirling_noncentral_half(0, 0) == 1
    assert stirling_noncentral_half(3, 0) == Fraction(1, 8)
    for n in range(1, 15):
        for k in range(1, n + 1):
            lhs = stirling_noncentral_half(n, k)
            rhs = stirling_noncentral_half(n - 1, k - 1) + (k + Fraction(1, 2)) * stirling_noncentral_half(
                n - 1, k
            )
            assert lhs == rhs
    assert stirling_noncentral_half(4, 7) == 0


def test_gen_bernoulli_odd_quadratic(ctx96):
    # B_{1,chi} = (1/q) sum_a a chi(a); for the quadratic character mod 4 this is -1/2
    chi4 = character(4, 3)
    val = gen_bernoulli(1, chi4, ctx96)
    assert abs(val - mpc(-0.5)) < ctx96.tolerance(8)
    chi3 = character(3, 2)
    with ctx96.working():
        assert abs(gen_bernoulli(1, chi3, ctx96) + mpf(1) / 3) < ctx96.tolerance(8)


def test_gen_bernoulli_parity_vanishing(ctx96):
    # B_{n,chi} = 0 when n and chi have opposite parity (n >= 2)
    chi4 = character(4, 3)  # odd
    chi5 = character(5, 4)  # even
    assert abs(gen_bernoulli(2, chi4, ctx96)) < ctx96.tolerance(8)
    assert abs(gen_bernoulli(3, chi5, ctx96)) < ctx96.tolerance(8)


def test_product_classes_match_direct_sum():
    for q in (3, 4, 5, 8):
        for k in (1, 2, 3):
            classes = bernoulli_product_classes(q, k)
            units = [a for a in range(1, q + 1) if gcd(a, q) == 1]
            direct = {c: Fraction(0) for c in classes}
            for a in units:
                for b in units:
                    direct[(a * b) % q] += bernoulli_poly(k, Fraction(a, q)) * bernoulli_poly(
                        k, Fraction(b, q)
                    )
            assert classes == direct
            assert sum(classes.values()) == sum(bernoulli_poly(k, Fraction(a, q)) for a in units) ** 2
