"""Exact rational combinatorics: Bernoulli numbers and polynomials, generalized
Bernoulli numbers attached to a character, and Stirling numbers (classical and
non-central with shift -1/2).

Everything except gen_bernoulli stays in Fraction arithmetic; identities on
these objects are tested as exact equalities, no tolerances.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import comb

from mpmath import mpc, mpf

from .arith import PrecisionContext, to_real
from .characters import DirichletCharacter, char_value

_bernoulli_cache: list[Fraction] = [Fraction(1)]


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2, via the defining recurrence sum C(n+1,k) B_k = 0."""
    if n < 0:
        raise ValueError(f"bernoulli_number needs n >= 0, got {n}")
    while len(_bernoulli_cache) <= n:
        m = len(_bernoulli_cache)
        if m > 2 and m % 2 == 1:
            _bernoulli_cache.append(Fraction(0))
            continue
        acc = sum(Fraction(comb(m + 1, k)) * _bernoulli_cache[k] for k in range(m))
        _bernoulli_cache.append(-acc / (m + 1))
    return _bernoulli_cache[n]


@lru_cache(maxsize=None)
def _bernoulli_poly_coeffs(n: int) -> tuple[Fraction, ...]:
    """Coefficients of B_n(x) by ascending power of x."""
    return tuple(Fraction(comb(n, k)) * bernoulli_number(n - k) for k in range(n + 1))


@lru_cache(maxsize=None)
def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    if n < 0:
        raise ValueError(f"bernoulli_poly needs n >= 0, got {n}")
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(_bernoulli_poly_coeffs(n)):
        acc = acc * x + c
    return acc


def gen_bernoulli(n: int, chi: DirichletCharacter, ctx: PrecisionContext) -> mpc:
    """Generalized Bernoulli number B_{n,chi} = q^(n-1) * sum_a chi(a) B_n(a/q).

    The sum runs over a = 1..q; terms with gcd(a, q) > 1 vanish through chi.
    """
    if n < 0:
        raise ValueError(f"gen_bernoulli needs n >= 0, got {n}")
    q = chi.label.q
    with ctx.working():
        acc = mpc(0)
        for a in range(1, q + 1):
            if chi.value_exponent(a) is None:
                continue
            acc += char_value(chi, a, ctx) * to_real(bernoulli_poly(n, Fraction(a, q)), ctx)
        return acc * mpf(q) ** (n - 1)


_stirling2_rows: list[list[int]] = [[1]]


def stirling2(n: int, k: int) -> int:
    """Classical Stirling numbers of the second kind S(n, k)."""
    if k < 0 or n < 0:
        raise ValueError("stirling2 needs n, k >= 0")
    if k > n:
        raise ValueError(f"stirling2 needs k <= n, got ({n}, {k})")
    while len(_stirling2_rows) <= n:
        m = len(_stirling2_rows)
        prev = _stirling2_rows[m - 1]
        row = [0] * (m + 1)
        for j in range(1, m + 1):
            row[j] = j * prev[j] + prev[j - 1] if j < m else prev[j - 1]
        _stirling2_rows.append(row)
    return _stirling2_rows[n][k]


_snc_cache: dict[tuple[int, int], Fraction] = {}


def stirling_noncentral_half(n: int, k: int) -> Fraction:
    """Non-central Stirling numbers S_{-1/2}(n, k).

    Recurrence S(n+1, k) = S(n, k-1) + (k + 1/2) S(n, k) with S(n, 0) = (1/2)^n
    and S(0, k) = 0 for k >= 1.  Denominators always divide 2^n; asserted below
    as a cheap recurrence check.
    """
    if n < 0 or k < 0:
        raise ValueError("stirling_noncentral_half needs n, k >= 0")
    if k > n:
        return Fraction(0)
    if k == 0:
        return Fraction(1, 2**n)
    got = _snc_cache.get((n, k))
    if got is None:
        got = stirling_noncentral_half(n - 1, k - 1) + (k + Fraction(1, 2)) * stirling_noncentral_half(n - 1, k)
        assert (1 << n) % got.denominator == 0
        _snc_cache[(n, k)] = got
    return got


@lru_cache(maxsize=None)
def bernoulli_product_classes(q: int, k: int) -> dict[int, Fraction]:
    """Grouped Bernoulli products: class c -> sum of B_k(a/q) B_k(b/q) over
    pairs of coprime residues with ab = c mod q.

    The double sums in the moment and period-coefficient formulas only see the
    pair (a, b) through ab mod q, so grouping turns a phi(q)^2 complex sum into
    a phi(q) one.  Callers must not mutate the returned dict.
    """
    from math import gcd

    units = [a for a in range(1, q + 1) if gcd(a, q) == 1]
    vals = {a: bernoulli_poly(k, Fraction(a, q)) for a in units}
    out: dict[int, Fraction] = {a % q: Fraction(0) for a in units}
    for a in units:
        for b in units:
            out[(a * b) % q] += vals[a] * vals[b]
    return out
