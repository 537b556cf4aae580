"""Numerical evaluation of f_chi, the Hurwitz zeta function, Dirichlet L-values,
and the completed product Q_chi on and near the critical line.

Hurwitz zeta is computed by Euler-Maclaurin: a direct sum of M terms, the
integral/midpoint head, and even-order correction terms until the first omitted
one falls below tolerance.  Values are cached keyed by (s, a, precision,
parameters); arguments in the lower half-plane are routed through conjugation
first, so a t-node and its mirror -t share one cache entry bit-exactly, as do a
character and its conjugate.  The cache is what keeps the quadrature oracles'
cost linear in the number of distinct nodes rather than (nodes x characters).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, log

from mpmath import mp, mpc, mpf

from .arith import NonConvergenceError, PrecisionContext, ensure_finite, to_real
from .characters import DirichletCharacter, char_value, conjugate, euler_phi
from .combinat import bernoulli_number, gen_bernoulli
from .arith import digamma as _digamma

# Fixed internal guard for the zeta machinery; tolerances quoted to callers are
# relative to the context precision, not the guarded one.
_ZETA_GUARD = 32

_MAX_TAIL_ORDER = 300


@dataclass(frozen=True)
class LEvalParams:
    """Euler-Maclaurin cutoffs: M direct terms, tail order cap J, target tolerance."""

    em_terms: int
    em_order: int
    target_tol: float

    def __post_init__(self) -> None:
        if self.em_terms < 1 or self.em_order < 1:
            raise ValueError("LEvalParams needs em_terms >= 1 and em_order >= 1")


def auto_params(s, ctx: PrecisionContext, target_tol: float | None = None) -> LEvalParams:
    """Direct-sum length grows with |Im s| and with precision; the 0.7 slope
    keeps the correction terms decaying from the first one onward."""
    t = abs(mpc(s).imag)
    m = max(20, ceil(0.7 * (float(t) + ctx.prec_bits * log(2) / log(2 * 3.141592653589793))))
    if target_tol is None:
        target_tol = float(ctx.tolerance(12))
    return LEvalParams(em_terms=m, em_order=_MAX_TAIL_ORDER, target_tol=target_tol)


_hurwitz_cache: dict = {}


def clear_caches() -> None:
    _hurwitz_cache.clear()
    _l_cache.clear()
    _fchi_series_cache.clear()


def hurwitz_zeta(s, a, ctx: PrecisionContext, params: LEvalParams | None = None) -> mpc:
    """zeta(s, a) for rational a in (0, 1], s != 1."""
    a = Fraction(a)
    if not (0 < a <= 1):
        raise ValueError(f"hurwitz_zeta needs a in (0, 1], got {a}")
    s = mpc(s)
    if s == 1:
        raise ValueError("hurwitz_zeta pole at s = 1")
    if s.imag < 0:
        return mp.conj(hurwitz_zeta(mp.conj(s), a, ctx, params))
    if params is None:
        params = auto_params(s, ctx)
    key = (s, a, ctx.prec_bits, params.em_terms, params.target_tol)
    got = _hurwitz_cache.get(key)
    if got is not None:
        return got

    M = params.em_terms
    tol = mpf(params.target_tol)
    with ctx.working(_ZETA_GUARD):
        af = to_real(a, ctx)
        total = mpc(0)
        for k in range(M):
            total += (k + af) ** (-s)
        x = M + af
        total += x ** (1 - s) / (s - 1) + x ** (-s) / 2

        # Correction terms B_{2j}/(2j)! * (s)_{2j-1} * x^(1-s-2j); the first
        # omitted term bounds the remainder up to a modest factor absorbed in
        # the /8 margin (checked globally by the functional-equation suite).
        rising = s
        powx = x ** (-s - 1)
        prev_mag = mpf("inf")
        j = 1
        while True:
            term = to_real(bernoulli_number(2 * j) / _factorial(2 * j), ctx) * rising * powx
            mag = abs(term)
            if mag <= tol * max(abs(total), mpf(1)) / 8:
                total += term
                break
            if mag > prev_mag:
                raise NonConvergenceError(
                    f"Euler-Maclaurin tail diverged at order {2 * j} for s={s}, a={a}"
                )
            total += term
            prev_mag = mag
            j += 1
            if j > params.em_order:
                raise NonConvergenceError(f"tail order cap {params.em_order} hit for s={s}, a={a}")
            rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
            powx /= x * x
        ensure_finite(total)
    _hurwitz_cache[key] = total
    return total


_factorial_cache: list[Fraction] = [Fraction(1)]


def _factorial(n: int) -> Fraction:
    while len(_factorial_cache) <= n:
        _factorial_cache.append(_factorial_cache[-1] * len(_factorial_cache))
    return _factorial_cache[n]


_l_cache: dict = {}


def l_value(s, chi: DirichletCharacter, ctx: PrecisionContext) -> mpc:
    """L(s, chi) via the decomposition q^(-s) sum_a chi(a) zeta(s, a/q).

    At s = 1 (non-principal only) the Hurwitz poles cancel exactly and the
    classical digamma formula L(1, chi) = -(1/q) sum_a chi(a) psi(a/q) is used.
    """
    q = chi.label.q
    s = mpc(s)
    if s == 1 and chi.principal:
        raise ValueError("L(s, chi) pole at s = 1 for principal chi")
    key = (chi.label, s, ctx.prec_bits)
    got = _l_cache.get(key)
    if got is not None:
        return got
    with ctx.working(_ZETA_GUARD):
        if q == 1:
            out = hurwitz_zeta(s, Fraction(1), ctx)
        elif s == 1:
            acc = mpc(0)
            for a in range(1, q):
                if chi.value_exponent(a) is None:
                    continue
                acc += char_value(chi, a, ctx) * _digamma(Fraction(a, q), ctx)
            out = -acc / q
        else:
            acc = mpc(0)
            for a in range(1, q):
                if chi.value_exponent(a) is None:
                    continue
                acc += char_value(chi, a, ctx) * hurwitz_zeta(s, Fraction(a, q), ctx)
            out = acc * q ** (-s)
        ensure_finite(out)
    _l_cache[key] = out
    return out


def q_chi(s, chi: DirichletCharacter, ctx: PrecisionContext) -> mpc:
    """Q_chi(s) = Gamma(s) L(s, chi) Gamma(1-s) L(1-s, chibar).

    Also evaluated through the reflection form pi/sin(pi s) * L L; the two must
    agree to 2^(24 - prec) relative, which cross-checks Gamma against sin.
    """
    from .arith import PrecisionError, gamma_fn

    s = mpc(s)
    if s.imag == 0 and mp.isint(s.real):
        raise ValueError(f"q_chi undefined at integer s = {s}")
    chib = conjugate(chi)
    with ctx.working(_ZETA_GUARD):
        lprod = l_value(s, chi, ctx) * l_value(1 - s, chib, ctx)
        gamma_form = gamma_fn(s, ctx) * gamma_fn(1 - s, ctx) * lprod
        sin_form = mp.pi / mp.sinpi(s) * lprod
        bound = ctx.tolerance(24) * max(abs(gamma_form), mpf(1))
        if abs(gamma_form - sin_form) > bound:
            raise PrecisionError(
                f"Q_chi product forms disagree at s={s}: |diff|={abs(gamma_form - sin_form)}"
            )
        return gamma_form


# --- f_chi -------------------------------------------------------------------

_fchi_series_cache: dict = {}


def _fchi_series_coeffs(chi: DirichletCharacter, count: int, ctx: PrecisionContext) -> list:
    """Taylor coefficients c_n = -(-1)^n B_{n+1,chi}/(n+1)! of f_chi at 0."""
    key = (chi.label, ctx.prec_bits)
    coeffs = _fchi_series_cache.setdefault(key, [])
    with ctx.working(_ZETA_GUARD):
        while len(coeffs) < count:
            n = len(coeffs)
            c = -((-1) ** n) * gen_bernoulli(n + 1, chi, ctx) / to_real(_factorial(n + 1), ctx)
            coeffs.append(c)
    return coeffs


def switch_point(q: int) -> Fraction:
    """Series/resummation splice for f_chi; well inside the 2*pi/q radius."""
    return Fraction(1, 2 * q)


def f_chi(chi: DirichletCharacter, x, ctx: PrecisionContext) -> mpc:
    """f_chi(x) = sum_{n>=1} chi(n) e^{-nx} for real x >= 0 (x > 0 if principal)."""
    xf = to_real(x, ctx)
    if xf < 0:
        raise ValueError(f"f_chi needs x >= 0, got {x}")
    return _f_chi_any(chi, xf, ctx)


def f_chi_complex(chi: DirichletCharacter, z, ctx: PrecisionContext) -> mpc:
    """f_chi on the right half-plane (resummation) or the small disc (series)."""
    return _f_chi_any(chi, mpc(z), ctx)


def _f_chi_any(chi: DirichletCharacter, z, ctx: PrecisionContext) -> mpc:
    q = chi.label.q
    x0 = to_real(switch_point(q), ctx)
    if abs(z) < x0:
        if chi.principal and z == 0:
            raise ValueError("f_chi has a pole at 0 for principal chi")
        return _f_chi_series(chi, z, ctx)
    if mpc(z).real <= 0:
        raise ValueError(f"f_chi resummation needs Re(z) > 0, got {z}")
    return _f_chi_resummed(chi, z, ctx)


def _f_chi_series(chi: DirichletCharacter, z, ctx: PrecisionContext) -> mpc:
    q = chi.label.q
    with ctx.working(_ZETA_GUARD):
        acc = mpc(0)
        if chi.principal:
            acc += to_real(Fraction(euler_phi(q), q), ctx) / z
        tol = mpf(2) ** (-(ctx.prec_bits + 8))
        zn = mpc(1)
        small_streak = 0
        n = 0
        while True:
            coeffs = _fchi_series_coeffs(chi, n + 1, ctx)
            term = coeffs[n] * zn
            acc += term
            if abs(term) <= tol * max(abs(acc), mpf(1)):
                small_streak += 1
                if small_streak >= 2:
                    return acc
            else:
                small_streak = 0
            n += 1
            zn *= z
            if n > 8 * ctx.prec_bits:
                raise NonConvergenceError(f"f_chi series did not settle at |z|={abs(z)}, q={q}")


def _f_chi_resummed(chi: DirichletCharacter, z, ctx: PrecisionContext) -> mpc:
    q = chi.label.q
    with ctx.working(_ZETA_GUARD):
        t = mp.exp(-z)
        tq = t**q
        if tq == 1:
            raise ValueError("f_chi resummation denominator vanished")
        acc = mpc(0)
        tp = mpc(1)
        for a in range(1, q):
            tp *= t
            ex = chi.value_exponent(a)
            if ex is None:
                continue
            acc += char_value(chi, a, ctx) * tp
        if q == 1:
            # principal character mod 1: f(z) = sum e^{-nz} = t/(1-t)
            return ensure_finite(t / (1 - t))
        return ensure_finite(acc / (1 - tq))


def completed_l(chi: DirichletCharacter, s, ctx: PrecisionContext) -> mpc:
    """(q/pi)^{(s+a)/2} Gamma((s+a)/2) L(s, chi) with a the parity bit.

    Defined for primitive chi; satisfies the reflection s -> 1-s against the
    conjugate character with root number tau(chi) / (i^a sqrt(q))."""
    from .characters import gauss_sum  # local import to avoid a cycle at load

    if not chi.primitive:
        raise ValueError(f"completed L needs a primitive character, got {chi.label}")
    q = chi.label.q
    a = chi.parity
    with ctx.working(_ZETA_GUARD):
        sc = mpc(s)
        half = (sc + a) / 2
        return ensure_finite((mpf(q) / mp.pi) ** half * mp.gamma(half) * l_value(sc, chi, ctx))


def funceq_residual(chi: DirichletCharacter, s, ctx: PrecisionContext) -> mpf:
    """Relative residual of Lambda(s, chi) = eps(chi) Lambda(1-s, chibar)."""
    from .characters import gauss_sum

    q = chi.label.q
    with ctx.working(_ZETA_GUARD):
        sc = mpc(s)
        lam_left = completed_l(chi, sc, ctx)
        lam_right = completed_l(conjugate(chi), 1 - sc, ctx)
        i_a = mpc(0, 1) if chi.parity else mpc(1)
        eps = gauss_sum(chi, ctx).value / (i_a * mp.sqrt(q))
        return +(abs(lam_left - eps * lam_right) / max(abs(lam_left), abs(lam_right)))
