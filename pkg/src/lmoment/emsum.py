"""Shifted Euler-Maclaurin engine for sums of the form sum_m f((m + alpha) h).

For rapidly decreasing f that is analytic at 0 apart from an allowed c/x pole,
the sum expands as h -> 0 into

    -[f]_{-1} log(h)/h + ([f]_{-1} K(alpha) + T) / h
      - sum_{n=0}^N B_{n+1}(alpha)/(n+1) [f]_n h^n + (remainder),

where [f]_n are the Laurent coefficients at 0, T is the regularized integral
of f(x) - [f]_{-1} e^{-x}/x over (0, oo), and K(alpha) = -gamma - digamma(alpha).

The engine takes the Laurent data as explicit inputs (exact where the caller
has them) instead of differentiating numerically; the descriptor bundles the
evaluator, the coefficients, and the tail integral.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import pi

from mpmath import mp, mpc, mpf

from .arith import (
    NonConvergenceError,
    PrecisionContext,
    const_euler_gamma,
    digamma,
    ensure_finite,
    to_complex,
    to_real,
)
from .combinat import bernoulli_number, bernoulli_poly
from .lfunc import _factorial
from .quadrature import QuadratureSpec, integrate, linear_edges


@dataclass(frozen=True)
class CAnalyticDescriptor:
    """A function packaged for the expansion engine.

    laurent lists the coefficients starting at the pole: [f]_{-1}, [f]_0, ...
    tail_integral may be None, in which case em_expand computes it by
    quadrature (the integrand is analytic at 0 once the pole is subtracted).
    """

    evaluator: object  # callable, positive reals and sector points -> Complex
    laurent: tuple
    tail_integral: object = None
    sector_phi: float = pi / 4

    @property
    def pole_coeff(self):
        return self.laurent[0]

    def taylor_coeff(self, n: int):
        return self.laurent[n + 1]

    def validate(self, ctx: PrecisionContext, tol: float = 1e-6) -> None:
        """Empirical sanity: rapid decay, and the first Taylor coefficients
        match the evaluator near 0 (after pole subtraction)."""
        with ctx.working():
            for x in (10, 20, 40):
                if abs(x * x * self.evaluator(mpf(x))) > tol * 1e6:
                    raise ValueError(f"descriptor does not decay rapidly at x={x}")
            h = mpf(1) / 64
            model = mpc(0)
            for n in range(min(len(self.laurent) - 1, 6)):
                model += to_complex(self.taylor_coeff(n), ctx) * h**n
            probe = self.evaluator(h) - to_complex(self.pole_coeff, ctx) / h
            if abs(probe - model) > max(tol, float(h) ** min(len(self.laurent) - 1, 6) * 100):
                raise ValueError("laurent coefficients disagree with the evaluator near 0")


@dataclass(frozen=True)
class EMExpansion:
    log_coeff: mpc
    inv_coeff: mpc
    poly: tuple
    alpha: Fraction
    order: int
    prec_bits: int


def shift_constant(alpha, ctx: PrecisionContext) -> mpf:
    """K(alpha) = -gamma - digamma(alpha); K(1/2) = 2 ln 2."""
    return -const_euler_gamma(ctx) - digamma(alpha, ctx)


def em_expand(desc: CAnalyticDescriptor, alpha, N: int, ctx: PrecisionContext) -> EMExpansion:
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"em_expand needs alpha in (0, 1), got {alpha}")
    if len(desc.laurent) < N + 2:
        raise ValueError(
            f"missing laurent coefficients: order {N} needs {N + 2}, have {len(desc.laurent)}"
        )
    with ctx.working():
        c_pole = to_complex(desc.pole_coeff, ctx)
        tail = desc.tail_integral
        if tail is None:
            tail = _tail_by_quadrature(desc, ctx)
        else:
            tail = to_complex(tail, ctx)
        log_coeff = -c_pole
        inv_coeff = c_pole * shift_constant(alpha, ctx) + tail
        poly = tuple(
            -to_real(bernoulli_poly(n + 1, alpha) / (n + 1), ctx) * to_complex(desc.taylor_coeff(n), ctx)
            for n in range(N + 1)
        )
        return EMExpansion(
            log_coeff=log_coeff,
            inv_coeff=inv_coeff,
            poly=poly,
            alpha=alpha,
            order=N,
            prec_bits=ctx.prec_bits,
        )


def _tail_by_quadrature(desc: CAnalyticDescriptor, ctx: PrecisionContext) -> mpc:
    tol = mpf(10) ** (-max(10, ctx.prec_bits // 6))
    c_pole = to_complex(desc.pole_coeff, ctx)
    x_end = mpf(max(16.0, 1.5 * float(-mp.log(tol))))

    def integrand(x):
        # analytic at 0: both pole parts cancel; mild cancellation near 0 is
        # absorbed by the working-precision guard
        if x == 0:
            return to_complex(desc.taylor_coeff(0), ctx) + c_pole
        return desc.evaluator(x) - c_pole * mp.exp(-x) / x

    edges = linear_edges(mpf(0), x_end, mpf("0.5"))
    value, _ = integrate(integrand, edges, QuadratureSpec(target_tol=float(tol)), ctx)
    return value


def em_eval(exp: EMExpansion, h) -> mpc:
    """Assemble the expansion at a concrete h > 0."""
    with mp.workprec(exp.prec_bits + 16):
        hf = mpf(h)
        if hf <= 0:
            raise ValueError(f"em_eval needs h > 0, got {h}")
        total = exp.log_coeff * mp.log(hf) / hf + exp.inv_coeff / hf
        hp = mpf(1)
        for c in exp.poly:
            total += c * hp
            hp *= hf
        return ensure_finite(total)


def em_direct_sum(desc: CAnalyticDescriptor, alpha, h, tol, ctx: PrecisionContext) -> mpc:
    """sum_{m >= 0} f((m + alpha) h) with truncation justified by rapid decay."""
    alpha = Fraction(alpha)
    with ctx.working():
        hf = to_real(h, ctx)
        if hf <= 0:
            raise ValueError(f"em_direct_sum needs h > 0, got {h}")
        tolf = mpf(tol)
        af = to_real(alpha, ctx)
        total = mpc(0)
        small_streak = 0
        m = 0
        while True:
            x = (m + af) * hf
            term = desc.evaluator(x)
            total += term
            # once past the spike region, a run of tiny terms ends the sum;
            # the h factor budgets the number of remaining tail terms
            if x > 5 and abs(term) < tolf * hf / 8:
                small_streak += 1
                if small_streak >= 3:
                    return ensure_finite(total)
            else:
                small_streak = 0
            m += 1
            if m > 10_000_000:
                raise NonConvergenceError("em_direct_sum did not settle")


def exp_shift_sum(alpha, w, N: int, ctx: PrecisionContext) -> mpc:
    """Expansion of sum_m e^{-(m+alpha) w} / ((m+alpha) w) through order N:
    -log(w)/w + K(alpha)/w + sum_m B_{m+1}(alpha)/(m+1) (-1)^m/(m+1)! w^m."""
    alpha = Fraction(alpha)
    if not 0 < alpha < 1:
        raise ValueError(f"exp_shift_sum needs alpha in (0, 1), got {alpha}")
    with ctx.working():
        wf = to_real(w, ctx)
        if wf <= 0:
            raise ValueError(f"exp_shift_sum needs w > 0, got {w}")
        total = mpc(-mp.log(wf) / wf + shift_constant(alpha, ctx) / wf)
        wp = mpf(1)
        for m in range(N + 1):
            coeff = bernoulli_poly(m + 1, alpha) / (m + 1) * Fraction((-1) ** m) / _factorial(m + 1)
            total += to_real(coeff, ctx) * wp
            wp *= wf
        return ensure_finite(total)


# --- stock descriptors -------------------------------------------------------


def desc_exp(ctx: PrecisionContext, n_terms: int = 16) -> CAnalyticDescriptor:
    """f(x) = e^{-x}; Taylor (-1)^n/n!, integral 1."""
    laurent = (Fraction(0),) + tuple(Fraction((-1) ** n) / _factorial(n) for n in range(n_terms))
    return CAnalyticDescriptor(evaluator=lambda x: mp.exp(-x), laurent=laurent, tail_integral=1)


def desc_gauss(ctx: PrecisionContext, n_terms: int = 16) -> CAnalyticDescriptor:
    """f(x) = e^{-x^2}; even Taylor coefficients only, integral sqrt(pi)/2."""
    laurent = [Fraction(0)]
    for n in range(n_terms):
        laurent.append(Fraction((-1) ** (n // 2)) / _factorial(n // 2) if n % 2 == 0 else Fraction(0))
    with ctx.working():
        half_sqrt_pi = mp.sqrt(mp.pi) / 2
    return CAnalyticDescriptor(
        evaluator=lambda x: mp.exp(-(x * x)), laurent=tuple(laurent), tail_integral=half_sqrt_pi
    )


def desc_fermi(ctx: PrecisionContext, n_terms: int = 16) -> CAnalyticDescriptor:
    """f(x) = 1/(e^x + 1) = 1/(e^x - 1) - 2/(e^{2x} - 1); Taylor coefficient of
    x^n is B_{n+1} (1 - 2^{n+1})/(n+1)!, integral log 2."""
    laurent = (Fraction(0),) + tuple(
        bernoulli_number(n + 1) * (1 - 2 ** (n + 1)) / _factorial(n + 1) for n in range(n_terms)
    )
    with ctx.working():
        log2 = mp.log(2)
    return CAnalyticDescriptor(
        evaluator=lambda x: 1 / (mp.exp(x) + 1), laurent=laurent, tail_integral=log2
    )


def desc_fchi(chi, ctx: PrecisionContext, n_terms: int = 16) -> CAnalyticDescriptor:
    """f(x) = f_chi(2 pi x).  Principal characters carry the pole phi(q)/(2 pi q x)
    and a quadrature tail; non-principal ones get the exact tail L(1, chi)/(2 pi)."""
    from .characters import euler_phi
    from .lfunc import _fchi_series_coeffs, f_chi_complex, l_value

    q = chi.label.q
    with ctx.working():
        two_pi = 2 * mp.pi
        coeffs = _fchi_series_coeffs(chi, n_terms, ctx)
        laurent = [to_real(Fraction(euler_phi(q), q), ctx) / two_pi if chi.principal else mpf(0)]
        laurent.extend(coeffs[n] * two_pi**n for n in range(n_terms))
        tail = None if chi.principal else l_value(1, chi, ctx) / two_pi
    return CAnalyticDescriptor(
        evaluator=lambda x: f_chi_complex(chi, 2 * mp.pi * x, ctx),
        laurent=tuple(laurent),
        tail_integral=tail,
    )
