"""Closed-form evaluation of the weighted L-function moments, the Taylor
coefficients of the twisted period function at 1, and the small-height
expansion coefficients of the Eisenstein series at +-1.

The moment of order N of |L(1/2+it, chi)|^2 against t^N dt / cosh(pi t) equals

    -chi(-1) (-1)^floor(N/2) B_N(1/2) phi(q)/q
      + sum_{k=1}^{N+1} S_{-1/2}(N, k-1) (2 pi i q)^k / (q^2 k^2)
          * sum_{a,b} B_k(a/q) B_k(b/q) T_N(ab) xi^{ab},

with T_N(c) = -i^N [tau(chibar) chi(c) + (-1)^N tau(chi) chibar(c)].  The pair
(a, b) enters only through ab mod q, so the double sum collapses onto the
grouped Bernoulli tables of combinat.bernoulli_product_classes.

All alternating sums here cancel catastrophically: term sizes grow like
(2 pi q)^k (moments) or B_{j+1}(a/q)^2 (2 pi q)^j / (j+1)! (psi coefficients)
while the results stay O(1) or decay.  Working precision is therefore raised
by an estimated cancellation budget before summing, and the imaginary residual
left over after assembling a mathematically real quantity is checked against
the context tolerance instead of being silently discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, lgamma, log2, pi

from mpmath import mp, mpc, mpf

from .arith import PrecisionContext, PrecisionError, to_real
from .characters import (
    DirichletCharacter,
    conjugate,
    euler_phi,
    gauss_sum,
    unit_root_at,
)
from .combinat import (
    bernoulli_poly,
    bernoulli_product_classes,
    stirling_noncentral_half,
)
from .lfunc import _factorial, f_chi, switch_point
from .quadrature import QuadratureSpec, geometric_edges, integrate, linear_edges


@dataclass(frozen=True)
class MomentResult:
    q: int
    conrey: int
    N: int
    value: mpf
    residual_im: mpf
    method: str  # "closed_form" or "quadrature"
    prec_bits: int


@dataclass(frozen=True)
class PsiCoeff:
    n: int
    value: mpc
    q: int
    conrey: int


_I_POWERS = (mpc(1), mpc(0, 1), mpc(-1), mpc(0, -1))


def _ipow(k: int) -> mpc:
    """i^k exactly, without rounding through a complex power."""
    return _I_POWERS[k % 4]


def _require_theorem_domain(chi: DirichletCharacter, op: str) -> None:
    if chi.label.q < 3:
        raise ValueError(f"{op} needs modulus q >= 3, got q = {chi.label.q}")
    if not chi.primitive:
        raise ValueError(f"{op} needs a primitive character, got {chi.label}")


def t_factor(chi: DirichletCharacter, N: int, c: int, ctx: PrecisionContext) -> mpc:
    """T_N(c) = -i^N [tau(chibar) chi(c) + (-1)^N tau(chi) chibar(c)]."""
    _require_theorem_domain(chi, "t_factor")
    q = chi.label.q
    t = chi.value_exponent(c)
    if t is None:
        return mpc(0)
    tau = gauss_sum(chi, ctx).value
    taub = gauss_sum(conjugate(chi), ctx).value
    with ctx.working():
        val = unit_root_at(t, ctx)
        return -_ipow(N) * (taub * val + (-1) ** N * tau * mp.conj(val))


def _moment_guard_bits(q: int, N: int) -> int:
    # Largest k-term magnitude ~ S_{-1/2}(N,k) (2 pi q)^k; S values stay below
    # N! 2^N.  Overshoot is cheap, undershoot raises a precision error later.
    return 32 + int((N + 1) * max(1.0, log2(2 * pi * q)) + lgamma(N + 1) / 0.6931 + N)


def moment_closed(chi: DirichletCharacter, N: int, ctx: PrecisionContext) -> MomentResult:
    """Moment of order N by the closed formula; value is the real part, with
    the discarded imaginary magnitude recorded and bounded."""
    _require_theorem_domain(chi, "moment_closed")
    if N < 0:
        raise ValueError(f"moment order must be >= 0, got {N}")
    q = chi.label.q
    chib = conjugate(chi)
    sign = chi.sign_at_minus_one()

    first = -sign * (-1) ** (N // 2) * bernoulli_poly(N, Fraction(1, 2)) * Fraction(euler_phi(q), q)

    # the leaves (Gauss sums, roots of unity) must carry the full guarded
    # precision, or their rounding gets amplified by the (2 pi q)^k prefactors
    # past the cancellation; an elevated context propagates it to them
    work = PrecisionContext(prec_bits=ctx.prec_bits + _moment_guard_bits(q, N))
    with work.working(0):
        tau = gauss_sum(chi, work).value
        taub = gauss_sum(chib, work).value
        minus_iN = -_ipow(N)
        sgnN = (-1) ** N
        total = mpc(to_real(first, work))
        two_pi_q = 2 * mp.pi * q
        for k in range(1, N + 2):
            s_nc = stirling_noncentral_half(N, k - 1)
            pref = to_real(s_nc, work) * two_pi_q**k * _ipow(k) / (q * q * k * k)
            classes = bernoulli_product_classes(q, k)
            inner = mpc(0)
            for c in sorted(classes):
                v = classes[c]
                if v == 0:
                    continue
                t = chi.value_exponent(c)
                if t is None:
                    continue
                chi_xi = unit_root_at(t + Fraction(c, q), work)
                chib_xi = unit_root_at(-t + Fraction(c, q), work)
                inner += to_real(v, work) * minus_iN * (taub * chi_xi + sgnN * tau * chib_xi)
            total += pref * inner
        residual = abs(total.imag)
        value = total.real
    bound = ctx.tolerance(32) * max(mpf(1), abs(value))
    if residual > bound:
        raise PrecisionError(
            f"imaginary residual {residual} exceeds bound {bound} for "
            f"moment q={q} n={chi.label.n} N={N} at {ctx.prec_bits} bits"
        )
    with ctx.working(0):
        return MomentResult(
            q=q,
            conrey=chi.label.n,
            N=N,
            value=+value,
            residual_im=+residual,
            method="closed_form",
            prec_bits=ctx.prec_bits,
        )


def moment0_odd_quadratic(chi: DirichletCharacter, ctx: PrecisionContext) -> mpf:
    """Zeroth moment for odd quadratic chi:
    phi(q)/q - (4 pi i tau(chi)/q) sum (a/q - 1/2)(b/q - 1/2) chi(ab) xi^{ab}."""
    _require_theorem_domain(chi, "moment0_odd_quadratic")
    if chi.parity != 1 or chi.order != 2:
        raise ValueError(f"moment0_odd_quadratic needs an odd quadratic character, got {chi.label}")
    q = chi.label.q
    with ctx.working():
        tau = gauss_sum(chi, ctx).value
        classes = bernoulli_product_classes(q, 1)
        inner = mpc(0)
        for c in sorted(classes):
            t = chi.value_exponent(c)
            if t is None or classes[c] == 0:
                continue
            inner += to_real(classes[c], ctx) * unit_root_at(t + Fraction(c, q), ctx)
        total = to_real(Fraction(euler_phi(q), q), ctx) - 4 * mp.pi * mpc(0, 1) * tau / q * inner
        residual = abs(total.imag)
        value = total.real
    if residual > ctx.tolerance(32) * max(mpf(1), abs(value)):
        raise PrecisionError(f"imaginary residual {residual} too large in moment0_odd_quadratic")
    with ctx.working(0):
        return +value


# --- Taylor coefficients of the period function at 1 -------------------------


def _b_guard_bits(q: int, j: int) -> int:
    # B_{j+1}(a/q)^2 (2 pi q)^j / ((j+1) (j+1)!) in bits, via
    # |B_m(x)| <~ 2 m!/(2 pi)^m; generous by design.
    ln2 = 0.6931471805599453
    m = j + 1
    mag = lgamma(m + 1) / ln2 + j * log2(2 * pi * q) - 2 * m * log2(2 * pi) + 4
    return 32 + max(0, int(mag))


def b_coeff(chi: DirichletCharacter, j: int, ctx: PrecisionContext) -> mpc:
    """(2 pi i q)^j / (tau(chi) (j+1) (j+1)!) * sum B_{j+1}(a/q) B_{j+1}(b/q) chi(ab) xi^{ab}."""
    _require_theorem_domain(chi, "b_coeff")
    if j < 0:
        raise ValueError(f"b_coeff needs j >= 0, got {j}")
    return _b_array(chi, j, ctx)[j]


_b_cache: dict = {}


def _b_array(chi: DirichletCharacter, jmax: int, ctx: PrecisionContext) -> list:
    """Coefficients j = 0..jmax, computed at a cancellation-aware precision."""
    guard = 64 * ((_b_guard_bits(chi.label.q, jmax) + 63) // 64)
    key = (chi.label, ctx.prec_bits, guard)
    arr = _b_cache.setdefault(key, [])
    q = chi.label.q
    # elevated context so leaf rounding stays below the cancellation floor
    work = PrecisionContext(prec_bits=ctx.prec_bits + guard)
    with work.working(0):
        tau = gauss_sum(chi, work).value
        two_pi_q = 2 * mp.pi * q
        while len(arr) <= jmax:
            j = len(arr)
            classes = bernoulli_product_classes(q, j + 1)
            inner = mpc(0)
            for c in sorted(classes):
                t = chi.value_exponent(c)
                if t is None or classes[c] == 0:
                    continue
                inner += to_real(classes[c], work) * unit_root_at(t + Fraction(c, q), work)
            pref = two_pi_q**j * _ipow(j) / (tau * (j + 1) * to_real(_factorial(j + 1), work))
            arr.append(pref * inner)
    return arr


def psi_coeff(chi: DirichletCharacter, n: int, ctx: PrecisionContext) -> PsiCoeff:
    """n-th Taylor coefficient of the period function at 1."""
    return psi_coeffs(chi, n, ctx)[n]


def psi_coeffs(chi: DirichletCharacter, nmax: int, ctx: PrecisionContext) -> list[PsiCoeff]:
    """Coefficients 0..nmax; the binomial-weighted conjugate sums share one
    coefficient table, so the batch costs the same as the last entry alone."""
    _require_theorem_domain(chi, "psi_coeff")
    if nmax < 0:
        raise ValueError(f"psi_coeff needs n >= 0, got {nmax}")
    q = chi.label.q
    chib = conjugate(chi)
    b_chi = _b_array(chi, nmax, ctx)
    b_chib = _b_array(chib, nmax, ctx)
    guard = nmax + 64 * ((_b_guard_bits(q, nmax) + 63) // 64)
    out = []
    work = PrecisionContext(prec_bits=ctx.prec_bits + guard)
    with work.working(0):
        lead_base = to_real(Fraction(euler_phi(q), q), work) / (2 * mp.pi) * mpc(0, -1)
        for n in range(nmax + 1):
            acc = mpc(0)
            for j in range(n + 1):
                acc += comb(n, j) * b_chib[j]
            value = lead_base * (-1) ** n / (n + 1) + b_chi[n] + (-1) ** n * acc
            # round to the context precision for stable downstream formatting
            with ctx.working(0):
                out.append(PsiCoeff(n=n, value=+value, q=q, conrey=chi.label.n))
    return out


# --- Eisenstein expansion coefficients at +-1 and the kappa constant ---------


def c1_coeff(chi: DirichletCharacter, n: int, ctx: PrecisionContext) -> mpc:
    """(-2 pi q)^n / (tau(chi) (n+1) (n+1)!) * sum chi(ab) xi^{ab} B_{n+1}(a/q) B_{n+1}(b/q)."""
    _require_theorem_domain(chi, "c1_coeff")
    if n < 0:
        raise ValueError(f"c1_coeff needs n >= 0, got {n}")
    q = chi.label.q
    work = PrecisionContext(prec_bits=ctx.prec_bits + _b_guard_bits(q, n))
    with work.working(0):
        tau = gauss_sum(chi, work).value
        classes = bernoulli_product_classes(q, n + 1)
        inner = mpc(0)
        for c in sorted(classes):
            t = chi.value_exponent(c)
            if t is None or classes[c] == 0:
                continue
            inner += to_real(classes[c], work) * unit_root_at(t + Fraction(c, q), work)
        pref = (-2 * mp.pi * q) ** n / (tau * (n + 1) * to_real(_factorial(n + 1), work))
        with ctx.working(0):
            return +(pref * inner)


def c_minus1_coeff(chi: DirichletCharacter, n: int, ctx: PrecisionContext) -> mpc:
    """Mirror coefficient (-1)^(n+1) chi(-1) c1_coeff(chi, n)."""
    with ctx.working(0):
        return +((-1) ** (n + 1) * chi.sign_at_minus_one() * c1_coeff(chi, n, ctx))


def kappa(q: int, ctx: PrecisionContext) -> mpf:
    """gamma phi(q)/(2 pi q) + digamma sum over coprime residues / (2 pi q)
    minus the regularized integral of f_{chi_0}(2 pi x) - phi(q)/(2 pi q) e^-x / x."""
    from math import gcd

    from .arith import const_euler_gamma, digamma
    from .characters import character
    from .lfunc import _fchi_series_coeffs

    if q < 3:
        raise ValueError(f"kappa needs q >= 3, got {q}")
    chi0 = character(q, 1)
    c_pole = Fraction(euler_phi(q), q)  # pole coefficient of f_{chi_0} in its own variable

    tol = mpf(10) ** (-max(10, ctx.prec_bits // 5))
    with ctx.working():
        head = const_euler_gamma(ctx) * euler_phi(q)
        for j in range(1, q):
            if gcd(j, q) == 1:
                head += digamma(Fraction(j, q), ctx)
        head /= 2 * mp.pi * q

        # Integral over [0, x1]: termwise, from the Taylor part of
        # f_{chi_0}(2 pi x) minus the expansion of c * e^-x / x (poles cancel).
        x1 = to_real(switch_point(q), ctx) / (2 * mp.pi)
        cpf = to_real(c_pole, ctx) / (2 * mp.pi)  # pole coefficient in x
        series_part = mpf(0)
        xpow = x1
        n = 0
        while True:
            coeffs = _fchi_series_coeffs(chi0, n + 1, ctx)
            term = (
                coeffs[n] * (2 * mp.pi) ** n + cpf * (-1) ** n / to_real(_factorial(n + 1), ctx)
            ) * xpow / (n + 1)
            series_part += term.real
            if abs(term) < tol / 8 and n >= 2:
                break
            xpow *= x1
            n += 1
            if n > 8 * ctx.prec_bits:
                raise PrecisionError("kappa series integral did not settle")

        x_end = mpf(max(8.0, float(-mp.log(tol)) + 4.0))
        edges = geometric_edges(x1, mpf(1)) + linear_edges(mpf(1), x_end, mpf("0.5"))[1:]

        def integrand(x):
            return f_chi(chi0, 2 * mp.pi * x, ctx) - cpf * mp.exp(-x) / x

        spec = QuadratureSpec(target_tol=float(tol))
        tail_part, _ = integrate(integrand, edges, spec, ctx)

        with ctx.working(0):
            return +(head - series_part - tail_part.real)
