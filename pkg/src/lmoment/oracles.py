"""Independent numerical verification layer.

Everything here recomputes quantities that the closed-form layer produces by
exact/symbolic means, using routes that share as little code as possible with
that layer: direct quadrature of the moment integrals, the auto-correlation
function A_chi and its continued form, the Eisenstein/period-function stack,
Cauchy-integral Taylor coefficients, and expansion-vs-series checkers.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

from mpmath import mp, mpc, mpf

from .arith import (
    NonConvergenceError,
    PrecisionContext,
    ensure_finite,
    to_complex,
    to_real,
    unit_root_at,
)
from .characters import DirichletCharacter, conjugate, euler_phi, gauss_sum
from .closedform import (
    MomentResult,
    _require_theorem_domain,
    c1_coeff,
    c_minus1_coeff,
    kappa,
)
from .lfunc import f_chi, l_value, q_chi
from .quadrature import QuadratureSpec, gauss_legendre_nodes, integrate, linear_edges

__all__ = [
    "QuadratureSpec",
    "moment_quadrature",
    "a_chi_direct",
    "a_chi_continued",
    "r_chi",
    "eisenstein",
    "psi_chi",
    "verify_fund_lemma",
    "psi_coeff_oracle",
    "mellin_check",
    "verify_epm1",
]


def _default_tol(ctx: PrecisionContext) -> mpf:
    return mpf(10) ** (-max(10, ctx.prec_bits // 8))


# --- critical-line weight ----------------------------------------------------

# |L(1/2+it, chi)|^2 / cosh(pi t) at quadrature nodes, keyed by character and
# precision.  The node set is deterministic, so entries are shared across the
# moment orders, the circle points of the Cauchy oracle, and order doubling.
_WEIGHT_CACHE: dict = {}


def _critical_weight(chi: DirichletCharacter, t: mpf, ctx: PrecisionContext) -> mpf:
    key = (chi.label.q, chi.label.n, ctx.prec_bits)
    per_char = _WEIGHT_CACHE.setdefault(key, {})
    got = per_char.get(t)
    if got is None:
        lv = l_value(mpc(mpf(1) / 2, t), chi, ctx)
        got = (lv.real**2 + lv.imag**2) / mp.cosh(mp.pi * t)
        per_char[t] = got
    return got


def clear_caches() -> None:
    _WEIGHT_CACHE.clear()
    _PSI_CIRCLE_CACHE.clear()


# --- moment quadrature -------------------------------------------------------


def _moment_cutoff(q: int, N: int, tol: mpf, width: mpf) -> mpf:
    """Smallest panel multiple T with (1+T)^(N+2) e^(-pi T) q < tol/10."""
    T = mpf(6)
    while (1 + T) ** (N + 2) * mp.exp(-mp.pi * T) * q >= tol / 10:
        T += width
        if T > 100000:
            raise NonConvergenceError("moment tail cutoff did not close")
    return T


def moment_quadrature(
    chi: DirichletCharacter, N: int, spec: QuadratureSpec | None = None, ctx: PrecisionContext = None
) -> MomentResult:
    """m_N(chi) = int t^N |L(1/2+it, chi)|^2 / cosh(pi t) dt by panel quadrature.

    The residual_im slot carries the quadrature error estimate plus the tail
    bound, since the integrand here is real by construction.
    """
    if not chi.primitive:
        raise ValueError(f"moment quadrature needs a primitive character, got {chi.label}")
    if N < 0:
        raise ValueError(f"moment order must be >= 0, got {N}")
    if spec is None:
        spec = QuadratureSpec()
    with ctx.working(32):
        tol = spec.tol(ctx)
        width = mpf(spec.panel_width)
        q = chi.label.q
        T = mpf(spec.tail_cutoff) if spec.tail_cutoff else _moment_cutoff(q, N, tol, width)

        def integrand(t):
            return t**N * _critical_weight(chi, t, ctx)

        value, delta = integrate(integrand, linear_edges(-T, T, width), spec, ctx)
        tail = (1 + T) ** (N + 2) * mp.exp(-mp.pi * T) * q
        return MomentResult(
            q=q,
            conrey=chi.label.n,
            N=N,
            value=+value,
            residual_im=+(delta + tail),
            method="quadrature",
            prec_bits=ctx.prec_bits,
        )


# --- the A_chi stack ---------------------------------------------------------


def _require_nonprincipal(chi: DirichletCharacter, op: str) -> None:
    if chi.principal:
        raise ValueError(f"{op} diverges for principal characters ({chi.label})")


def a_chi_direct(chi: DirichletCharacter, v, ctx: PrecisionContext, tol=None) -> mpc:
    """A_chi(v) = int_0^oo f_chi(x v) f_chibar(x) dx by direct quadrature.

    The integrand decays like e^{-(1+v)x}; panels are sized to the nearest
    complex poles of the two factors (at spacing 2 pi / q and 2 pi / (q v))."""
    _require_nonprincipal(chi, "a_chi_direct")
    chib = conjugate(chi)
    q = chi.label.q
    with ctx.working(32):
        vf = to_real(v, ctx)
        if vf <= 0:
            raise ValueError(f"a_chi_direct needs v > 0, got {v}")
        tolf = mpf(tol) if tol is not None else _default_tol(ctx)
        X = mp.log(40 * (q - 1) ** 2 / ((1 + vf) * tolf)) / (1 + vf)
        step = min(mpf("0.5"), mp.pi / q, mp.pi / (q * vf))
        # split points 1/v and 1 separate the two decay/structure scales
        cuts = sorted({mpf(0), min(1 / vf, X), min(mpf(1), X), X})

        def integrand(x):
            return f_chi(chi, x * vf, ctx) * f_chi(chib, x, ctx)

        edges = [mpf(0)]
        for lo, hi in zip(cuts, cuts[1:]):
            if hi > lo:
                edges.extend(linear_edges(lo, hi, step)[1:])
        spec = QuadratureSpec(target_tol=float(tolf))
        value, _ = integrate(integrand, edges, spec, ctx)
        return ensure_finite(+value)


def _growth_cutoff(q: int, grow: mpf, tol: mpf, width: mpf) -> mpf:
    """T with q (1+T)^2 e^{grow T} / cosh-decay < tol/10, for integrands whose
    modulus is bounded by the critical-line weight times e^{grow |t|}."""
    T = mpf(6)
    while (1 + T) ** 2 * q * mp.exp((grow - mp.pi) * T) >= tol / 10:
        T += width
        if T > 100000:
            raise NonConvergenceError("cutoff does not close; argument too near the cut")
    return T


def a_chi_continued(chi: DirichletCharacter, z, ctx: PrecisionContext, tol=None) -> mpc:
    """A_chi(z) on the slit plane, via
    (1/2) int z^{-1/2+it} |L(1/2+it, chibar)|^2 / cosh(pi t) dt.

    Needs |arg z| <= pi - 0.2 so the integrand keeps exponential decay."""
    _require_theorem_domain(chi, "a_chi_continued")
    chib = conjugate(chi)
    q = chi.label.q
    with ctx.working(32):
        zc = to_complex(z, ctx)
        if zc == 0:
            raise ValueError("a_chi_continued needs z != 0")
        theta = mp.arg(zc)
        if abs(theta) > mp.pi - mpf("0.2") + mpf("1e-12"):
            raise ValueError(f"arg z = {float(theta):.4f} too close to the cut (-oo, 0]")
        tolf = mpf(tol) if tol is not None else _default_tol(ctx)
        width = mpf("0.5")
        T = _growth_cutoff(q, abs(theta), tolf, width)
        log_mod = mp.log(abs(zc))
        amp = 1 / mp.sqrt(abs(zc))

        def integrand(t):
            # z^{-1/2+it} = |z|^{-1/2} e^{-t theta} e^{i(t log|z| - theta/2)}
            phase = mp.exp(mpc(0, t * log_mod - theta / 2))
            return amp * mp.exp(-t * theta) * phase * _critical_weight(chib, t, ctx)

        spec = QuadratureSpec(target_tol=float(tolf))
        value, _ = integrate(integrand, linear_edges(-T, T, width), spec, ctx)
        return ensure_finite(+value / 2)


def r_chi(chi: DirichletCharacter, w, ctx: PrecisionContext, tol=None) -> mpc:
    """R_chi(w) = e^{w/2} A_chi(e^w)
    = (1/2) int e^{itw} |L(1/2+it, chibar)|^2 / cosh(pi t) dt, |Im w| <= pi - 0.2."""
    _require_theorem_domain(chi, "r_chi")
    chib = conjugate(chi)
    q = chi.label.q
    with ctx.working(32):
        wc = to_complex(w, ctx)
        if abs(wc.imag) > mp.pi - mpf("0.2") + mpf("1e-12"):
            raise ValueError(f"Im w = {float(wc.imag):.4f} outside the convergence strip")
        tolf = mpf(tol) if tol is not None else _default_tol(ctx)
        width = mpf("0.5")
        T = _growth_cutoff(q, abs(wc.imag), tolf, width)

        def integrand(t):
            return mp.exp(mpc(0, 1) * t * wc) * _critical_weight(chib, t, ctx)

        spec = QuadratureSpec(target_tol=float(tolf))
        value, _ = integrate(integrand, linear_edges(-T, T, width), spec, ctx)
        return ensure_finite(+value / 2)


# --- Eisenstein series and the period function -------------------------------

_DIVISOR_SIEVE: list = [0, 1]


def _divisor_counts(n_max: int) -> list:
    """d(0..n_max) by sieve; grows a module-level table."""
    global _DIVISOR_SIEVE
    if len(_DIVISOR_SIEVE) <= n_max:
        size = max(n_max + 1, 2 * len(_DIVISOR_SIEVE))
        table = [0] * size
        for i in range(1, size):
            for j in range(i, size, i):
                table[j] += 1
        _DIVISOR_SIEVE = table
    return _DIVISOR_SIEVE


def eisenstein(
    chi: DirichletCharacter, z, ctx: PrecisionContext, tol=None, n_terms: int | None = None
) -> mpc:
    """E_chi(z) = tau(chi)^{-1} sum_n chi(n) d(n) e(nz/q), Im z > 0.

    Truncation n_max satisfies sum_{n > n_max} n r^n < tol sqrt(q) with
    r = e^{-2 pi Im z / q}, using d(n) <= n."""
    if not chi.primitive:
        raise ValueError(f"eisenstein needs a primitive character, got {chi.label}")
    q = chi.label.q
    with ctx.working(32):
        zc = to_complex(z, ctx)
        if zc.imag <= 0:
            raise ValueError(f"eisenstein needs Im z > 0, got {z}")
        tolf = mpf(tol) if tol is not None else _default_tol(ctx)
        r = mp.exp(-2 * mp.pi * zc.imag / q)
        if n_terms is not None:
            n_max = n_terms
        else:
            n_max = 8
            # tail bound sum_{n>M} n r^n = r^{M+1} ((M+1)(1-r) + r)/(1-r)^2
            while r ** (n_max + 1) * ((n_max + 1) * (1 - r) + r) / (1 - r) ** 2 >= tolf * mp.sqrt(q):
                n_max *= 2
                if n_max > 50_000_000:
                    raise NonConvergenceError("eisenstein truncation bound did not close")
        d = _divisor_counts(n_max)
        u = mp.exp(mpc(0, 2) * mp.pi * zc / q)
        u_pow = mpc(1)
        total = mpc(0)
        for n in range(1, n_max + 1):
            u_pow *= u
            if gcd(n, q) == 1:
                total += chi(n) * d[n] * u_pow
        return ensure_finite(total / gauss_sum(chi, ctx).value)


def psi_chi(chi: DirichletCharacter, z, ctx: PrecisionContext, tol=None) -> mpc:
    """psi_chi(z) = E_chi(z) - chi(-1)/z * E_chibar(-1/z), Im z > 0."""
    if not chi.primitive:
        raise ValueError(f"psi_chi needs a primitive character, got {chi.label}")
    with ctx.working(32):
        zc = to_complex(z, ctx)
        if zc.imag <= 0:
            raise ValueError(f"psi_chi needs Im z > 0, got {z}")
        left = eisenstein(chi, zc, ctx, tol=tol)
        right = eisenstein(conjugate(chi), -1 / zc, ctx, tol=tol)
        return ensure_finite(left - chi.sign_at_minus_one() / zc * right)


def verify_fund_lemma(chi: DirichletCharacter, sample_points, ctx: PrecisionContext) -> mpf:
    """max over samples of |A_chi(z) + chi(-1) i pi psi_chi(z)| / |A_chi(z)|.

    Both sides come from independent routes (critical-line integral vs
    divisor-sum q-expansions), so a small residual is strong evidence for
    the continuation identity."""
    _require_theorem_domain(chi, "verify_fund_lemma")
    worst = mpf(0)
    with ctx.working(32):
        sign = chi.sign_at_minus_one()
        for z in sample_points:
            zc = to_complex(z, ctx)
            if zc.imag <= 0:
                raise ValueError(f"sample point {z} not in the upper half-plane")
            a_val = a_chi_continued(chi, zc, ctx)
            p_val = psi_chi(chi, zc, ctx)
            worst = max(worst, abs(a_val + sign * mpc(0, 1) * mp.pi * p_val) / abs(a_val))
    return +worst


# --- Cauchy-integral Taylor coefficients -------------------------------------

_PSI_CIRCLE_CACHE: dict = {}


def _psi_circle_values(
    chi: DirichletCharacter, r: Fraction, m_points: int, ctx: PrecisionContext
) -> tuple:
    """psi_chi(1 + r e(j/M)) for j = 0..M-1, through the slit-plane
    continuation psi = A / (-chi(-1) i pi); lower half-circle points are
    reached this way even though the q-expansion needs Im z > 0."""
    key = (chi.label.q, chi.label.n, r, m_points, ctx.prec_bits)
    got = _PSI_CIRCLE_CACHE.get(key)
    if got is not None:
        return got
    with ctx.working(32):
        denom = -chi.sign_at_minus_one() * mpc(0, 1) * mp.pi
        vals = tuple(
            a_chi_continued(chi, 1 + to_real(r, ctx) * unit_root_at(Fraction(j, m_points), ctx), ctx)
            / denom
            for j in range(m_points)
        )
    _PSI_CIRCLE_CACHE[key] = vals
    return vals


def psi_coeff_oracle(
    chi: DirichletCharacter,
    n: int,
    radius=None,
    points: int | None = None,
    ctx: PrecisionContext = None,
) -> mpc:
    """n-th Taylor coefficient of psi_chi(1+z) by the trapezoidal Cauchy
    integral on |z| = r.  Doubling the point count must agree within
    tolerance or NonConvergenceError is raised."""
    _require_theorem_domain(chi, "psi_coeff_oracle")
    if n < 0:
        raise ValueError(f"coefficient index must be >= 0, got {n}")
    r = Fraction(radius) if radius is not None else Fraction(1, 2)
    if not 0 < r <= Fraction(1, 2):
        raise ValueError(f"radius must lie in (0, 1/2], got {r}")
    if points is None:
        m = max(64, 8 * (n + 1))
        # round up to a power of two so coefficient orders share circle values
        points = 1 << (m - 1).bit_length()
    if points < 4 * (n + 1):
        raise ValueError(f"need at least {4 * (n + 1)} points for order {n}, got {points}")
    with ctx.working(32):
        vals = _psi_circle_values(chi, r, 2 * points, ctx)
        rf = to_real(r, ctx)

        def trapezoid(step):
            m_used = (2 * points) // step
            acc = mpc(0)
            for j in range(m_used):
                acc += vals[j * step] * unit_root_at(Fraction(-j * n, m_used), ctx)
            return acc / (m_used * rf**n)

        coarse = trapezoid(2)  # the M-point rule rides on the even-index subset
        fine = trapezoid(1)
        stability = _default_tol(ctx) * 8 / rf**n
        if abs(fine - coarse) > stability:
            raise NonConvergenceError(
                f"Cauchy oracle unstable under point doubling: |delta| = {float(abs(fine - coarse)):.3e}"
            )
        return ensure_finite(+fine)


# --- identity checkers -------------------------------------------------------


def mellin_check(chi: DirichletCharacter, s, ctx: PrecisionContext, tol=None) -> mpf:
    """Relative residual of int_0^oo A_chi(v) v^{s-1} dv = Q_chi(s) on the strip.

    The v > 1 half is folded to (0, 1) with A_chi(1/u) = u A_chibar(u), giving
    int_0^1 A_chi(v) v^{s-1} dv + int_0^1 A_chibar(u) u^{-s} du; each half is
    computed after v = e^{-t}, which removes the endpoint singularity."""
    _require_theorem_domain(chi, "mellin_check")
    with ctx.working(32):
        sc = to_complex(s, ctx)
        if not 0 < sc.real < 1:
            raise ValueError(f"mellin_check needs 0 < Re s < 1, got {s}")
        tolf = mpf(tol) if tol is not None else mpf(10) ** (-max(6, ctx.prec_bits // 20))
        value = _half_mellin(chi, sc, tolf, ctx) + _half_mellin(conjugate(chi), 1 - sc, tolf, ctx)
        reference = q_chi(sc, chi, ctx)
        return +abs(value - reference) / abs(reference)


def _half_mellin(chi: DirichletCharacter, w: mpc, tol: mpf, ctx: PrecisionContext) -> mpc:
    """int_0^1 A_chi(v) v^{w-1} dv after exchanging the integration order:

        int_0^oo f_chibar(x) x^{-w} ( int_0^x f_chi(u) u^{w-1} du ) dx.

    The cumulative inner integral is accumulated once along the panel edges;
    the u^{w-1} endpoint singularity is integrated exactly against the power
    series of f_chi, and x^{-w} cancels the x^w vanishing of the cumulative
    factor, so the outer integrand is analytic on [0, X]."""
    from bisect import bisect_right

    from .lfunc import _fchi_series_coeffs

    chib = conjugate(chi)
    q = chi.label.q
    X = mp.log(40 * (q - 1) ** 2 / tol)
    step = min(mpf("0.5"), mp.pi / q)
    edges = linear_edges(mpf(0), X, step)
    e1 = edges[1]
    # series for f_chi converges on |u| < 2 pi / q; the first edge keeps the
    # ratio at or below 1/2
    n_series = int(mp.ceil(mp.log(tol / 10) / mp.log(e1 * q / (2 * mp.pi))))
    coeffs = _fchi_series_coeffs(chi, n_series + 1, ctx)

    def series_bracket(x):
        # x^{-w} int_0^x = sum_n c_n x^n / (w + n), analytic through x = 0
        acc = mpc(0)
        xp = mpf(1)
        for n_idx in range(n_series + 1):
            acc += coeffs[n_idx] * xp / (w + n_idx)
            xp *= x
        return acc

    sub_rule = gauss_legendre_nodes(32, mp.prec)

    def span_integral(lo, hi):
        mid = (lo + hi) / 2
        half = (hi - lo) / 2
        acc = mpc(0)
        for node, weight in sub_rule:
            u = mid + half * node
            acc += weight * f_chi(chi, u, ctx) * u ** (w - 1)
        return acc * half

    prefix = [mpc(0), series_bracket(e1) * e1**w]
    for lo, hi in zip(edges[1:], edges[2:]):
        prefix.append(prefix[-1] + span_integral(lo, hi))

    def integrand(x):
        if x <= e1:
            bracket = series_bracket(x)
        else:
            k = bisect_right(edges, x) - 1
            bracket = (prefix[k] + span_integral(edges[k], x)) * x**-w
        return f_chi(chib, x, ctx) * bracket

    spec = QuadratureSpec(target_tol=float(tol))
    value, _ = integrate(integrand, edges, spec, ctx)
    return value


def verify_epm1(chi: DirichletCharacter, t_grid, N: int, ctx: PrecisionContext) -> mpf:
    """max over t and both sides of
    |E_chi(+-1 + it) - model_N(t)| / t^{N+1},
    where model_N carries the log/t and 1/t singular terms (kappa) plus the
    Taylor polynomial from c1_coeff / c_minus1_coeff.  Boundedness of the
    returned value as the grid shrinks is the order-of-accuracy statement."""
    _require_theorem_domain(chi, "verify_epm1")
    q = chi.label.q
    worst = mpf(0)
    with ctx.working(32):
        c_log = to_real(Fraction(euler_phi(q), 2 * q), ctx) / mp.pi
        kap = kappa(q, ctx)
        coeffs = {
            1: [c1_coeff(chi, j, ctx) for j in range(N + 1)],
            -1: [c_minus1_coeff(chi, j, ctx) for j in range(N + 1)],
        }
        eis_tol = mpf(10) ** (-max(12, ctx.prec_bits // 6))
        for t in t_grid:
            tf = to_real(t, ctx)
            # slack absorbs the context rounding of a decimal 0.2 input
            if not 0 < tf <= mpf("0.2") + mpf("1e-9"):
                raise ValueError(f"t values must lie in (0, 0.2], got {t}")
            for side in (1, -1):
                sign = 1 if side == 1 else chi.sign_at_minus_one()
                model = -sign * (c_log * mp.log(tf) / tf + kap / tf)
                tp = mpf(1)
                for j in range(N + 1):
                    model += coeffs[side][j] * tp
                    tp *= tf
                actual = eisenstein(chi, mpc(side, tf), ctx, tol=eis_tol)
                worst = max(worst, abs(actual - model) / tf ** (N + 1))
    return +worst
