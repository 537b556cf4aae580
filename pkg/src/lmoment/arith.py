"""Precision-parametrized arithmetic substrate.

Everything numeric in this package runs through a PrecisionContext carrying the
working mantissa size in bits.  mpmath supplies the underlying arbitrary-precision
binary floats; this module wraps the handful of scalar operations the rest of the
package needs (constants, roots of unity, Gamma, digamma) so that precision
handling and domain errors live in one place.

Operations evaluate with a few guard bits above the context precision and raise
instead of letting NaN or infinity escape into a quadrature sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf, mpc

DEFAULT_PREC_BITS = 192

# Guard bits used for intermediate evaluation so that results are good to the
# full context precision after rounding.
GUARD_BITS = 16


class NonFiniteError(ArithmeticError):
    """A computation produced NaN or an infinity."""


class PrecisionError(ArithmeticError):
    """The working precision was insufficient to certify a result."""


class NonConvergenceError(ArithmeticError):
    """An iterative scheme (series tail, quadrature refinement) failed to settle."""


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in bits; immutable and safe to share."""

    prec_bits: int = DEFAULT_PREC_BITS

    def __post_init__(self) -> None:
        if self.prec_bits < 64:
            raise ValueError(f"prec_bits must be >= 64, got {self.prec_bits}")

    @property
    def eps(self) -> mpf:
        """Unit-roundoff proxy 2^(1 - prec_bits)."""
        with mp.workprec(self.prec_bits):
            return mpf(2) ** (1 - self.prec_bits)

    def tolerance(self, slack_bits: int) -> mpf:
        """2^(slack_bits - prec_bits); the standard shape of our error budgets."""
        with mp.workprec(self.prec_bits):
            return mpf(2) ** (slack_bits - self.prec_bits)

    def working(self, extra_bits: int = GUARD_BITS):
        """Context manager setting mpmath precision to prec_bits + extra_bits."""
        return mp.workprec(self.prec_bits + extra_bits)


def ensure_finite(value):
    """Reject NaN/inf; silent propagation would poison downstream sums."""
    if isinstance(value, mpc):
        if not (mp.isfinite(value.real) and mp.isfinite(value.imag)):
            raise NonFiniteError(f"non-finite value {value}")
    else:
        if not mp.isfinite(value):
            raise NonFiniteError(f"non-finite value {value}")
    return value


def to_real(x, ctx: PrecisionContext) -> mpf:
    """Convert int/Fraction/float/mpf to mpf at context precision, exactly when possible."""
    with ctx.working():
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return mpf(x)


def to_complex(x, ctx: PrecisionContext) -> mpc:
    with ctx.working():
        if isinstance(x, Fraction):
            return mpc(mpf(x.numerator) / x.denominator)
        return mpc(x)


def const_pi(ctx: PrecisionContext) -> mpf:
    with ctx.working():
        return ensure_finite(+mp.pi)


def const_euler_gamma(ctx: PrecisionContext) -> mpf:
    with ctx.working():
        return ensure_finite(+mp.euler)


def root_of_unity(n: int, q: int, ctx: PrecisionContext) -> mpc:
    """e(n/q) = exp(2*pi*i*n/q) with n reduced mod q."""
    if q < 1:
        raise ValueError(f"root_of_unity needs q >= 1, got {q}")
    n %= q
    with ctx.working():
        # expjpi(x) = e^(i*pi*x); argument 2n/q is formed as one exact division
        return ensure_finite(mp.expjpi(mpf(2 * n) / q))


def unit_root_at(exponent: Fraction, ctx: PrecisionContext) -> mpc:
    """e(exponent) for an exact rational exponent; used to fuse chi(m) * xi^m."""
    exponent -= exponent.numerator // exponent.denominator  # reduce to [0, 1)
    with ctx.working():
        return ensure_finite(mp.expjpi(mpf(2 * exponent.numerator) / exponent.denominator))


def gamma_fn(z, ctx: PrecisionContext) -> mpc:
    """Gamma(z); rejects the poles at non-positive integers."""
    with ctx.working():
        w = mpc(z)
        if w.imag == 0 and w.real <= 0 and mp.isint(w.real):
            raise ValueError(f"gamma_fn pole at {z}")
        return ensure_finite(mp.gamma(w))


def digamma(x, ctx: PrecisionContext) -> mpf:
    """Digamma on the positive real axis (all we need for K(alpha))."""
    with ctx.working():
        v = to_real(x, ctx)
        if v <= 0:
            raise ValueError(f"digamma requires x > 0, got {x}")
        return ensure_finite(mp.digamma(v))
