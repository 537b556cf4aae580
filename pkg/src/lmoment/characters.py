"""Dirichlet characters mod q in the Conrey parameterization.

A character is stored as an exact exponent table: chi(m) = e(k/d) with k an
integer exponent and d the multiplicative order, or 0 when gcd(m, q) > 1.
Keeping exponents exact (rather than floating values) lets identity tests run
without tolerance and defers all rounding to the moment formulas themselves.

Conrey labels follow the convention used by the LMFDB: for an odd prime p the
generator is the least primitive root mod p^2 (hence a primitive root mod p^e
for every e), powers of 2 split as <-1, 5>, and the pairing chi_{q,n}(m) is
assembled multiplicatively from discrete logs on the cyclic factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from mpmath import mpc

from .arith import PrecisionContext, unit_root_at


@dataclass(frozen=True)
class CharacterLabel:
    """(q, n) with n the Conrey index, coprime to q, normalized to [1, q]."""

    q: int
    n: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"modulus must be >= 1, got {self.q}")
        if not (1 <= self.n <= self.q):
            raise ValueError(f"Conrey index {self.n} out of range for modulus {self.q}")
        if gcd(self.n, self.q) != 1:
            raise ValueError(f"Conrey index must be coprime to the modulus: ({self.q}, {self.n})")


def _factorize(q: int) -> list[tuple[int, int]]:
    out = []
    d = 2
    while d * d <= q:
        if q % d == 0:
            e = 0
            while q % d == 0:
                q //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if q > 1:
        out.append((q, 1))
    return out


@lru_cache(maxsize=None)
def _conrey_generator(p: int) -> int:
    # Least g that generates (Z/p^2)^*; such a g is a primitive root mod p^e
    # for every e >= 1, which is what makes the labeling well defined.
    phi = p - 1
    prime_divisors = [f for f, _ in _factorize(phi)]
    g = 2
    while True:
        if all(pow(g, phi // r, p) != 1 for r in prime_divisors) and pow(g, phi, p * p) != 1:
            return g
        g += 1


@lru_cache(maxsize=None)
def _odd_logs(p: int, e: int) -> dict[int, int]:
    """Discrete log table x -> k with x = g^k mod p^e, g the Conrey generator."""
    pe = p**e
    phi = pe - pe // p
    g = _conrey_generator(p)
    logs = {}
    x = 1
    for k in range(phi):
        logs[x] = k
        x = (x * g) % pe
    return logs


@lru_cache(maxsize=None)
def _two_logs(e: int) -> dict[int, tuple[int, int]]:
    """For 2^e with e >= 3: x -> (eps, a) with x = (-1)^eps * 5^a mod 2^e."""
    pe = 1 << e
    logs = {}
    x = 1
    for a in range(1 << (e - 2)):
        logs[x] = (0, a)
        logs[pe - x] = (1, a)
        x = (x * 5) % pe
    return logs


def _component_exponent(p: int, e: int, n: int, m: int) -> Fraction:
    """Exponent of chi_{p^e, n}(m) as a fraction of a full turn."""
    pe = p**e
    n %= pe
    m %= pe
    if p == 2:
        if e == 1:
            return Fraction(0)
        if e == 2:
            en = 0 if n == 1 else 1
            em = 0 if m == 1 else 1
            return Fraction(en * em, 2)
        en, an = _two_logs(e)[n]
        em, am = _two_logs(e)[m]
        return Fraction(en * em, 2) + Fraction(an * am, 1 << (e - 2))
    logs = _odd_logs(p, e)
    phi = pe - pe // p
    return Fraction(logs[n] * logs[m], phi)


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod q with exact value table chi(m) = e(exponents[m]/order)."""

    label: CharacterLabel
    order: int
    exponents: tuple  # index m in [0, q-1]; entry int in [0, order) or None when chi(m) = 0
    parity: int  # 0 even, 1 odd
    conductor: int

    @property
    def q(self) -> int:
        return self.label.q

    @property
    def primitive(self) -> bool:
        return self.conductor == self.label.q

    @property
    def principal(self) -> bool:
        return self.conductor == 1

    def value_exponent(self, m: int) -> Fraction | None:
        """Exact exponent of chi(m) as a fraction of a turn, or None when chi(m) = 0."""
        k = self.exponents[m % self.q]
        if k is None:
            return None
        return Fraction(k, self.order)

    def sign_at_minus_one(self) -> int:
        return -1 if self.parity else 1

    def __call__(self, m: int, ctx: PrecisionContext | None = None) -> mpc:
        return char_value(self, m, ctx or PrecisionContext())

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if self.q != other.q:
            raise ValueError("can only multiply characters of the same modulus")
        n = (self.label.n * other.label.n) % self.q
        return character(self.q, n if n else self.q)


@lru_cache(maxsize=None)
def character(q: int, n: int) -> DirichletCharacter:
    """Construct chi_{q,n}; requires gcd(n, q) = 1."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    n %= q
    if n == 0:
        n = q  # only valid when q = 1
    label = CharacterLabel(q, n)

    factors = _factorize(q)
    turns: list[Fraction | None] = []
    for m in range(q):
        if gcd(m, q) != 1:
            turns.append(None)
            continue
        t = sum((_component_exponent(p, e, n, m) for p, e in factors), Fraction(0))
        turns.append(t - (t.numerator // t.denominator))
    order = lcm(*[t.denominator for t in turns if t is not None], 1)
    exponents = tuple(None if t is None else (t.numerator * (order // t.denominator)) % order for t in turns)

    minus_one = exponents[(q - 1) % q]
    parity = 0 if minus_one == 0 else 1

    cond = q
    for f in sorted(_divisors(q)):
        if all(exponents[m % q] == 0 for m in range(1, q + 1, f) if gcd(m, q) == 1):
            cond = f
            break
    return DirichletCharacter(label=label, order=order, exponents=exponents, parity=parity, conductor=cond)


def _divisors(q: int) -> list[int]:
    out = []
    d = 1
    while d * d <= q:
        if q % d == 0:
            out.append(d)
            if d != q // d:
                out.append(q // d)
        d += 1
    return out


def char_value(chi: DirichletCharacter, m: int, ctx: PrecisionContext) -> mpc:
    """chi(m) as a complex number at context precision (exact root of unity or 0)."""
    t = chi.value_exponent(m)
    if t is None:
        return mpc(0)
    return unit_root_at(t, ctx)


def conjugate(chi: DirichletCharacter) -> DirichletCharacter:
    """The conjugate character; its Conrey index is the inverse of n mod q."""
    q = chi.label.q
    if q == 1:
        return chi
    return character(q, pow(chi.label.n, -1, q))


def parity(chi: DirichletCharacter) -> int:
    return chi.parity


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.primitive


def conductor(chi: DirichletCharacter) -> int:
    return chi.conductor


@dataclass(frozen=True)
class GaussSumValue:
    value: mpc
    character: CharacterLabel


_GAUSS_CACHE: dict[tuple[CharacterLabel, int], GaussSumValue] = {}


def gauss_sum(chi: DirichletCharacter, ctx: PrecisionContext) -> GaussSumValue:
    """tau(chi) = sum_{a=1}^{q-1} chi(a) e(a/q), by direct summation.

    For q = 1 the defining sum is empty; the standard convention tau = 1 is
    used so that |tau|^2 = q holds for every primitive character.
    """
    key = (chi.label, ctx.prec_bits)
    cached = _GAUSS_CACHE.get(key)
    if cached is not None:
        return cached
    q = chi.label.q
    with ctx.working():
        if q == 1:
            value = mpc(1)
        else:
            value = mpc(0)
            for a in range(1, q):
                t = chi.value_exponent(a)
                if t is None:
                    continue
                value += unit_root_at(t + Fraction(a, q), ctx)
    result = GaussSumValue(value=value, character=chi.label)
    _GAUSS_CACHE[key] = result
    return result


def general_gauss_sum(n: int, chi: DirichletCharacter, ctx: PrecisionContext) -> mpc:
    """tau(n, chi) = sum_{a=1}^{q-1} chi(a) e(an/q)."""
    q = chi.label.q
    with ctx.working():
        if q == 1:
            return mpc(1)
        value = mpc(0)
        for a in range(1, q):
            t = chi.value_exponent(a)
            if t is None:
                continue
            value += unit_root_at(t + Fraction(a * n, q), ctx)
        return value


def enumerate_primitive(q: int) -> list[CharacterLabel]:
    """All labels of conductor exactly q, ascending by Conrey index."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    if q == 1:
        return [CharacterLabel(1, 1)]
    return [
        CharacterLabel(q, n)
        for n in range(1, q + 1)
        if gcd(n, q) == 1 and character(q, n).conductor == q
    ]


def euler_phi(q: int) -> int:
    phi = q
    for p, _ in _factorize(q):
        phi -= phi // p
    return phi
