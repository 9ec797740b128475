"""Exact rational arithmetic helpers: p-adic valuations, residues, points of P1(Q).

Every quantity in this package is an exact integer or `fractions.Fraction`;
no floating point is used anywhere. Rationals are kept reduced with positive
denominator (Fraction guarantees this), so the valuation of a/b splits as
v_p(a) - v_p(b) with at most one term nonzero.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .errors import DomainError, ParameterError

Rational = Fraction

# ---------------------------------------------------------------------------
# primality and factorization (deterministic, desk scale)
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                 59, 61, 67, 71, 73, 79, 83, 89, 97)

# Miller-Rabin with this witness set is deterministic below 3.3 * 10**24,
# far beyond anything reachable at desk scale.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (trial division, then Miller-Rabin)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def require_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise ParameterError(f"{p!r} is not prime")
    return p


def prime_factors(n: int) -> dict[int, int]:
    """Prime factorization of |n| by trial division; {} for n in {0, 1, -1}."""
    n = abs(n)
    out: dict[int, int] = {}
    if n <= 1:
        return out
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out[f] = e
        f = 3 if f == 2 else f + 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# valuations and residues
# ---------------------------------------------------------------------------

def vp(x: Rational | int, p: int) -> int:
    """p-adic valuation of a nonzero rational: v_p(num) - v_p(den)."""
    require_prime(p)
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of 0 is undefined")
    n = abs(x.numerator)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    if v:
        return v
    d = x.denominator
    while d % p == 0:
        d //= p
        v -= 1
    return v


def residue_mod_pk(x: Rational | int, p: int, k: int = 1) -> int:
    """Residue of a p-integral rational modulo p**k, in [0, p**k)."""
    require_prime(p)
    if k < 1:
        raise ParameterError(f"precision k must be >= 1, got {k}")
    x = Fraction(x)
    if x != 0 and vp(x, p) < 0:
        raise DomainError(f"{x} is not integral at {p}")
    m = p ** k
    return x.numerator * pow(x.denominator, -1, m) % m


# ---------------------------------------------------------------------------
# the rational projective line
# ---------------------------------------------------------------------------

class ProjPoint(NamedTuple):
    """A point (a : c) of P1(Q) in lowest terms, canonical sign on c.

    The point at infinity is (1 : 0); finite points have c > 0.
    """

    a: int
    c: int

    @property
    def is_infinity(self) -> bool:
        return self.c == 0

    def to_rational(self) -> Fraction:
        if self.c == 0:
            raise DomainError("infinity is not a rational number")
        return Fraction(self.a, self.c)

    def __str__(self) -> str:
        if self.c == 0:
            return "inf"
        if self.c == 1:
            return str(self.a)
        return f"{self.a}/{self.c}"


INFINITY = ProjPoint(1, 0)


def reduce_point(a: int, c: int) -> ProjPoint:
    """Reduce a pair of integers to the canonical representative of (a : c)."""
    if a == 0 and c == 0:
        raise DomainError("(0 : 0) is not a point of P1(Q)")
    g = gcd(abs(a), abs(c))
    a //= g
    c //= g
    if c < 0 or (c == 0 and a < 0):
        a, c = -a, -c
    return ProjPoint(a, c)


def point_of(x: Rational | int) -> ProjPoint:
    x = Fraction(x)
    return ProjPoint(x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# adelic ball traces on Q
# ---------------------------------------------------------------------------

def ball_trace_contains(x: Rational | int, m: Rational | int, y: Rational | int) -> bool:
    """Whether y lies in x + mZ, the rational trace of the adelic ball x + m*Zhat."""
    m = Fraction(m)
    if m == 0:
        raise ParameterError("ball modulus m must be nonzero")
    return ((Fraction(y) - Fraction(x)) / m).denominator == 1


# ---------------------------------------------------------------------------
# parsing / printing
# ---------------------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    """Parse 'a' or 'a/b' into a Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParameterError(f"cannot parse rational from {text!r}") from exc


def format_rational(x: Rational | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_point(text: str) -> ProjPoint:
    """Parse 'inf', 'a' or 'a/c' into a point of P1(Q)."""
    text = text.strip()
    if text == "inf":
        return INFINITY
    return point_of(parse_rational(text))
