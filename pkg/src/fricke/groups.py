"""Rational Fricke groups: generators, word evaluation, element classification.

The two-parameter family here is generated by a pair of hyperbolic matrices
determined by rationals (u2, 2t) with 0 < u2 < t - 1. All matrices are kept
as primitive integer 2x2 matrices with positive determinant, up to sign: the
projective action on P1(Q) never needs the irrational scalar normalizations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import reduce as _reduce
from math import gcd, isqrt
from typing import NamedTuple

from .errors import DomainError, InternalCheckError, InvalidGroupError, ParameterError
from .exactnum import ProjPoint, Rational, format_rational, prime_factors, reduce_point
from .words import Word, parity, parse_word, reduced_words

# ---------------------------------------------------------------------------
# projective integer matrices
# ---------------------------------------------------------------------------

class ProjMatrix(NamedTuple):
    """Primitive integer matrix [[a, b], [c, d]] up to sign, det > 0.

    Canonical sign: the first nonzero entry in the order a, b, c, d is
    positive. Scale-invariant quantities (the sign of tr^2 - 4 det, the
    ratio tr^2 / det) are therefore well defined.
    """

    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def trace(self) -> int:
        return self.a + self.d

    def __str__(self) -> str:
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = ProjMatrix(1, 0, 0, 1)


def normalize_matrix(a: int, b: int, c: int, d: int) -> ProjMatrix:
    """Divide out the content and fix the canonical sign."""
    g = gcd(gcd(abs(a), abs(b)), gcd(abs(c), abs(d)))
    if g == 0:
        raise ParameterError("zero matrix is not projective")
    if g > 1:
        a, b, c, d = a // g, b // g, c // g, d // g
    for e in (a, b, c, d):
        if e:
            if e < 0:
                a, b, c, d = -a, -b, -c, -d
            break
    if a * d - b * c <= 0:
        raise ParameterError("matrix must have positive determinant")
    return ProjMatrix(a, b, c, d)


def matrix_from_rows(a: Rational, b: Rational, c: Rational, d: Rational) -> ProjMatrix:
    """Clear denominators of a rational matrix and normalize."""
    entries = [Fraction(x) for x in (a, b, c, d)]
    lcm = _reduce(lambda p, q: p * q // gcd(p, q), (x.denominator for x in entries), 1)
    return normalize_matrix(*(int(x * lcm) for x in entries))


def mat_mul(m: ProjMatrix, n: ProjMatrix) -> ProjMatrix:
    return normalize_matrix(
        m.a * n.a + m.b * n.c,
        m.a * n.b + m.b * n.d,
        m.c * n.a + m.d * n.c,
        m.c * n.b + m.d * n.d,
    )


def mat_inv(m: ProjMatrix) -> ProjMatrix:
    # adjugate; projectively the inverse, and det stays positive
    return normalize_matrix(m.d, -m.b, -m.c, m.a)


def apply(m: ProjMatrix, x: ProjPoint) -> ProjPoint:
    """Projective action (a : c) -> (m11 a + m12 c : m21 a + m22 c)."""
    return reduce_point(m.a * x.a + m.b * x.c, m.c * x.a + m.d * x.c)


def parse_matrix(text: str) -> ProjMatrix:
    """Parse '[[a,b],[c,d]]' with integer entries."""
    stripped = text.replace(" ", "")
    if not (stripped.startswith("[[") and stripped.endswith("]]")):
        raise ParameterError(f"cannot parse matrix from {text!r}")
    try:
        rows = stripped[2:-2].split("],[")
        (a, b), (c, d) = (tuple(int(v) for v in row.split(",")) for row in rows)
    except ValueError as exc:
        raise ParameterError(f"cannot parse matrix from {text!r}") from exc
    return normalize_matrix(a, b, c, d)


# ---------------------------------------------------------------------------
# element classification and fixed points
# ---------------------------------------------------------------------------

class ElementClass(Enum):
    HYPERBOLIC = "hyperbolic"
    PARABOLIC = "parabolic"
    ELLIPTIC = "elliptic"
    IDENTITY = "identity"


def classify_element(m: ProjMatrix) -> ElementClass:
    """Classify by the sign of tr^2 - 4 det (scale invariant)."""
    if m.b == 0 and m.c == 0 and m.a == m.d:
        return ElementClass.IDENTITY
    disc = m.trace() ** 2 - 4 * m.det()
    if disc > 0:
        return ElementClass.HYPERBOLIC
    if disc == 0:
        return ElementClass.PARABOLIC
    return ElementClass.ELLIPTIC


@dataclass(frozen=True)
class FixedPointResult:
    """Fixed points of a non-identity matrix acting on P1.

    kind is 'rational_pair' (two points of P1(Q)), 'irrational_pair'
    (the fixed points are not rational: hyperbolic with non-square
    discriminant, or elliptic), or 'single' (parabolic).
    """

    kind: str
    points: tuple[ProjPoint, ...]


def fixed_points(m: ProjMatrix) -> FixedPointResult:
    """Solve c x^2 + (d - a) x - b = 0 over P1(Q)."""
    cls = classify_element(m)
    if cls is ElementClass.IDENTITY:
        raise DomainError("every point is fixed by the identity")
    if cls is ElementClass.PARABOLIC:
        if m.c == 0:
            return FixedPointResult("single", (ProjPoint(1, 0),))
        return FixedPointResult("single", (reduce_point(m.a - m.d, 2 * m.c),))
    disc = (m.a - m.d) ** 2 + 4 * m.b * m.c  # equals tr^2 - 4 det
    if disc < 0:
        return FixedPointResult("irrational_pair", ())
    s = isqrt(disc)
    if s * s != disc:
        return FixedPointResult("irrational_pair", ())
    if m.c == 0:
        return FixedPointResult(
            "rational_pair", (ProjPoint(1, 0), reduce_point(m.b, m.d - m.a))
        )
    p1 = reduce_point(m.a - m.d + s, 2 * m.c)
    p2 = reduce_point(m.a - m.d - s, 2 * m.c)
    return FixedPointResult("rational_pair", (p1, p2))


# ---------------------------------------------------------------------------
# the group
# ---------------------------------------------------------------------------

# Fixed parabolic word g2^-1 g1 g2 g1^-1: upper triangular, translation -2t.
PARABOLIC_WORD: Word = "bABa"
# Its inverse translates by +2t.
TRANSLATION_WORD: Word = "AbaB"
# The commutator g1 g2 g1^-1 g2^-1 is parabolic with fixed point u2.
COMMUTATOR_WORD: Word = "ABab"

# Schreier generators of the index-4 kernel of the parity map, with respect
# to the coset transversal {1, g1, g2, g1 g2}.
LAMBDA_WORDS: tuple[Word, ...] = ("AA", "BB", "BAba", "ABAb", "ABBa")


@dataclass(frozen=True)
class FrickeGroup:
    """Group of the family indexed by (u2, 2t), with cached generator data."""

    u2: Fraction
    t: Fraction
    two_t: Fraction
    gen1: ProjMatrix
    gen2: ProjMatrix
    translation: Fraction
    parabolic_word: Word
    support_primes: frozenset[int]
    letters: dict[str, ProjMatrix] = field(repr=False, compare=False)

    @property
    def name(self) -> str:
        return f"({format_rational(self.u2)}, {format_rational(self.two_t)})"

    def letter_matrix(self, ch: str) -> ProjMatrix:
        try:
            return self.letters[ch]
        except KeyError:
            raise ParameterError(f"invalid generator letter {ch!r}") from None


def word_matrix(g: FrickeGroup, w: Word) -> ProjMatrix:
    """Evaluate a word of generator letters; the empty word is the identity."""
    m = IDENTITY
    for ch in w:
        m = mat_mul(m, g.letter_matrix(ch))
    return m


def _eval_word(letters: dict[str, ProjMatrix], w: Word) -> ProjMatrix:
    m = IDENTITY
    for ch in w:
        m = mat_mul(m, letters[ch])
    return m


def make_group(u2: Rational, two_t: Rational) -> FrickeGroup:
    """Validate 0 < u2 < t - 1 and build generators, parabolic data, supports."""
    u2 = Fraction(u2)
    two_t = Fraction(two_t)
    t = two_t / 2
    if u2 <= 0:
        raise InvalidGroupError(f"need 0 < u2: got u2 = {format_rational(u2)}")
    if u2 >= t - 1:
        raise InvalidGroupError(
            f"need u2 < t - 1: got u2 = {format_rational(u2)}, "
            f"t - 1 = {format_rational(t - 1)}"
        )
    gen1 = matrix_from_rows(t - 1, u2, 1, 1)
    gen2 = matrix_from_rows(u2, u2, 1, t - u2)
    letters = {"A": gen1, "a": mat_inv(gen1), "B": gen2, "b": mat_inv(gen2)}

    # construction-time guard: the fixed parabolic word must translate by -2t
    p = _eval_word(letters, PARABOLIC_WORD)
    if p.c != 0 or p.a != p.d or Fraction(p.b, p.d) != -two_t:
        raise InternalCheckError(
            f"word {PARABOLIC_WORD} evaluated to {p}, expected translation by {-two_t}"
        )

    return FrickeGroup(
        u2=u2,
        t=t,
        two_t=two_t,
        gen1=gen1,
        gen2=gen2,
        translation=two_t,
        parabolic_word=PARABOLIC_WORD,
        support_primes=_support_primes(letters),
        letters=letters,
    )


def parabolic_at_infinity(g: FrickeGroup) -> tuple[Word, Fraction]:
    """The fixed word g2^-1 g1 g2 g1^-1 and its exact translation length."""
    m = word_matrix(g, PARABOLIC_WORD)
    if m.c != 0 or m.a != m.d:
        raise InternalCheckError(f"{PARABOLIC_WORD} evaluated to non-parabolic {m}")
    return PARABOLIC_WORD, Fraction(m.b, m.d)


def lambda_generators() -> list[Word]:
    """Free generators of the parity kernel (rank 5, independent of parameters)."""
    return [parse_word(w) for w in LAMBDA_WORDS]


def _support_primes(letters: dict[str, ProjMatrix]) -> frozenset[int]:
    """Primes in the denominators of the det-1 normalized kernel generators."""
    primes: set[int] = set()
    for w in LAMBDA_WORDS:
        m = _eval_word(letters, w)
        det = m.det()
        s = isqrt(det)
        if s * s != det:
            raise InternalCheckError(
                f"kernel generator {w} has non-square determinant {det}"
            )
        for entry in m:
            primes.update(prime_factors(Fraction(entry, s).denominator))
    return frozenset(primes)


def support_primes(g: FrickeGroup) -> frozenset[int]:
    return g.support_primes


# ---------------------------------------------------------------------------
# arithmeticity screen
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScreenResult:
    """Outcome of the trace screen: a non-integral trace square certifies
    non-arithmeticity; 'inconclusive' decides nothing."""

    status: str  # "not_arithmetic" | "inconclusive"
    witness: Word | None = None
    value: Fraction | None = None

    @property
    def is_negative_certificate(self) -> bool:
        return self.status == "not_arithmetic"


def arithmeticity_screen(g: FrickeGroup, max_len: int) -> ScreenResult:
    """Scan parity-kernel words up to max_len for a non-integral tr^2/det.

    Elements of the kernel are rational matrices up to scale, so tr^2/det is
    the square of a rational trace; for a group commensurable with the
    modular group it would be a rational algebraic integer, hence in Z.
    """
    if max_len < 2:
        raise ParameterError(f"screen length must be >= 2, got {max_len}")
    for w in reduced_words(max_len, min_len=1):
        if parity(w) != (0, 0):
            continue
        m = word_matrix(g, w)
        q = Fraction(m.trace() ** 2, m.det())
        if q.denominator != 1:
            return ScreenResult("not_arithmetic", witness=w, value=q)
    return ScreenResult("inconclusive")
