"""Valuation-and-congruence predicates on nonzero rationals.

A predicate is a boolean tree over two kinds of atoms, evaluated at a
nonzero rational x:

  * valuation atoms  vp(p) REL bound   on v_p(x), plus the parity forms
    odd(vp) / even(vp) and the shorthand neg(vp) for v_p(x) < 0;
  * residue atoms    res(p, k, {r, ...})   meaning x mod p**k lies in the
    set; false whenever x is not integral at p.

Combined with and / or / not / xor. The concrete syntax is parenthesized
text, e.g. "xor(neg(v3), neg(v5))" or "and(vp(2)<=-2, res(3,1,{0,2}))";
parse_predicate and str() round-trip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .errors import DomainError, ParameterError
from .exactnum import require_prime, vp

_RELATIONS = ("<=", "<", "=", ">=", ">", "odd", "even")


class Predicate:
    """Base class; subclasses implement evaluate(x) on nonzero rationals."""

    def evaluate(self, x: Fraction) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class ValAtom(Predicate):
    p: int
    rel: str
    bound: int = 0

    def __post_init__(self):
        require_prime(self.p)
        if self.rel not in _RELATIONS:
            raise ParameterError(f"unknown valuation relation {self.rel!r}")

    def evaluate(self, x: Fraction) -> bool:
        v = vp(x, self.p)
        if self.rel == "<=":
            return v <= self.bound
        if self.rel == "<":
            return v < self.bound
        if self.rel == "=":
            return v == self.bound
        if self.rel == ">=":
            return v >= self.bound
        if self.rel == ">":
            return v > self.bound
        if self.rel == "odd":
            return v % 2 == 1
        return v % 2 == 0

    def __str__(self) -> str:
        if self.rel == "<" and self.bound == 0:
            return f"neg(v{self.p})"
        if self.rel in ("odd", "even"):
            return f"{self.rel}(v{self.p})"
        return f"vp({self.p}){self.rel}{self.bound}"


def neg_valuation(p: int) -> ValAtom:
    """The atom v_p(x) < 0."""
    return ValAtom(p, "<", 0)


@dataclass(frozen=True)
class ResAtom(Predicate):
    p: int
    k: int
    allowed: frozenset[int]

    def __post_init__(self):
        require_prime(self.p)
        if self.k < 1:
            raise ParameterError(f"residue precision must be >= 1, got {self.k}")
        m = self.p ** self.k
        if not all(0 <= r < m for r in self.allowed):
            raise ParameterError(f"residues must lie in [0, {m})")

    def evaluate(self, x: Fraction) -> bool:
        if vp(x, self.p) < 0:
            return False
        m = self.p ** self.k
        return x.numerator * pow(x.denominator, -1, m) % m in self.allowed

    def __str__(self) -> str:
        inner = ",".join(str(r) for r in sorted(self.allowed))
        return f"res({self.p},{self.k},{{{inner}}})"


@dataclass(frozen=True)
class Not(Predicate):
    child: Predicate

    def evaluate(self, x: Fraction) -> bool:
        return not self.child.evaluate(x)

    def __str__(self) -> str:
        return f"not({self.child})"


@dataclass(frozen=True)
class And(Predicate):
    parts: tuple[Predicate, ...]

    def evaluate(self, x: Fraction) -> bool:
        return all(p.evaluate(x) for p in self.parts)

    def __str__(self) -> str:
        return "and(" + ", ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Or(Predicate):
    parts: tuple[Predicate, ...]

    def evaluate(self, x: Fraction) -> bool:
        return any(p.evaluate(x) for p in self.parts)

    def __str__(self) -> str:
        return "or(" + ", ".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class Xor(Predicate):
    left: Predicate
    right: Predicate

    def evaluate(self, x: Fraction) -> bool:
        return self.left.evaluate(x) != self.right.evaluate(x)

    def __str__(self) -> str:
        return f"xor({self.left}, {self.right})"


def exactly_one_negative(p: int, q: int) -> Xor:
    """The set of nonzero x where exactly one of v_p(x), v_q(x) is negative."""
    return Xor(neg_valuation(p), neg_valuation(q))


def eval_predicate(pred: Predicate, x: Fraction | int) -> bool:
    """Evaluate on a nonzero rational; 0 is outside the domain."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("predicates are defined on nonzero rationals only")
    return pred.evaluate(x)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_VP_RE = re.compile(r"vp\((\d+)\)(<=|>=|<|>|=)(-?\d+)$")
_TAG_RE = re.compile(r"(neg|odd|even)\(v(\d+)\)$")
_RES_RE = re.compile(r"res\((\d+),(\d+),\{([\d,]*)\}\)$")


def _split_args(body: str) -> list[str]:
    args, depth, start = [], 0, 0
    for i, ch in enumerate(body):
        if ch in "({":
            depth += 1
        elif ch in ")}":
            depth -= 1
        elif ch == "," and depth == 0:
            args.append(body[start:i])
            start = i + 1
    args.append(body[start:])
    return [a.strip() for a in args]


def parse_predicate(text: str) -> Predicate:
    """Inverse of str() on predicates."""
    s = text.strip()
    for tag, cls in (("and(", And), ("or(", Or)):
        if s.startswith(tag) and s.endswith(")"):
            parts = tuple(parse_predicate(a) for a in _split_args(s[len(tag):-1]))
            return cls(parts)
    if s.startswith("not(") and s.endswith(")"):
        return Not(parse_predicate(s[4:-1]))
    if s.startswith("xor(") and s.endswith(")"):
        args = _split_args(s[4:-1])
        if len(args) != 2:
            raise ParameterError(f"xor takes exactly two arguments: {text!r}")
        return Xor(parse_predicate(args[0]), parse_predicate(args[1]))
    m = _TAG_RE.match(s)
    if m:
        tag, p = m.group(1), int(m.group(2))
        if tag == "neg":
            return neg_valuation(p)
        return ValAtom(p, tag)
    m = _VP_RE.match(s)
    if m:
        return ValAtom(int(m.group(1)), m.group(2), int(m.group(3)))
    m = _RES_RE.match(s)
    if m:
        residues = frozenset(int(r) for r in m.group(3).split(",") if r != "")
        if not residues:
            raise ParameterError(f"empty residue set in {text!r}")
        return ResAtom(int(m.group(1)), int(m.group(2)), residues)
    raise ParameterError(f"cannot parse predicate {text!r}")


# ---------------------------------------------------------------------------
# compiled form for hot loops
# ---------------------------------------------------------------------------

def _vp_pair(n: int, d: int, p: int) -> int:
    # valuation of the reduced fraction n/d, n != 0
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    if v:
        return v
    while d % p == 0:
        d //= p
        v -= 1
    return v


def compile_predicate(pred: Predicate) -> Callable[[int, int], bool]:
    """Compile to a closure on reduced integer pairs (num, den), num != 0."""
    if isinstance(pred, ValAtom):
        p, rel, bound = pred.p, pred.rel, pred.bound
        if rel == "<=":
            return lambda n, d: _vp_pair(n, d, p) <= bound
        if rel == "<":
            return lambda n, d: _vp_pair(n, d, p) < bound
        if rel == "=":
            return lambda n, d: _vp_pair(n, d, p) == bound
        if rel == ">=":
            return lambda n, d: _vp_pair(n, d, p) >= bound
        if rel == ">":
            return lambda n, d: _vp_pair(n, d, p) > bound
        if rel == "odd":
            return lambda n, d: _vp_pair(n, d, p) % 2 == 1
        return lambda n, d: _vp_pair(n, d, p) % 2 == 0
    if isinstance(pred, ResAtom):
        p, m, allowed = pred.p, pred.p ** pred.k, pred.allowed

        def res_check(n: int, d: int) -> bool:
            if d % p == 0:
                return False
            return n * pow(d, -1, m) % m in allowed

        return res_check
    if isinstance(pred, Not):
        f = compile_predicate(pred.child)
        return lambda n, d: not f(n, d)
    if isinstance(pred, And):
        fs = [compile_predicate(p) for p in pred.parts]
        return lambda n, d: all(f(n, d) for f in fs)
    if isinstance(pred, Or):
        fs = [compile_predicate(p) for p in pred.parts]
        return lambda n, d: any(f(n, d) for f in fs)
    if isinstance(pred, Xor):
        fl, fr = compile_predicate(pred.left), compile_predicate(pred.right)
        return lambda n, d: fl(n, d) != fr(n, d)
    raise ParameterError(f"cannot compile predicate of type {type(pred).__name__}")
