"""Obstruction checks, invariant-set verification and mining, and the verdict.

The checks certify that the finite cusp set of a group avoids some open
region of a p-adic field or a product of two of them, and therefore cannot
be all of Q. Each returned Witness carries enough data to be rechecked from
scratch. The empirical tools (verify_invariance, mine_invariants) produce
evidence, never proof; a Pass means no counterexample was found.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import EmptyPredicateError, ParameterError
from .exactnum import (
    ProjPoint,
    format_rational,
    is_prime,
    prime_factors,
    require_prime,
    residue_mod_pk,
    vp,
)
from .groups import (
    FrickeGroup,
    ScreenResult,
    apply,
    arithmeticity_screen,
    classify_element,
    ElementClass,
    word_matrix,
)
from .predicates import (
    And,
    Predicate,
    ResAtom,
    ValAtom,
    compile_predicate,
    exactly_one_negative,
)
from .words import Word

SAMPLE_BOUND = 10 ** 4      # numerators in [-B, B], denominators in [1, B]
_RETRY_LIMIT = 10 ** 5      # consecutive rejected draws before giving up

# ---------------------------------------------------------------------------
# witnesses
# ---------------------------------------------------------------------------

SQUARE_OBSTRUCTION = "square_obstruction"
TWO_PRIME_OBSTRUCTION = "two_prime_obstruction"
INTEGER_T_VIOLATION = "integer_t_violation"
SPECIAL_POINT = "special_point"


@dataclass(frozen=True)
class Witness:
    """Machine-recheckable certificate produced by one of the checks."""

    kind: str
    primes: tuple[int, ...] = ()
    detail: str = ""
    predicate: Predicate | None = None
    word: Word | None = None
    point: ProjPoint | None = None
    clause: str | None = None   # integer-t checks: "a", "b" or "c"
    branch: int | None = None   # square check: 1 or 2

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "primes": list(self.primes), "detail": self.detail}
        if self.predicate is not None:
            out["predicate"] = str(self.predicate)
        if self.word is not None:
            out["word"] = self.word
        if self.point is not None:
            out["point"] = str(self.point)
        if self.clause is not None:
            out["clause"] = self.clause
        if self.branch is not None:
            out["branch"] = self.branch
        return out


def recheck_witness(g: FrickeGroup, w: Witness) -> bool:
    """Re-derive the certified facts of a witness from scratch."""
    if w.kind == SQUARE_OBSTRUCTION:
        return check_square_obstruction(g, w.primes[0]) is not None
    if w.kind == TWO_PRIME_OBSTRUCTION:
        return check_two_prime_obstruction(g, *w.primes) is not None
    if w.kind == INTEGER_T_VIOLATION:
        report = check_integer_t_conditions(g)
        return report.applicable and any(v.clause == w.clause for v in report.witnesses)
    if w.kind == SPECIAL_POINT:
        m = word_matrix(g, w.word)
        return (
            classify_element(m) is ElementClass.HYPERBOLIC
            and apply(m, w.point) == w.point
        )
    raise ParameterError(f"unknown witness kind {w.kind!r}")


# ---------------------------------------------------------------------------
# the obstruction criteria
# ---------------------------------------------------------------------------

def check_square_obstruction(g: FrickeGroup, p: int) -> Witness | None:
    """Cusps avoid a p-adic region when v_p(u2) is low enough relative to v_p(t).

    Fires when v_p(t) >= 0 and v_p(u2) <= -2, or when v_p(t) < 0 and
    v_p(u2) <= 2(v_p(t) - 1); either way the finite cusps are not dense
    in Q_p.
    """
    require_prime(p)
    vt = vp(g.t, p)
    vu = vp(g.u2, p)
    if vt >= 0 and vu <= -2:
        return Witness(
            kind=SQUARE_OBSTRUCTION,
            primes=(p,),
            branch=1,
            detail=f"v_{p}(t) = {vt} >= 0 and v_{p}(u2) = {vu} <= -2",
        )
    if vt < 0 and vu <= 2 * (vt - 1):
        return Witness(
            kind=SQUARE_OBSTRUCTION,
            primes=(p,),
            branch=2,
            detail=f"v_{p}(t) = {vt} < 0 and v_{p}(u2) = {vu} <= 2(v_{p}(t)-1) = {2 * (vt - 1)}",
        )
    return None


def check_two_prime_obstruction(g: FrickeGroup, p: int, q: int) -> Witness | None:
    """Cusps avoid the set where exactly one of v_p, v_q is negative.

    Fires when v_p(u2) = v_q(u2) = -1 and t is integral at both primes;
    the witness carries that invariant set as a predicate.
    """
    require_prime(p)
    require_prime(q)
    if p == q:
        raise ParameterError("the two primes must be distinct")
    if vp(g.u2, p) != -1 or vp(g.u2, q) != -1:
        return None
    if vp(g.t, p) < 0 or vp(g.t, q) < 0:
        return None
    p, q = min(p, q), max(p, q)
    return Witness(
        kind=TWO_PRIME_OBSTRUCTION,
        primes=(p, q),
        predicate=exactly_one_negative(p, q),
        detail=(
            f"v_{p}(u2) = v_{q}(u2) = -1 and t is integral at {p} and {q}; "
            f"cusps avoid the set where exactly one of v_{p}, v_{q} is negative"
        ),
    )


@dataclass(frozen=True)
class IntegerTReport:
    """Result of the integer-t clause checks; applicable is False when t is not
    an integer, in which case no clause was evaluated."""

    applicable: bool
    witnesses: tuple[Witness, ...] = ()


def check_integer_t_conditions(g: FrickeGroup) -> IntegerTReport:
    """For integer t, check the three necessary conditions (a), (b), (c).

    (a) the denominator of u2 is 1 or prime; (b) if that denominator is an
    odd prime it does not divide t; (c) for every odd prime q dividing t
    with u2 integral at q, u2 is 0 or -1 mod q. Any violation certifies
    that the group is not pseudomodular.
    """
    if g.t.denominator != 1:
        return IntegerTReport(applicable=False)
    t = int(g.t)
    den = g.u2.denominator
    witnesses: list[Witness] = []
    if den != 1 and not is_prime(den):
        witnesses.append(
            Witness(
                kind=INTEGER_T_VIOLATION,
                clause="a",
                primes=tuple(sorted(prime_factors(den))),
                detail=f"denominator {den} of u2 is composite",
            )
        )
    elif den != 1 and den % 2 == 1 and t % den == 0:
        witnesses.append(
            Witness(
                kind=INTEGER_T_VIOLATION,
                clause="b",
                primes=(den,),
                detail=f"denominator {den} of u2 is an odd prime dividing t = {t}",
            )
        )
    for q in sorted(prime_factors(t)):
        if q == 2 or vp(g.u2, q) < 0:
            continue
        r = residue_mod_pk(g.u2, q, 1)
        if r not in (0, q - 1):
            witnesses.append(
                Witness(
                    kind=INTEGER_T_VIOLATION,
                    clause="c",
                    primes=(q,),
                    detail=f"u2 = {r} mod {q}, not 0 or -1, with {q} an odd prime dividing t = {t}",
                )
            )
    return IntegerTReport(applicable=True, witnesses=tuple(witnesses))


def check_density_criterion(g: FrickeGroup) -> bool:
    """Whether finite cusps are dense in every finite product of p-adic fields.

    True when t is a prime integer, u2 has prime denominator different from
    t, and u2 is 0 or -1 mod t.
    """
    if g.t.denominator != 1:
        return False
    t = int(g.t)
    if not is_prime(t):
        return False
    den = g.u2.denominator
    if not is_prime(den) or den == t:
        return False
    return residue_mod_pk(g.u2, t, 1) in (0, t - 1)


# ---------------------------------------------------------------------------
# invariance verification by seeded sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InvarianceResult:
    """Outcome of sampling-based invariance checking. A pass is evidence
    that the generators map the set into itself, not a proof."""

    passed: bool
    samples: int
    seed: int
    counterexample: tuple[Fraction, str] | None = None
    image: Fraction | None = None  # None also encodes an image of 0 or infinity

    def __bool__(self) -> bool:
        return self.passed


def _sample_in_predicate(rng: random.Random, test, bound: int) -> tuple[int, int]:
    """Rejection-sample a reduced pair (n, d) with n/d nonzero in the set."""
    misses = 0
    while True:
        n = rng.randint(-bound, bound)
        d = rng.randint(1, bound)
        if n != 0:
            h = gcd(abs(n), d)
            n_, d_ = n // h, d // h
            if test(n_, d_):
                return n_, d_
        misses += 1
        if misses >= _RETRY_LIMIT:
            raise EmptyPredicateError(
                f"no sample satisfied the predicate in {_RETRY_LIMIT} draws"
            )


def verify_invariance(
    pred: Predicate,
    g: FrickeGroup,
    n: int,
    seed: int,
    bound: int = SAMPLE_BOUND,
) -> InvarianceResult:
    """Sample n rationals in the set and check all four generator letters.

    An image equal to 0 or infinity counts as a counterexample, since the
    sets under study live inside the nonzero rationals.
    """
    if n < 1:
        raise ParameterError(f"sample count must be >= 1, got {n}")
    test = compile_predicate(pred)
    mats = [(ch, g.letter_matrix(ch)) for ch in "AaBb"]
    rng = random.Random(seed)
    for i in range(n):
        xn, xd = _sample_in_predicate(rng, test, bound)
        for ch, m in mats:
            yn = m.a * xn + m.b * xd
            yd = m.c * xn + m.d * xd
            if yn == 0 or yd == 0:
                return InvarianceResult(
                    passed=False,
                    samples=i + 1,
                    seed=seed,
                    counterexample=(Fraction(xn, xd), ch),
                    image=None,
                )
            h = gcd(abs(yn), abs(yd))
            yn, yd = yn // h, yd // h
            if yd < 0:
                yn, yd = -yn, -yd
            if not test(yn, yd):
                return InvarianceResult(
                    passed=False,
                    samples=i + 1,
                    seed=seed,
                    counterexample=(Fraction(xn, xd), ch),
                    image=Fraction(yn, yd),
                )
    return InvarianceResult(passed=True, samples=n, seed=seed)


# ---------------------------------------------------------------------------
# invariant mining
# ---------------------------------------------------------------------------

MINER_VERIFY_SAMPLES = 10 ** 4
MINER_POOL_SIZE = 1000
_RES_ATOM_PRIME_CAP = 7   # residue subsets are enumerated only for p <= 7


def _candidate_atoms(primes: Sequence[int]) -> list[Predicate]:
    atoms: list[Predicate] = []
    for p in primes:
        for b in range(-2, 3):
            atoms.append(ValAtom(p, "<=", b))
        for b in range(-2, 3):
            atoms.append(ValAtom(p, ">=", b))
        for b in range(-2, 3):
            atoms.append(ValAtom(p, "=", b))
        atoms.append(ValAtom(p, "odd"))
        atoms.append(ValAtom(p, "even"))
    for p in primes:
        if p <= _RES_ATOM_PRIME_CAP:
            residues = range(p)
            for size in range(1, p):
                for subset in itertools.combinations(residues, size):
                    atoms.append(ResAtom(p, 1, frozenset(subset)))
    return atoms


def _atom_prime(atom: Predicate) -> int:
    return atom.p  # both atom kinds carry .p


def candidate_predicates(primes: Sequence[int]) -> list[Predicate]:
    """The fixed hypothesis space searched by the miner, in canonical order.

    Grammar: single valuation atoms (relations <=, >=, = with bounds in
    [-2, 2], and valuation parity) per prime; the two-prime forms
    xor(neg(vp), neg(vq)); residue-set atoms at precision 1 for primes up
    to 7; and cross-prime conjunctions of two atoms.
    """
    primes = sorted(set(primes))
    for p in primes:
        require_prime(p)
    atoms = _candidate_atoms(primes)
    out: list[Predicate] = list(atoms)
    for p, q in itertools.combinations(primes, 2):
        out.append(exactly_one_negative(p, q))
    for i, a1 in enumerate(atoms):
        for a2 in atoms[i + 1:]:
            if _atom_prime(a1) < _atom_prime(a2):
                out.append(And((a1, a2)))
    return out


def _orbit_values(
    g: FrickeGroup, seeds: Iterable[ProjPoint], depth: int
) -> list[Fraction]:
    """Finite nonzero values in the orbit of the seeds under words up to depth."""
    frontier = list(dict.fromkeys(seeds))
    seen: set[ProjPoint] = set(frontier)
    for _ in range(depth):
        nxt = []
        for pt in frontier:
            for ch in "AaBb":
                img = apply(g.letter_matrix(ch), pt)
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
        frontier = nxt
    return sorted(
        (pt.to_rational() for pt in seen if not pt.is_infinity and pt.a != 0),
    )


def _probe_pool(primes: Sequence[int], seed: int) -> list[Fraction]:
    """Properness/nonemptiness probes: seeded samples plus a p-power grid."""
    rng = random.Random(seed)
    pool = []
    for p in primes:
        for e in range(1, 4):
            pool.extend([Fraction(p ** e), Fraction(-(p ** e)),
                         Fraction(1, p ** e), Fraction(-1, p ** e)])
    pool.extend([Fraction(1), Fraction(-1)])
    while len(pool) < MINER_POOL_SIZE:
        n = rng.randint(-SAMPLE_BOUND, SAMPLE_BOUND)
        d = rng.randint(1, SAMPLE_BOUND)
        if n != 0:
            pool.append(Fraction(n, d))
    return pool


def mine_invariants(
    g: FrickeGroup,
    seeds: Sequence[ProjPoint],
    primes: Sequence[int],
    depth: int,
    seed: int = 0,
) -> list[Predicate]:
    """Search the fixed hypothesis space for invariant sets consistent with
    the orbit of the seed points.

    A candidate set survives if the orbit data lies entirely inside it or
    entirely outside it (seeds that are cusps can only witness the outside),
    if it excludes at least one probe rational and contains at least one,
    and if seeded invariance verification finds no counterexample.
    """
    if depth < 1:
        raise ParameterError(f"depth must be >= 1, got {depth}")
    if not primes:
        raise ParameterError("at least one prime is required")
    primes = sorted(set(primes))
    data = _orbit_values(g, seeds, depth)
    if not data:
        return []
    pool = _probe_pool(primes, seed)
    found: list[Predicate] = []
    for idx, cand in enumerate(candidate_predicates(primes)):
        test = compile_predicate(cand)
        flags = [test(x.numerator, x.denominator) for x in data]
        if any(flags) and not all(flags):
            continue
        pool_flags = [test(x.numerator, x.denominator) for x in pool]
        if all(pool_flags) or not any(pool_flags):
            continue  # not both proper and visibly nonempty
        try:
            result = verify_invariance(
                cand, g, MINER_VERIFY_SAMPLES, seed=seed * 7919 + idx
            )
        except EmptyPredicateError:
            continue
        if result.passed:
            found.append(cand)
    return found


# ---------------------------------------------------------------------------
# aggregate verdict
# ---------------------------------------------------------------------------

NOT_PSEUDOMODULAR = "not_pseudomodular"
NO_KNOWN_OBSTRUCTION = "no_known_obstruction"

DEFAULT_SCREEN_BUDGET = 4


@dataclass(frozen=True)
class Verdict:
    """Aggregate classification outcome. The conclusion 'not_pseudomodular'
    is certified by the obstruction list; 'no_known_obstruction' makes no
    claim of pseudomodularity."""

    u2: Fraction
    two_t: Fraction
    arithmetic_screen: ScreenResult
    obstructions: tuple[Witness, ...]
    density_all_finite_products: bool
    special_budget: int
    conclusion: str = field(init=False)

    def __post_init__(self):
        conclusion = NOT_PSEUDOMODULAR if self.obstructions else NO_KNOWN_OBSTRUCTION
        object.__setattr__(self, "conclusion", conclusion)

    def to_dict(self) -> dict:
        screen = {"status": self.arithmetic_screen.status}
        if self.arithmetic_screen.witness is not None:
            screen["witness"] = self.arithmetic_screen.witness
            screen["value"] = format_rational(self.arithmetic_screen.value)
        return {
            "u2": format_rational(self.u2),
            "twot": format_rational(self.two_t),
            "conclusion": self.conclusion,
            "obstructions": [w.to_dict() for w in self.obstructions],
            "density_all_finite_products": self.density_all_finite_products,
            "arithmetic_screen": screen,
            "special_budget": self.special_budget,
        }


def relevant_primes(g: FrickeGroup) -> list[int]:
    """Primes dividing den(u2) or den(t), plus odd primes dividing integer t.

    This finite set provably covers every prime at which one of the
    obstruction criteria can fire, so no scan bound is needed.
    """
    primes = set(prime_factors(g.u2.denominator))
    primes |= set(prime_factors(g.t.denominator))
    if g.t.denominator == 1:
        primes |= {p for p in prime_factors(int(g.t)) if p % 2 == 1}
    return sorted(primes)


def classify(
    g: FrickeGroup,
    special_budget: int,
    screen_budget: int = DEFAULT_SCREEN_BUDGET,
) -> Verdict:
    """Run every obstruction criterion, the density criterion, the trace
    screen, and a special-point scan up to the given word length."""
    from .orbitsearch import special_point_scan

    obstructions: list[Witness] = []
    primes = relevant_primes(g)
    for p in primes:
        w = check_square_obstruction(g, p)
        if w is not None:
            obstructions.append(w)
    for p, q in itertools.combinations(primes, 2):
        w = check_two_prime_obstruction(g, p, q)
        if w is not None:
            obstructions.append(w)
    report = check_integer_t_conditions(g)
    obstructions.extend(report.witnesses)

    specials = special_point_scan(g, special_budget) if special_budget >= 1 else []
    if specials:
        point, word = specials[0]
        obstructions.append(
            Witness(
                kind=SPECIAL_POINT,
                word=word,
                point=point,
                detail=(
                    f"{point} is fixed by the hyperbolic element {word}; "
                    f"scan up to length {special_budget} found "
                    f"{len(specials)} rational fixed points"
                ),
            )
        )

    return Verdict(
        u2=g.u2,
        two_t=g.two_t,
        arithmetic_screen=arithmeticity_screen(g, screen_budget),
        obstructions=tuple(obstructions),
        density_all_finite_products=check_density_criterion(g),
        special_budget=special_budget,
    )
