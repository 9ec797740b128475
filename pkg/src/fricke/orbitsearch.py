"""Cusp orbit enumeration, cusp/special point testing, and density probes.

The cusp set of a group here is the orbit of infinity. Finite cusps are
stored by their canonical representative modulo the translation by 2t,
reduced into [0, 2t); witness words are adjusted by powers of the parabolic
word so that they map infinity to the stored representative exactly.

Positive probe answers (Found, Cusp, Special) are sound and re-verified
before being returned; negative answers (NotFoundAtDepth, Unknown) are
evidence bounded by the search depth, never proof.
"""

from __future__ import annotations

import heapq
import os
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Iterator

from .errors import InternalCheckError, ParameterError
from .exactnum import (
    INFINITY,
    ProjPoint,
    Rational,
    ball_trace_contains,
    format_rational,
    parse_point,
    point_of,
    reduce_point,
    require_prime,
    vp,
)
from .groups import (
    ElementClass,
    FrickeGroup,
    PARABOLIC_WORD,
    TRANSLATION_WORD,
    apply,
    classify_element,
    mat_mul,
    word_matrix,
    IDENTITY,
)
from .words import INVERSE, LETTERS, Word, concat, invert_word, parity, parse_word

DEFAULT_NODE_BUDGET = 250_000


# ---------------------------------------------------------------------------
# translation reduction
# ---------------------------------------------------------------------------

def reduce_mod_translation(g: FrickeGroup, x: Rational) -> tuple[Fraction, int]:
    """Write x = rep + k * 2t with rep in [0, 2t); returns (rep, k)."""
    x = Fraction(x)
    k = x // g.two_t
    return x - k * g.two_t, int(k)


def _translation_word(k: int) -> Word:
    # the parabolic word shifts by -2t, its inverse by +2t
    if k >= 0:
        return PARABOLIC_WORD * k
    return TRANSLATION_WORD * (-k)


# ---------------------------------------------------------------------------
# breadth-first cusp enumeration
# ---------------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class CuspRecord:
    """One cusp with a witness word mapping infinity to it exactly."""

    point: ProjPoint
    witness: Word
    depth: int
    parity_tag: tuple[int, int]


@dataclass(frozen=True)
class BfsResult:
    u2: Fraction
    two_t: Fraction
    depth: int
    budget: int
    records: tuple[CuspRecord, ...]
    truncated: bool

    def finite_points(self) -> Iterator[CuspRecord]:
        return (r for r in self.records if not r.point.is_infinity)


def _letter_pairs(g: FrickeGroup) -> list[tuple[str, tuple[int, int, int, int]]]:
    return [(ch, tuple(g.letter_matrix(ch))) for ch in LETTERS]


# in-process memo of recent runs; results are immutable, so sharing is safe
_BFS_MEMO: dict[tuple, BfsResult] = {}
_BFS_MEMO_CAP = 3


def cusp_bfs(
    g: FrickeGroup,
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
    cache_path: str | None = None,
) -> BfsResult:
    """Breadth-first closure of {infinity} under the four generator letters.

    Points are canonically reduced modulo the translation. Output order is
    deterministic (discovery order, letters in the order A, a, B, b). A
    budget stop marks the result truncated. Runs whose parameters match a
    cached run exactly are loaded from the cache instead of recomputed.
    """
    if depth < 0:
        raise ParameterError(f"depth must be >= 0, got {depth}")
    if budget < 1:
        raise ParameterError(f"budget must be >= 1, got {budget}")
    # the file cache is authoritative when given; the in-process memo only
    # serves cache-less calls so that cached files always see every run
    memo_key = (g.u2, g.two_t, depth, budget)
    if cache_path:
        cached = load_cached_bfs(cache_path, g, depth, budget)
        if cached is not None:
            return cached
    else:
        memoized = _BFS_MEMO.get(memo_key)
        if memoized is not None:
            return memoized

    letters = _letter_pairs(g)
    T = g.two_t
    root = CuspRecord(INFINITY, "", 0, (0, 0))
    records: list[CuspRecord] = [root]
    # key: (num, den) of the reduced representative; infinity key is None
    seen: dict[tuple[int, int] | None, tuple[int, int]] = {None: (0, 0)}
    frontier: list[tuple[Fraction | None, Word]] = [(None, "")]
    truncated = False

    for level in range(1, depth + 1):
        if truncated or not frontier:
            break
        nxt: list[tuple[Fraction | None, Word]] = []
        for x, w in frontier:
            if truncated:
                break
            if x is None:
                xn, xd = 1, 0
            else:
                xn, xd = x.numerator, x.denominator
            wp = parity(w)
            for ch, (a, b, c, d) in letters:
                yn = a * xn + b * xd
                yd = c * xn + d * xd
                if yd == 0:
                    continue  # back to infinity, already recorded
                y = Fraction(yn, yd)
                k = y // T
                rep = y - k * T
                key = (rep.numerator, rep.denominator)
                tag = (wp[0] ^ (ch in "Aa"), wp[1] ^ (ch in "Bb"))
                prev = seen.get(key)
                if prev is not None:
                    if prev != tag:
                        raise InternalCheckError(
                            f"cusp {rep} reached with parities {prev} and {tag}"
                        )
                    continue
                if len(records) >= budget:
                    truncated = True
                    break
                witness = concat(_translation_word(int(k)), ch, w)
                seen[key] = tag
                records.append(CuspRecord(point_of(rep), witness, level, tag))
                nxt.append((rep, witness))
        frontier = nxt

    result = BfsResult(
        u2=g.u2,
        two_t=g.two_t,
        depth=depth,
        budget=budget,
        records=tuple(records),
        truncated=truncated,
    )
    if cache_path:
        append_bfs_cache(cache_path, result)
    else:
        _remember_bfs(memo_key, result)
    return result


def _remember_bfs(key: tuple, result: BfsResult) -> None:
    if key not in _BFS_MEMO and len(_BFS_MEMO) >= _BFS_MEMO_CAP:
        _BFS_MEMO.pop(next(iter(_BFS_MEMO)))
    _BFS_MEMO[key] = result


# ---------------------------------------------------------------------------
# orbit cache (append-only, exact parameter match)
# ---------------------------------------------------------------------------

def _cache_header(result_or_params) -> str:
    u2, two_t, depth, budget = result_or_params
    return (
        f"#bfs u2={format_rational(u2)} twot={format_rational(two_t)} "
        f"depth={depth} budget={budget}"
    )


def append_bfs_cache(path: str, result: BfsResult) -> None:
    """Append one completed run; the file is never rewritten."""
    lines = [
        _cache_header((result.u2, result.two_t, result.depth, result.budget))
        + f" truncated={int(result.truncated)} records={len(result.records)}"
    ]
    for r in result.records:
        lines.append(f"{r.point}\t{r.witness}\t{r.depth}\t{r.parity_tag[0]},{r.parity_tag[1]}")
    with open(path, "a", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_cached_bfs(
    path: str, g: FrickeGroup, depth: int, budget: int
) -> BfsResult | None:
    """Return the first cached run matching the parameters exactly, if any."""
    if not os.path.exists(path):
        return None
    want = _cache_header((g.u2, g.two_t, depth, budget))
    with open(path, encoding="ascii") as fh:
        lines = fh.read().splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("#bfs "):
            head, _, tail = line.rpartition(" truncated=")
            if head == want:
                trunc_s, records_s = tail.split(" records=")
                count = int(records_s)
                records = []
                for rec_line in lines[i + 1 : i + 1 + count]:
                    pt_s, word_s, depth_s, parity_s = rec_line.split("\t")
                    e1, e2 = parity_s.split(",")
                    records.append(
                        CuspRecord(
                            point=parse_point(pt_s),
                            witness=parse_word(word_s),
                            depth=int(depth_s),
                            parity_tag=(int(e1), int(e2)),
                        )
                    )
                return BfsResult(
                    u2=g.u2,
                    two_t=g.two_t,
                    depth=depth,
                    budget=budget,
                    records=tuple(records),
                    truncated=bool(int(trunc_s)),
                )
        i += 1
    return None


# ---------------------------------------------------------------------------
# cusp membership testing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CuspTestResult:
    """kind is 'cusp' (witness maps infinity to the point), 'special'
    (witness is hyperbolic and fixes the point), or 'unknown'."""

    kind: str
    witness: Word | None = None
    depth: int = 0


def cusp_test(
    g: FrickeGroup,
    x: ProjPoint,
    depth: int,
    budget: int = 100_000,
) -> CuspTestResult:
    """Best-first search from x toward infinity.

    States are translation-reduced; the priority is the denominator of the
    state, so the search follows a height descent. Two distinct arrival
    words at one state compose to a stabilizer of x; a hyperbolic stabilizer
    makes x a special point.
    """
    if depth < 0:
        raise ParameterError(f"depth must be >= 0, got {depth}")
    if x.is_infinity:
        return CuspTestResult("cusp", witness="", depth=0)

    letters = _letter_pairs(g)
    rep0, k0 = reduce_mod_translation(g, x.to_rational())
    w0 = _translation_word(k0)
    # state key -> arrival word (maps x to the state exactly)
    seen: dict[tuple[int, int], Word] = {(rep0.numerator, rep0.denominator): w0}
    counter = 0
    heap: list[tuple[int, int, int, Fraction, Word]] = [
        (rep0.denominator, 0, counter, rep0, w0)
    ]
    nodes = 0
    while heap and nodes < budget:
        _, d, _, cur, w = heapq.heappop(heap)
        if d >= depth:
            continue
        nodes += 1
        xn, xd = cur.numerator, cur.denominator
        for ch, (a, b, c, dd) in letters:
            yn = a * xn + b * xd
            yd = c * xn + dd * xd
            if yd == 0:
                # reached infinity: w' maps x to infinity
                witness = invert_word(concat(ch, w))
                if apply(word_matrix(g, witness), INFINITY) != x:
                    raise InternalCheckError("cusp witness failed verification")
                return CuspTestResult("cusp", witness=witness, depth=d + 1)
            y = Fraction(yn, yd)
            k = y // g.two_t
            rep = y - k * g.two_t
            key = (rep.numerator, rep.denominator)
            w2 = concat(_translation_word(int(k)), ch, w)
            w1 = seen.get(key)
            if w1 is not None:
                stab = concat(invert_word(w1), w2)
                if stab:
                    m = word_matrix(g, stab)
                    if (
                        classify_element(m) is ElementClass.HYPERBOLIC
                        and apply(m, x) == x
                    ):
                        return CuspTestResult("special", witness=stab, depth=d + 1)
                continue
            seen[key] = w2
            counter += 1
            heapq.heappush(heap, (rep.denominator, d + 1, counter, rep, w2))
    return CuspTestResult("unknown", depth=depth)


# ---------------------------------------------------------------------------
# special point scan
# ---------------------------------------------------------------------------

_LETTER_RANK = {ch: i for i, ch in enumerate(LETTERS)}


def _word_key(w: Word) -> tuple:
    return (len(w), tuple(_LETTER_RANK[ch] for ch in w))


def special_point_scan(g: FrickeGroup, max_len: int) -> list[tuple[ProjPoint, Word]]:
    """Rational fixed points of hyperbolic words up to the given length.

    Enumerates cyclically reduced words, keeps hyperbolic elements whose
    fixed-point pair is rational, and returns (point, word) pairs sorted by
    point, deduplicated keeping the shortest witness. Monotone in max_len.
    """
    if max_len < 1:
        raise ParameterError(f"scan length must be >= 1, got {max_len}")
    letters = [(ch, g.letter_matrix(ch)) for ch in LETTERS]
    best: dict[ProjPoint, Word] = {}

    def record(pt: ProjPoint, word: str) -> None:
        if not pt.is_infinity:
            old = best.get(pt)
            if old is None or _word_key(word) < _word_key(old):
                best[pt] = word

    def visit(word: str, m) -> None:
        if INVERSE[word[0]] != word[-1]:
            disc = (m.a - m.d) ** 2 + 4 * m.b * m.c
            if disc > 0:
                s = isqrt(disc)
                if s * s == disc:
                    if m.c != 0:
                        record(reduce_point(m.a - m.d + s, 2 * m.c), word)
                        record(reduce_point(m.a - m.d - s, 2 * m.c), word)
                    else:
                        record(reduce_point(m.b, m.d - m.a), word)

    def rec(word: str, m, remaining: int) -> None:
        for ch, lm in letters:
            if word and INVERSE[word[-1]] == ch:
                continue
            w2 = word + ch
            m2 = mat_mul(m, lm)
            visit(w2, m2)
            if remaining > 1:
                rec(w2, m2, remaining - 1)

    rec("", IDENTITY, max_len)
    return sorted(best.items(), key=lambda item: (_word_key(item[1]), item[0]))


# ---------------------------------------------------------------------------
# density probes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeResult:
    """found=True answers are verified exactly before being returned."""

    found: bool
    cusp: Fraction | None = None
    offset: int | None = None
    base_point: Fraction | None = None
    witness: Word | None = None
    depth: int = 0
    truncated: bool = False

    def __bool__(self) -> bool:
        return self.found

    def to_dict(self) -> dict:
        out = {"found": self.found, "depth": self.depth, "truncated": self.truncated}
        if self.found:
            out["cusp"] = format_rational(self.cusp)
            out["offset"] = self.offset
            out["base_point"] = format_rational(self.base_point)
            out["witness"] = self.witness
        return out


def _rational_lattice_gcd(m: Fraction, t: Fraction) -> Fraction:
    """Positive generator of the subgroup mZ + tZ of Q."""
    return Fraction(
        gcd(abs(m.numerator) * t.denominator, abs(t.numerator) * m.denominator),
        m.denominator * t.denominator,
    )


def adelic_probe(
    g: FrickeGroup,
    x: Rational,
    m: Rational,
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
    cache_path: str | None = None,
) -> ProbeResult:
    """Search the cusp set for a member of the adelic ball trace x + mZ.

    For each enumerated cusp c0 the full translation class c0 + 2tZ is
    tested exactly: a solution of c0 + k*2t in x + mZ exists iff c0 - x
    lies in mZ + 2tZ. The first hit in enumeration order is returned.
    """
    x = Fraction(x)
    m = Fraction(m)
    if m == 0:
        raise ParameterError("ball modulus m must be nonzero")
    bfs = cusp_bfs(g, depth, budget, cache_path)
    lattice = _rational_lattice_gcd(m, g.two_t)
    s = g.two_t / m
    a, b = s.numerator, s.denominator
    for rec in bfs.finite_points():
        c0 = rec.point.to_rational()
        if ((c0 - x) / lattice).denominator != 1:
            continue
        r = (c0 - x) / m
        e, f = r.numerator, r.denominator
        # f divides b here; solve k*a/b = -e/f (mod 1)
        k = 0 if b == 1 else (-(e * (b // f)) * pow(a, -1, b)) % b
        cusp = c0 + k * g.two_t
        if not ball_trace_contains(x, m, cusp):
            raise InternalCheckError("adelic probe produced an unverified hit")
        return ProbeResult(
            found=True,
            cusp=cusp,
            offset=k,
            base_point=c0,
            witness=rec.witness,
            depth=bfs.depth,
            truncated=bfs.truncated,
        )
    return ProbeResult(found=False, depth=bfs.depth, truncated=bfs.truncated)


def _crt(pairs: Iterable[tuple[int, int]]) -> tuple[int, int]:
    """Combine congruences with pairwise coprime moduli."""
    r0, m0 = 0, 1
    for r, m in pairs:
        if m == 1:
            continue
        inv = pow(m0, -1, m)
        r0 = r0 + m0 * ((r - r0) * inv % m)
        m0 *= m
    return r0 % m0, m0


def normalize_targets(targets: Iterable[tuple[int, int]]) -> list[tuple[int, int]]:
    merged: dict[int, int] = {}
    for p, k in targets:
        require_prime(p)
        if k < 1:
            raise ParameterError(f"target precision must be >= 1, got {k}")
        merged[p] = max(merged.get(p, 0), k)
    if not merged:
        raise ParameterError("at least one (prime, precision) target is required")
    return sorted(merged.items())


def padic_probe(
    g: FrickeGroup,
    y: Rational,
    targets: Iterable[tuple[int, int]],
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
    cache_path: str | None = None,
) -> ProbeResult:
    """Search cusps and their translates for c with v_p(c - y) >= k for all
    targets (p, k) simultaneously.

    For each cusp representative c0 the offset j with c = c0 + j*2t is
    found by solving one congruence per target prime and combining them;
    the valuations of the winner are re-verified exactly.
    """
    y = Fraction(y)
    targets = normalize_targets(targets)
    bfs = cusp_bfs(g, depth, budget, cache_path)
    a, b = g.two_t.numerator, g.two_t.denominator
    for rec in bfs.finite_points():
        c0 = rec.point.to_rational()
        diff = c0 - y
        e, f = diff.numerator, diff.denominator
        A = a * f
        B = e * b
        congruences: list[tuple[int, int]] = []
        feasible = True
        for p, k in targets:
            fb = f * b
            vfb = 0
            while fb % p == 0:
                fb //= p
                vfb += 1
            K = k + vfb
            alpha = 0
            Ar = abs(A)
            while Ar % p == 0 and alpha < K:
                Ar //= p
                alpha += 1
            if alpha >= K:
                if B % p ** K != 0:
                    feasible = False
                    break
                continue
            pa = p ** alpha
            if B % pa != 0:
                feasible = False
                break
            mod = p ** (K - alpha)
            j = (-(B // pa) * pow((A // pa) % mod, -1, mod)) % mod
            congruences.append((j, mod))
        if not feasible:
            continue
        j, _ = _crt(congruences)
        cusp = c0 + j * g.two_t
        z = cusp - y
        for p, k in targets:
            if z != 0 and vp(z, p) < k:
                raise InternalCheckError("padic probe produced an unverified hit")
        return ProbeResult(
            found=True,
            cusp=cusp,
            offset=j,
            base_point=c0,
            witness=rec.witness,
            depth=bfs.depth,
            truncated=bfs.truncated,
        )
    return ProbeResult(found=False, depth=bfs.depth, truncated=bfs.truncated)
