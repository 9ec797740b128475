"""Orbit labels on P1(Q) under principal and triangular congruence subgroups.

gamma labels classify points up to the level-N principal congruence
subgroup: the pair (a mod N, c mod N) up to global sign. gamma0 labels
classify up to the subgroup of matrices with upper-right entry divisible
by N: the orbit of the reduced point in P1(Z/N) under the lower-triangular
determinant-one action, computed by explicit enumeration and memoized per
level. miss_scan reports which labels a group's cusp set reaches.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import ParameterError
from .exactnum import ProjPoint, format_rational
from .groups import FrickeGroup
from .orbitsearch import DEFAULT_NODE_BUDGET, cusp_bfs

GAMMA = "gamma"
GAMMA0 = "gamma0"

# ---------------------------------------------------------------------------
# P1(Z/N): canonical representatives
# ---------------------------------------------------------------------------

def _gcdex(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _gcdex(b, a % b)
    return g, y, x - (a // b) * y


def _lift_unit(n: int, d: int, a: int) -> int:
    """Lift a unit a modulo d (d dividing n) to a unit modulo n."""
    u, v = 1, n
    g = gcd(v, d)
    while g > 1:
        u *= g
        v //= g
        g = gcd(v, g)
    # now n = u*v, d divides u, v is coprime to d: CRT(a mod u, 1 mod v)
    _, x, y = _gcdex(u, v)
    return (u * x + a * y * v) % n


def p1_reduce(a: int, c: int, n: int) -> tuple[int, int]:
    """Canonical representative of the point (a : c) of P1(Z/n).

    Requires gcd(a, c, n) = 1. The representative has first coordinate a
    divisor g of n and is the least pair in its unit-scaling class.
    """
    if n < 1:
        raise ParameterError(f"level must be >= 1, got {n}")
    if n == 1:
        return (0, 0)
    a %= n
    c %= n
    if gcd(gcd(a, c), n) != 1:
        raise ParameterError(f"({a} : {c}) is not primitive mod {n}")
    if a == 0:
        return (0, 1)
    g, s, _ = _gcdex(a, n)
    s %= n
    # s*a = g (mod n) with g = gcd(a, n); make s a unit mod n
    if gcd(s, n) != 1:
        s = _lift_unit(n, n // g, s)
    a, c = g, (s * c) % n
    if g == 1:
        return (1, c)
    c = min((c * t) % n for t in range(1, n, n // g) if gcd(n, t) == 1)
    return (g, c)


def p1_points(n: int) -> list[tuple[int, int]]:
    """All canonical representatives of P1(Z/n), sorted.

    Canonical representatives have first coordinate dividing n, so it is
    enough to canonicalize the pairs (g, v) over divisors g.
    """
    if n == 1:
        return [(0, 0)]
    pts = set()
    for g in _divisors(n):
        for v in range(n):
            if gcd(gcd(g, v), n) == 1:
                pts.add(p1_reduce(g, v, n))
    return sorted(pts)


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


# ---------------------------------------------------------------------------
# labels
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class OrbitLabel:
    """Canonical orbit key: for gamma, the pair +-(a, c) mod level taken
    lexicographically least; for gamma0, the least P1(Z/level) point of the
    enumerated lower-triangular orbit."""

    flavor: str
    level: int
    key: tuple[int, int]

    def __str__(self) -> str:
        if self.flavor == GAMMA:
            return f"({self.key[0]},{self.key[1]}) mod {self.level}"
        idx = _gamma0_orbit_index(self.level)[self.key]
        return f"orbit#{idx} mod {self.level}"


def _require_level(n: int) -> None:
    if n < 2:
        raise ParameterError(f"congruence level must be >= 2, got {n}")


def gamma_label(x: ProjPoint, n: int) -> OrbitLabel:
    """Orbit label under the level-n principal congruence subgroup."""
    _require_level(n)
    pair = (x.a % n, x.c % n)
    neg = ((-x.a) % n, (-x.c) % n)
    return OrbitLabel(GAMMA, n, min(pair, neg))


# level -> (point -> orbit min, sorted orbit mins, orbits as frozensets)
_GAMMA0_CACHE: dict[int, tuple[dict, list, list]] = {}


def _gamma0_orbits(n: int) -> tuple[dict, list, list]:
    """Orbits of P1(Z/n) under lower-triangular determinant-one matrices.

    The group is generated by the unipotent [[1,0],[1,1]] and the diagonals
    diag(u, 1/u); on projective points the diagonal part acts as scaling of
    the first coordinate by squares of units.
    """
    cached = _GAMMA0_CACHE.get(n)
    if cached is not None:
        return cached
    points = p1_points(n)
    squares = sorted({u * u % n for u in range(1, n) if gcd(u, n) == 1})
    to_min: dict[tuple[int, int], tuple[int, int]] = {}
    orbit_sets: list[frozenset] = []
    for start in points:
        if start in to_min:
            continue
        orbit = {start}
        stack = [start]
        while stack:
            a, c = stack.pop()
            nbrs = [p1_reduce(a, (a + c) % n, n)]
            nbrs.extend(p1_reduce(s * a % n, c, n) for s in squares)
            for nb in nbrs:
                if nb not in orbit:
                    orbit.add(nb)
                    stack.append(nb)
        least = min(orbit)
        for pt in orbit:
            to_min[pt] = least
        orbit_sets.append(frozenset(orbit))
    mins = sorted({min(o) for o in orbit_sets})
    orbit_sets.sort(key=min)
    _GAMMA0_CACHE[n] = (to_min, mins, orbit_sets)
    return _GAMMA0_CACHE[n]


def _gamma0_orbit_index(n: int) -> dict[tuple[int, int], int]:
    _, mins, _ = _gamma0_orbits(n)
    return {key: i for i, key in enumerate(mins)}


def gamma0_label(x: ProjPoint, n: int) -> OrbitLabel:
    """Orbit label under matrices with upper-right entry divisible by n."""
    _require_level(n)
    to_min, _, _ = _gamma0_orbits(n)
    return OrbitLabel(GAMMA0, n, to_min[p1_reduce(x.a, x.c, n)])


def gamma0_orbit_points(x: ProjPoint, n: int) -> frozenset:
    """The full enumerated orbit of the reduced point, as P1(Z/n) points."""
    _require_level(n)
    to_min, _, orbit_sets = _gamma0_orbits(n)
    least = to_min[p1_reduce(x.a, x.c, n)]
    for orbit in orbit_sets:
        if min(orbit) == least:
            return orbit
    raise ParameterError("unreachable")  # pragma: no cover


def enumerate_labels(flavor: str, n: int) -> list[OrbitLabel]:
    """The complete, sorted set of labels at one level."""
    _require_level(n)
    if flavor == GAMMA:
        keys = set()
        for a in range(n):
            for c in range(n):
                if gcd(gcd(a, c), n) == 1:
                    keys.add(min((a, c), ((-a) % n, (-c) % n)))
        return [OrbitLabel(GAMMA, n, k) for k in sorted(keys)]
    if flavor == GAMMA0:
        _, mins, _ = _gamma0_orbits(n)
        return [OrbitLabel(GAMMA0, n, k) for k in mins]
    raise ParameterError(f"unknown flavor {flavor!r}; use 'gamma' or 'gamma0'")


def label_of_pair(flavor: str, num: int, den: int, n: int) -> OrbitLabel:
    """Label of the reduced rational num/den (den > 0) at level n."""
    if flavor == GAMMA:
        pair = (num % n, den % n)
        neg = ((-num) % n, (-den) % n)
        return OrbitLabel(GAMMA, n, min(pair, neg))
    to_min, _, _ = _gamma0_orbits(n)
    return OrbitLabel(GAMMA0, n, to_min[p1_reduce(num, den, n)])


# ---------------------------------------------------------------------------
# miss scan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MissReport:
    """Which labels at level base**exponent the cusp set reaches.

    hit maps each reached label to a witness (cusp representative,
    translation multiple); an unhit label at finite depth is evidence of a
    missed orbit, not proof.
    """

    u2: Fraction
    two_t: Fraction
    flavor: str
    base: int
    exponent: int
    level: int
    depth: int
    budget: int
    truncated: bool
    hit: dict
    unhit: tuple[OrbitLabel, ...]

    def to_dict(self) -> dict:
        return {
            "u2": format_rational(self.u2),
            "twot": format_rational(self.two_t),
            "flavor": self.flavor,
            "N": self.base,
            "j": self.exponent,
            "level": self.level,
            "depth": self.depth,
            "budget": self.budget,
            "truncated": self.truncated,
            "total_labels": len(self.hit) + len(self.unhit),
            "hit_count": len(self.hit),
            "unhit": [str(lbl) for lbl in self.unhit],
        }


def miss_scan(
    g: FrickeGroup,
    flavor: str,
    n: int,
    j: int,
    depth: int,
    budget: int = DEFAULT_NODE_BUDGET,
    cache_path: str | None = None,
) -> MissReport:
    """Compute labels of all enumerated cusps and their translates at level
    n**j and report hit and unhit labels.

    The label of c + k*2t is periodic in k with period dividing
    level * den(2t), so exactly one period is enumerated per cusp.
    """
    _require_level(n)
    if j < 1:
        raise ParameterError(f"exponent j must be >= 1, got {j}")
    level = n ** j
    all_labels = enumerate_labels(flavor, level)
    bfs = cusp_bfs(g, depth, budget, cache_path)
    period = level * g.two_t.denominator
    total = len(all_labels)
    hit: dict[OrbitLabel, tuple[Fraction, int]] = {}
    label_memo: dict[tuple[int, int], OrbitLabel] = {}
    for rec in bfs.finite_points():
        c0 = rec.point.to_rational()
        for k in range(period):
            x = c0 + k * g.two_t
            pair = (x.numerator % level, x.denominator % level)
            label = label_memo.get(pair)
            if label is None:
                label = label_of_pair(flavor, x.numerator, x.denominator, level)
                label_memo[pair] = label
            if label not in hit:
                hit[label] = (c0, k)
                if len(hit) == total:
                    break
        if len(hit) == total:
            break
    unhit = tuple(lbl for lbl in all_labels if lbl not in hit)
    return MissReport(
        u2=g.u2,
        two_t=g.two_t,
        flavor=flavor,
        base=n,
        exponent=j,
        level=level,
        depth=depth,
        budget=budget,
        truncated=bfs.truncated,
        hit=hit,
        unhit=unhit,
    )
