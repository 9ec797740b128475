import itertools
from fractions import Fraction

import pytest

from fricke.errors import EmptyPredicateError, ParameterError
from fricke.exactnum import INFINITY, is_prime, point_of
from fricke.groups import make_group
from fricke.obstruct import (
    NO_KNOWN_OBSTRUCTION,
    NOT_PSEUDOMODULAR,
    IntegerTReport,
    candidate_predicates,
    check_density_criterion,
    check_integer_t_conditions,
    check_square_obstruction,
    check_two_prime_obstruction,
    classify,
    mine_invariants,
    recheck_witness,
    relevant_primes,
    verify_invariance,
)
from fricke.predicates import And, ValAtom, exactly_one_negative, neg_valuation

FLAGSHIP = make_group(Fraction(6, 11), 6)


# ---------------------------------------------------------------- square check

def test_square_obstruction_branch_one():
    g = make_group(Fraction(1, 4), 4)
    w = check_square_obstruction(g, 2)
    assert w is not None and w.branch == 1 and w.primes == (2,)
    assert recheck_witness(g, w)


def test_square_obstruction_branch_two():
    g = make_group(Fraction(1, 16), 5)  # t = 5/2
    w = check_square_obstruction(g, 2)
    assert w is not None and w.branch == 2
    assert recheck_witness(g, w)


def test_square_obstruction_flagship_none():
    assert check_square_obstruction(FLAGSHIP, 11) is None


def test_square_sweep_prime_square_denominators():
    # family u2 = 1/p^2 with integer t >= 2: branch one always fires at p
    for p in (2, 3, 5, 7):
        for t in range(2, 9):
            if Fraction(1, p * p) >= t - 1:
                continue
            g = make_group(Fraction(1, p * p), 2 * t)
            w = check_square_obstruction(g, p)
            assert w is not None and w.branch == 1


# ---------------------------------------------------------------- two primes

def test_two_prime_witness_carries_xor_predicate():
    g = make_group(Fraction(1, 15), 4)
    w = check_two_prime_obstruction(g, 3, 5)
    assert w is not None
    assert str(w.predicate) == "xor(neg(v3), neg(v5))"
    assert recheck_witness(g, w)


def test_two_prime_half_integral_t():
    g = make_group(Fraction(1, 15), 5)  # t = 5/2, integral at 3 and 5
    assert check_two_prime_obstruction(g, 3, 5) is not None


def test_two_prime_flagship_none():
    assert check_two_prime_obstruction(FLAGSHIP, 2, 11) is None


def test_two_prime_equal_primes_rejected():
    with pytest.raises(ParameterError):
        check_two_prime_obstruction(FLAGSHIP, 3, 3)


# ---------------------------------------------------------------- integer t

def test_integer_t_clause_a():
    report = check_integer_t_conditions(make_group(Fraction(1, 6), 6))
    assert report.applicable
    assert [w.clause for w in report.witnesses] == ["a"]


def test_integer_t_clause_b():
    report = check_integer_t_conditions(make_group(Fraction(1, 3), 6))
    assert [w.clause for w in report.witnesses] == ["b"]


def test_integer_t_clause_c():
    report = check_integer_t_conditions(make_group(Fraction(1, 7), 6))
    assert [w.clause for w in report.witnesses] == ["c"]
    assert report.witnesses[0].primes == (3,)


def test_integer_t_not_applicable():
    report = check_integer_t_conditions(make_group(Fraction(1, 16), 5))
    assert report == IntegerTReport(applicable=False)


def test_integer_t_clause_c_fires_on_integral_u2():
    # u2 = 1, t = 3: 1 mod 3 is neither 0 nor -1, so clause (c) applies even
    # though this group sits inside the modular group (hence is arithmetic,
    # hence not pseudomodular; the certificate is still correct)
    report = check_integer_t_conditions(make_group(1, 6))
    assert [w.clause for w in report.witnesses] == ["c"]


def test_integer_t_flagship_clean():
    report = check_integer_t_conditions(FLAGSHIP)
    assert report.applicable and report.witnesses == ()


# ---------------------------------------------------------------- density

def test_density_examples():
    assert check_density_criterion(FLAGSHIP)
    assert check_density_criterion(make_group(Fraction(1, 5), 6))
    assert not check_density_criterion(make_group(Fraction(1, 7), 6))
    assert not check_density_criterion(make_group(1, 6))  # unit denominator


def test_density_true_excludes_all_witnesses():
    # sweep: wherever the density criterion holds, no obstruction can fire
    found = 0
    for num, den, t in itertools.product(range(1, 25), range(2, 14), (2, 3, 5, 7)):
        if not is_prime(den):
            continue
        u2 = Fraction(num, den)
        if u2.denominator == 1 or not (0 < u2 < t - 1):
            continue
        g = make_group(u2, 2 * t)
        if not check_density_criterion(g):
            continue
        found += 1
        for p in relevant_primes(g):
            assert check_square_obstruction(g, p) is None
        for p, q in itertools.combinations(relevant_primes(g), 2):
            assert check_two_prime_obstruction(g, p, q) is None
        assert check_integer_t_conditions(g).witnesses == ()
    assert found > 20


# ---------------------------------------------------------------- invariance

def test_invariance_of_two_prime_set_passes():
    g = make_group(Fraction(1, 15), 4)
    res = verify_invariance(exactly_one_negative(3, 5), g, 10_000, seed=1)
    assert res.passed and res.samples == 10_000


def test_invariance_weakened_predicate_fails():
    g = make_group(Fraction(1, 15), 4)
    res = verify_invariance(neg_valuation(3), g, 100_000, seed=1)
    assert not res.passed
    x, letter = res.counterexample
    assert letter in "AaBb"
    # recheck the counterexample by hand
    from fricke.groups import apply
    from fricke.predicates import eval_predicate

    img = apply(g.letter_matrix(letter), point_of(x))
    assert img.is_infinity or img.a == 0 or not eval_predicate(
        neg_valuation(3), img.to_rational()
    )


def test_invariance_fails_for_group_with_dense_cusps():
    res = verify_invariance(exactly_one_negative(2, 11), FLAGSHIP, 100_000, seed=3)
    assert not res.passed


def test_invariance_empty_predicate():
    impossible = And((ValAtom(2, ">=", 1), ValAtom(2, "<=", -1)))
    with pytest.raises(EmptyPredicateError):
        verify_invariance(impossible, FLAGSHIP, 10, seed=0)


def test_invariance_rejects_bad_sample_count():
    with pytest.raises(ParameterError):
        verify_invariance(neg_valuation(3), FLAGSHIP, 0, seed=0)


def test_invariance_counterexamples_agree_with_projective_action():
    # the fast integer path inside verify_invariance must agree with the
    # ProjPoint action: recheck a batch of failures through groups.apply
    from fricke.groups import apply
    from fricke.predicates import eval_predicate

    g = make_group(Fraction(1, 15), 4)
    for seed in range(5):
        res = verify_invariance(neg_valuation(5), g, 50_000, seed=seed)
        assert not res.passed
        x, letter = res.counterexample
        img = apply(g.letter_matrix(letter), point_of(x))
        if img.is_infinity or img.a == 0:
            assert res.image is None
        else:
            assert res.image == img.to_rational()
            assert not eval_predicate(neg_valuation(5), res.image)


# ---------------------------------------------------------------- miner

def test_miner_rediscovers_two_prime_set():
    g = make_group(Fraction(1, 15), 4)
    mined = mine_invariants(g, [INFINITY, point_of(0)], [3, 5], depth=5, seed=0)
    assert exactly_one_negative(3, 5) in mined
    # miner soundness: every result passes a fresh verification
    for pred in mined:
        assert verify_invariance(pred, g, 10_000, seed=12345).passed


def test_miner_finds_nothing_for_dense_group():
    mined = mine_invariants(FLAGSHIP, [INFINITY], [2, 3, 5, 11], depth=5, seed=0)
    assert mined == []


def test_miner_hypothesis_space_has_no_constant_true():
    # no candidate accepts every probe of the p-power grid the miner uses
    from fricke.predicates import eval_predicate

    space = candidate_predicates([3, 5])
    probes = [Fraction(1), Fraction(-1), Fraction(2)]
    for p in (3, 5):
        for e in (1, 2, 3):
            probes += [Fraction(p**e), Fraction(-(p**e)),
                       Fraction(1, p**e), Fraction(-1, p**e)]
    for pred in space:
        assert not all(eval_predicate(pred, x) for x in probes)


def test_miner_parameter_errors():
    with pytest.raises(ParameterError):
        mine_invariants(FLAGSHIP, [INFINITY], [], depth=3)
    with pytest.raises(ParameterError):
        mine_invariants(FLAGSHIP, [INFINITY], [3], depth=0)


# ---------------------------------------------------------------- classify

def test_classify_square_family():
    verdict = classify(make_group(Fraction(1, 4), 4), special_budget=2)
    assert verdict.conclusion == NOT_PSEUDOMODULAR
    squares = [w for w in verdict.obstructions if w.kind == "square_obstruction"]
    assert squares and squares[0].primes == (2,)


def test_classify_flagship_special_point():
    verdict = classify(FLAGSHIP, special_budget=6)
    assert verdict.conclusion == NOT_PSEUDOMODULAR
    assert verdict.density_all_finite_products
    kinds = {w.kind for w in verdict.obstructions}
    assert kinds == {"special_point"}
    sp = verdict.obstructions[0]
    assert recheck_witness(FLAGSHIP, sp)
    assert verdict.arithmetic_screen.witness == "AA"


def test_classify_modular_subgroup():
    # sits inside the modular group: the only certificate is clause (c),
    # which correctly reports "not pseudomodular" (the group is arithmetic)
    verdict = classify(make_group(1, 6), special_budget=6)
    assert verdict.arithmetic_screen.status == "inconclusive"
    kinds = [w.kind for w in verdict.obstructions]
    assert kinds == ["integer_t_violation"]
    assert verdict.conclusion == NOT_PSEUDOMODULAR


def test_classify_no_known_obstruction():
    # u2 = 3/5, t = 3: density criterion holds (3/5 = 0 mod 3), nothing fires,
    # and no special point exists up to length 8
    g = make_group(Fraction(3, 5), 6)
    verdict = classify(g, special_budget=8)
    assert verdict.density_all_finite_products
    assert verdict.obstructions == ()
    assert verdict.conclusion == NO_KNOWN_OBSTRUCTION


def test_classify_is_deterministic():
    v1 = classify(FLAGSHIP, special_budget=6)
    v2 = classify(FLAGSHIP, special_budget=6)
    assert v1 == v2
    assert v1.to_dict() == v2.to_dict()


def test_relevant_primes():
    assert relevant_primes(FLAGSHIP) == [3, 11]
    assert relevant_primes(make_group(Fraction(1, 4), 4)) == [2]
    assert relevant_primes(make_group(Fraction(1, 16), 5)) == [2]
    assert relevant_primes(make_group(1, 6)) == [3]


def test_every_witness_rechecks_across_a_sweep():
    cases = [
        (Fraction(1, 4), Fraction(4)),
        (Fraction(1, 16), Fraction(5)),
        (Fraction(1, 15), Fraction(4)),
        (Fraction(1, 6), Fraction(6)),
        (Fraction(1, 3), Fraction(6)),
        (Fraction(1, 7), Fraction(6)),
        (Fraction(1), Fraction(6)),
        (Fraction(6, 11), Fraction(6)),
    ]
    for u2, twot in cases:
        g = make_group(u2, twot)
        verdict = classify(g, special_budget=4)
        for w in verdict.obstructions:
            assert recheck_witness(g, w), (g.name, w.kind)
