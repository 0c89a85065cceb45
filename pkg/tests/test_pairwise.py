import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from netdecomp.pairwise import (PairwiseObjective, PairwiseSpace, build_space, cond_first_moment,
                                cond_second_moment, eval_variable, fix_bits, sample)


def completions(space, prefix):
    rest = space.seed_len - len(prefix)
    for tail in itertools.product((0, 1), repeat=rest):
        yield tuple(prefix) + tail


def brute_first(space, prefix, coefs):
    seeds = list(completions(space, prefix))
    tot = Fraction(0)
    for s in seeds:
        tot += sum(Fraction(c) * eval_variable(space, s, i) for i, c in coefs.items())
    return tot / len(seeds)


def brute_second(space, prefix, idx, c=1):
    idx = sorted(set(idx))
    seeds = list(completions(space, prefix))
    tot = 0
    for s in seeds:
        x = {i: eval_variable(space, s, i) for i in idx}
        tot += sum(x[a] * x[b] for a, b in itertools.combinations(idx, 2))
    return Fraction(c) * Fraction(tot, len(seeds))


def test_build_space_examples():
    s = build_space(7, Fraction(1, 4))
    assert (s.ell, s.m, s.seed_len) == (2, 3, 6)
    assert build_space(7, Fraction(3, 16)).ell == 2
    s = build_space(1, Fraction(1, 2))
    assert (s.ell, s.m, s.seed_len) == (1, 1, 1)
    assert build_space(8, Fraction(1, 2)).m == 4


@pytest.mark.parametrize("q", [Fraction(0), Fraction(3, 4), Fraction(-1, 2)])
def test_build_space_rejects(q):
    with pytest.raises(ValueError):
        build_space(4, q)


@given(st.fractions(min_value=Fraction(1, 5000), max_value=Fraction(1, 2)))
def test_bias_in_interval(q):
    s = build_space(3, q)
    assert q <= s.bias < 2 * q


def test_eval_examples():
    s = PairwiseSpace(5, 2, 3)
    assert all(eval_variable(s, "111111", 1) == 1 for _ in range(1))
    assert all(eval_variable(s, "000000", i) == 0 for i in range(1, 6))
    s = PairwiseSpace(3, 1, 2)
    assert eval_variable(s, "10", 1) == 1
    assert eval_variable(s, "10", 2) == 0
    with pytest.raises(ValueError):
        eval_variable(s, "101", 1)


def test_exact_pairwise_independence_small_grid():
    for ell in range(1, 4):
        for m in range(1, 4):
            n = (1 << m) - 1
            s = PairwiseSpace(n, ell, m)
            ones = {i: 0 for i in range(1, n + 1)}
            both = {}
            seeds = list(itertools.product((0, 1), repeat=s.seed_len))
            for seed in seeds:
                on = set(sample(s, seed))
                for i in on:
                    ones[i] += 1
                for a, b in itertools.combinations(sorted(on), 2):
                    both[(a, b)] = both.get((a, b), 0) + 1
            for i in ones:
                assert Fraction(ones[i], len(seeds)) == s.bias
            for a, b in itertools.combinations(range(1, n + 1), 2):
                assert Fraction(both.get((a, b), 0), len(seeds)) == s.bias ** 2


def test_moment_examples():
    s = PairwiseSpace(3, 2, 2)
    assert cond_first_moment(s, (), {2: 1}) == Fraction(1, 4)
    assert cond_second_moment(s, (), [1, 3]) == Fraction(1, 16)
    assert cond_second_moment(s, (), [2]) == 0
    seed = (1, 0, 1, 1)
    assert cond_first_moment(s, seed, {1: 1}) == eval_variable(s, seed, 1)


def test_random_conditional_queries_match_enumeration():
    rng = random.Random(11)
    for _ in range(60):
        ell = rng.randint(1, 3)
        m = rng.randint(1, 4)
        if ell * m > 12:
            continue
        n = (1 << m) - 1
        s = PairwiseSpace(n, ell, m)
        B = rng.randint(0, s.seed_len)
        prefix = tuple(rng.randint(0, 1) for _ in range(B))
        idx = rng.sample(range(1, n + 1), rng.randint(1, n))
        coefs = {i: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for i in idx}
        assert cond_first_moment(s, prefix, coefs) == brute_first(s, prefix, coefs)
        assert cond_second_moment(s, prefix, idx, 3) == brute_second(s, prefix, idx, 3)


def test_martingale_property():
    rng = random.Random(5)
    for _ in range(40):
        s = PairwiseSpace(7, rng.randint(1, 3), 3)
        B = rng.randint(0, s.seed_len - 1)
        prefix = tuple(rng.randint(0, 1) for _ in range(B))
        idx = rng.sample(range(1, 8), 4)
        for f in (lambda p: cond_first_moment(s, p, {i: 1 for i in idx}),
                  lambda p: cond_second_moment(s, p, idx)):
            assert (f(prefix + (0,)) + f(prefix + (1,))) / 2 == f(prefix)


def test_fix_bits_examples():
    s = PairwiseSpace(7, 2, 3)
    assert fix_bits(s, lambda p: Fraction(3)) == (0,) * 6
    seed = fix_bits(s, lambda p: cond_first_moment(s, p, {i: 1 for i in range(1, 8)}))
    assert sample(s, seed) == []


def test_fix_bits_detects_increase():
    s = PairwiseSpace(1, 1, 1)
    with pytest.raises(AssertionError):
        fix_bits(s, lambda p: len(p))


def test_fix_bits_not_above_expectation_by_enumeration():
    rng = random.Random(3)
    for _ in range(20):
        s = PairwiseSpace(7, rng.randint(1, 3), 3)
        w = {i: rng.randint(-3, 3) for i in range(1, 8)}
        pairs = [tuple(rng.sample(range(1, 8), 3)) for _ in range(3)]

        def F(seed):
            x = {i: eval_variable(s, seed, i) for i in range(1, 8)}
            val = sum(w[i] * x[i] for i in w)
            for a, b, c in pairs:
                val -= 2 * x[a] * x[b] + x[b] * x[c]
            return val

        def obj(prefix):
            seeds = list(completions(s, prefix))
            return Fraction(sum(F(z) for z in seeds), len(seeds))

        seed = fix_bits(s, obj)
        values = [F(z) for z in completions(s, ())]
        assert F(seed) <= Fraction(sum(values), len(values))
        assert min(values) <= F(seed)


def random_objective(rng, s):
    n = s.n
    cliques = [rng.sample(range(1, n + 1), rng.randint(0, min(n, 5))) for _ in range(rng.randint(0, 5))]
    coefs = [rng.randint(0, 10 ** 20) for _ in cliques]
    lin = {i: rng.randint(-4, 4) for i in rng.sample(range(1, n + 1), rng.randint(0, n))}
    pairs = []
    for _ in range(rng.randint(0, 6)):
        a, b = rng.sample(range(1, n + 1), 2) if n > 1 else (1, 1)
        if a != b:
            pairs.append((a, b, rng.randint(-3, 3)))
    return PairwiseObjective(s, cliques, coefs, lin, rng.randint(1, 10 ** 18), pairs, rng.randint(1, 1000))


def objective_by_enumeration(obj, s, prefix):
    seeds = list(completions(s, prefix))
    return Fraction(sum(obj.value(sample(s, z)) for z in seeds), len(seeds))


def test_vectorised_objective_matches_enumeration():
    rng = random.Random(8)
    checked = 0
    while checked < 120:
        ell = rng.randint(1, 4)
        m = rng.randint(1, 4)
        if ell * m > 12:
            continue
        n = rng.randint(1, (1 << m) - 1)
        if n.bit_length() != m:
            continue
        s = PairwiseSpace(n, ell, m)
        obj = random_objective(rng, s)
        B = rng.randint(0, s.seed_len)
        prefix = tuple(rng.randint(0, 1) for _ in range(B))
        assert obj.expectation(prefix) == objective_by_enumeration(obj, s, prefix)
        checked += 1


def test_vectorised_minimize_and_skip():
    rng = random.Random(21)
    for _ in range(30):
        s = PairwiseSpace(7, rng.randint(1, 3), 3)
        obj = random_objective(rng, s)
        seed = obj.minimize()
        assert obj.value(sample(s, seed)) <= obj.expectation(())
        assert Fraction(obj.scaled_expectation(seed), 4 ** s.ell) == obj.value(sample(s, seed))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_property_single_marginal(ell, m, data):
    s = PairwiseSpace((1 << m) - 1, ell, m)
    prefix = tuple(data.draw(st.lists(st.integers(0, 1), max_size=s.seed_len)))
    i = data.draw(st.integers(1, s.n))
    assert cond_first_moment(s, prefix, {i: 1}) == brute_first(s, prefix, {i: 1})
