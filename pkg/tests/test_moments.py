import itertools
import math
import random
from fractions import Fraction as F
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subseqstats import BudgetExceededError, InputError
from subseqstats.counting import count_k_bruteforce
from subseqstats.moments import (
    MomentBounds,
    ProbVector,
    bound_asymptote,
    exhaustive_moments,
    expected_count_k,
    expected_total,
    majorizes,
    second_moment_bounds,
    second_moment_exhaustive,
    to_fraction,
    upper_bound_coefficient,
)


def enumerate_moments(n, k, probs):
    """Mean and second moment of T_{n,k} by brute force over all word pairs."""
    probs = [F(p) for p in probs]
    first = second = F(0)
    for x in itertools.product(range(len(probs)), repeat=n):
        wx = math.prod((probs[s] for s in x), start=F(1))
        if not wx:
            continue
        for y in itertools.product(range(len(probs)), repeat=n):
            w = wx * math.prod((probs[s] for s in y), start=F(1))
            t = count_k_bruteforce(x, y, k)
            first += w * t
            second += w * t * t
    return first, second


# --- expectations -------------------------------------------------------------

def test_expected_count_examples():
    assert expected_count_k(4, 2, 2) == 9
    assert expected_count_k(3, 3, 2) == F(1, 8)
    assert expected_count_k(1, 1, 5) == F(1, 5)
    assert expected_count_k(2, 5, 2) == 0


def test_expected_count_matches_bruteforce_enumeration():
    assert enumerate_moments(4, 2, [F(1, 2)] * 2)[0] == 9
    assert enumerate_moments(1, 1, [F(1, 5)] * 5)[0] == F(1, 5)


def test_expected_total_examples():
    assert expected_total(2, 2) == F(9, 4)
    assert expected_total(1, 3) == F(1, 3)
    assert expected_total(3, [1, 0]) == comb(6, 3) - 1


def test_k_zero_rejected():
    with pytest.raises(InputError):
        expected_count_k(3, 0, 2)


@pytest.mark.parametrize("probs", [[F(1, 2), F(1, 3), F(1, 6)], [F(3, 4), F(1, 4)]])
def test_nonuniform_mean_uses_squared_binomial(probs):
    q = sum(p * p for p in probs)
    for n in (1, 2, 3):
        means = [m for m, _ in exhaustive_moments(n, probs)]
        for k in range(1, n + 1):
            assert means[k - 1] == comb(n, k) ** 2 * q**k == expected_count_k(n, k, probs)
            assert means[k - 1] == enumerate_moments(n, k, probs)[0]
        # a single binomial with a k = 0 term disagrees with enumeration
        single = sum(comb(n, k) * q**k for k in range(n + 1))
        assert single != expected_total(n, probs)


# --- distributions ----------------------------------------------------------------

def test_probvector_requires_exact_unit_sum():
    with pytest.raises(InputError):
        ProbVector((F(1, 3), F(1, 3)))
    with pytest.raises(InputError):
        ProbVector((F(3, 2), F(-1, 2)))
    assert ProbVector(("0.5", "0.3", "0.2")).probs == (F(1, 2), F(3, 10), F(1, 5))
    assert ProbVector((0.1, 0.2, 0.7)).collision == F(1, 100) + F(4, 100) + F(49, 100)


def test_decimal_conversion_is_exact():
    assert to_fraction(0.3) == F(3, 10)
    assert to_fraction("2/6") == F(1, 3)
    with pytest.raises(InputError):
        to_fraction("abc")


# --- second moment ------------------------------------------------------------------

def test_bounds_examples():
    assert second_moment_bounds(1, 1, 2) == MomentBounds(F(1, 4), F(1, 2))
    assert second_moment_bounds(2, 1, 2) == MomentBounds(F(4), F(9))


def test_exhaustive_second_moment_examples():
    assert second_moment_exhaustive(1, 1, 2) == F(1, 2)
    assert second_moment_exhaustive(2, 1, 2) == 5
    # T_{2,2} is a single indicator
    assert second_moment_exhaustive(2, 2, 2) == F(1, 4)
    assert enumerate_moments(2, 1, [F(1, 2)] * 2)[1] == 5


def test_exhaustive_budget():
    with pytest.raises(BudgetExceededError):
        second_moment_exhaustive(6, 2, 3, budget=1000)


@pytest.mark.parametrize("n", range(1, 6))
def test_lower_bound_is_squared_mean(n):
    for a in (2, 3, 7):
        for k in range(1, n + 1):
            assert second_moment_bounds(n, k, a).lower == expected_count_k(n, k, a) ** 2


def test_bounds_bracket_exact_second_moment_a3():
    for n in range(1, 5):
        moments = exhaustive_moments(n, 3)
        for k in range(1, n + 1):
            b = second_moment_bounds(n, k, 3)
            assert b.contains(moments[k - 1][1])


def test_bounds_reject_k_above_n():
    with pytest.raises(InputError):
        second_moment_bounds(2, 3, 2)


# --- bound asymptotes --------------------------------------------------------------

def test_upper_coefficient_example():
    assert upper_bound_coefficient(1, 2) == F(3, 4)


def test_lower_asymptote_exact_for_single_letters():
    for n in (10, 10**3, 10**4):
        exact = second_moment_bounds(n, 1, 2).lower
        assert math.log(exact) == pytest.approx(bound_asymptote(n, 1, 2, "lower").ln, abs=1e-12)


def test_lower_asymptote_converges():
    gaps = []
    for n in (10**2, 10**3, 10**4):
        exact = second_moment_bounds(n, 2, 2).lower
        gaps.append(abs(math.log(exact) - bound_asymptote(n, 2, 2, "lower").ln))
    assert gaps[0] > gaps[1] > gaps[2]
    assert gaps[2] < 1e-3


def test_upper_asymptote_converges():
    gaps = []
    for n in (10**2, 10**3, 10**4):
        b = second_moment_bounds(n, 2, 3).upper
        gaps.append(abs(math.log(b) - bound_asymptote(n, 2, 3, "upper").ln))
    assert gaps[0] > gaps[1] > gaps[2]


def test_asymptote_ratio_constant_in_n():
    ratios = [
        bound_asymptote(n, 3, 2, "upper").ln - bound_asymptote(n, 3, 2, "lower").ln
        for n in (5, 50, 5000)
    ]
    assert max(ratios) - min(ratios) < 1e-9


def test_asymptote_which_checked():
    with pytest.raises(InputError):
        bound_asymptote(5, 1, 2, "middle")


# --- majorization -------------------------------------------------------------------

def test_majorizes_examples():
    assert majorizes([1, 0], [F(1, 2), F(1, 2)])
    assert majorizes([F(1, 2)] * 2, [F(1, 2)] * 2)
    assert majorizes(["0.5", "0.3", "0.2"], ["0.4", "0.4", "0.2"])
    assert not majorizes(["0.4", "0.4", "0.2"], ["0.5", "0.3", "0.2"])


def test_majorizes_pads_and_checks_totals():
    assert majorizes([1], [F(1, 2), F(1, 2)])
    with pytest.raises(InputError):
        majorizes([1, 0], [F(1, 2), F(1, 4)])


def random_probs(rnd, a, scale=60):
    w = [rnd.randint(0, scale) for _ in range(a)]
    if not any(w):
        w[0] = 1
    total = sum(w)
    return [F(v, total) for v in w]


def robin_hood(rnd, probs):
    """Move mass from a larger to a smaller entry without crossing: the result is majorized."""
    p = list(probs)
    i, j = rnd.sample(range(len(p)), 2)
    if p[i] < p[j]:
        i, j = j, i
    t = F(rnd.randint(0, 20), 40) * (p[i] - p[j])
    p[i] -= t
    p[j] += t
    return p


def test_majorization_order_properties():
    rnd = random.Random(3)
    for _ in range(200):
        p = random_probs(rnd, 4)
        q = robin_hood(rnd, p)
        r = robin_hood(rnd, q)
        assert majorizes(p, p)
        assert majorizes(p, q) and majorizes(q, r) and majorizes(p, r)
        assert majorizes(p, [F(1, 4)] * 4)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 30), min_size=2, max_size=5).filter(any), st.integers(1, 6))
def test_schur_convexity_of_means(weights, n):
    total = sum(weights)
    p = [F(w, total) for w in weights]
    q = robin_hood(random.Random(sum(weights)), p)
    assert majorizes(p, q)
    assert expected_total(n, p) >= expected_total(n, q)
    for k in range(1, n + 1):
        assert expected_count_k(n, k, p) >= expected_count_k(n, k, q)
