import itertools
import random
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subseqstats import (
    BudgetExceededError,
    InputError,
    Sequence,
    count_all,
    count_all_direct,
    count_by_level,
    count_k,
    count_k_bruteforce,
)
from subseqstats.counting import count_by_level_batch, count_k_batch, level_tables

from conftest import random_word

words = st.lists(st.integers(0, 2), max_size=7)


# --- examples ---------------------------------------------------------------

@pytest.mark.parametrize(
    "x, y, k, expected",
    [
        ([0, 1], [0, 1], 1, 2),  # matches at (1,1) and (2,2)
        ([0, 1], [0, 1], 7, 0),
        ([0, 0, 0], [0, 0], 2, 3),  # C(3,2) * C(2,2)
    ],
)
def test_count_k_examples(x, y, k, expected):
    assert count_k(x, y, k) == expected


@pytest.mark.parametrize(
    "x, y, expected",
    [([0, 1], [0, 1], [2, 1]), ([0], [1], [0]), ([0, 0], [0, 0], [4, 1])],
)
def test_count_by_level_examples(x, y, expected):
    assert count_by_level(x, y) == expected


@pytest.mark.parametrize(
    "x, y, expected",
    [([0, 1], [0, 1], 3), ([0, 0], [0, 0], 5), ([0, 1, 2], [3, 4, 5], 0), ([], [0, 1], 0)],
)
def test_count_all_engines_examples(x, y, expected):
    assert count_all(x, y) == expected
    assert count_all_direct(x, y) == expected


def test_bruteforce_examples():
    assert count_k_bruteforce([0, 1], [0, 1], 2) == 1
    assert count_k_bruteforce([0, 1, 0], [1, 0], 1) == 3
    assert count_k_bruteforce([0, 1, 0], [1, 0], 3) == 0


# --- errors -----------------------------------------------------------------

def test_symbol_outside_alphabet_rejected():
    with pytest.raises(InputError):
        Sequence((0, 3), 3)
    with pytest.raises(InputError):
        count_k(Sequence((0, 1), 2), [0, 2], 1)


def test_mismatched_alphabets_rejected():
    with pytest.raises(InputError):
        count_k(Sequence((0, 1), 2), Sequence((0, 1), 3), 1)


@pytest.mark.parametrize("k", [0, -1, 1.5, True])
def test_bad_k_rejected(k):
    with pytest.raises(InputError):
        count_k([0], [0], k)


def test_negative_symbol_rejected():
    with pytest.raises(InputError):
        count_all([0, -1], [0])


def test_bruteforce_budget():
    x = [0] * 12
    with pytest.raises(BudgetExceededError) as info:
        count_k_bruteforce(x, x, 6, budget=1000)
    assert info.value.needed == comb(12, 6) ** 2
    # k beyond the length is an empty sum, not an enumeration
    assert count_k_bruteforce(x, x, 20, budget=1) == 0


def test_sequence_infers_alphabet():
    s = Sequence.from_symbols([2, 0, 1])
    assert s.alphabet_size == 3 and s.length == 3 and list(s) == [2, 0, 1]


# --- oracle equivalence -----------------------------------------------------

def test_exhaustive_binary_pairs_match_bruteforce():
    for nx, ny in itertools.product(range(0, 5), repeat=2):
        for x in itertools.product(range(2), repeat=nx):
            for y in itertools.product(range(2), repeat=ny):
                for k in range(1, min(nx, ny) + 1):
                    assert count_k(x, y, k) == count_k_bruteforce(x, y, k)


@settings(max_examples=200, deadline=None)
@given(words, words, st.integers(1, 8))
def test_dp_matches_bruteforce(x, y, k):
    assert count_k(x, y, k) == count_k_bruteforce(x, y, k)


@settings(max_examples=200, deadline=None)
@given(words, words)
def test_symmetry_and_engines(x, y):
    prof = count_by_level(x, y)
    assert prof == count_by_level(y, x)
    assert sum(prof) == count_all_direct(x, y) == count_all_direct(y, x)


@settings(max_examples=100, deadline=None)
@given(words, words, st.integers(0, 2), st.booleans())
def test_appending_never_decreases(x, y, sym, to_x):
    x2, y2 = (x + [sym], y) if to_x else (x, y + [sym])
    for k in range(1, 8):
        assert count_k(x2, y2, k) >= count_k(x, y, k)
    assert count_all(x2, y2) >= count_all(x, y)


@pytest.mark.parametrize("n", [1, 5, 12, 40, 70])
def test_constant_words(n):
    c = [3] * n
    for k in sorted({1, max(1, n // 2), n}):
        assert count_k(c, c, k) == comb(n, k) ** 2
    assert count_all(c, c) == comb(2 * n, n) - 1
    assert count_all_direct(c, c) == comb(2 * n, n) - 1


@pytest.mark.parametrize("n", [1, 6, 30])
def test_distinct_letters(n):
    x = list(range(n))
    for k in range(1, n + 1):
        assert count_k(x, x, k) == comb(n, k)


def test_unequal_lengths_against_bruteforce(rng):
    for _ in range(50):
        x = random_word(rng, rng.randint(0, 9), 3)
        y = random_word(rng, rng.randint(0, 5), 3)
        for k in range(1, 6):
            assert count_k(x, y, k) == count_k_bruteforce(x, y, k)


# --- level tables -----------------------------------------------------------

def test_level_tables_invariants(rng):
    x = random_word(rng, 9, 2)
    y = random_word(rng, 7, 2)
    for tables in level_tables(x, y):
        e, p = tables.ending_counts, tables.prefix_counts
        assert e.shape == p.shape == (10, 8)
        assert not p[0, :].any() and not p[:, 0].any()
        assert not e[0, :].any() and not e[:, 0].any()
        for i in range(1, 10):
            for j in range(1, 8):
                if x[i - 1] != y[j - 1]:
                    assert e[i, j] == 0
                assert p[i, j] == e[: i + 1, : j + 1].sum()
        assert int(p[-1, -1]) == count_k_bruteforce(x, y, tables.level)


def test_level_tables_ending_counts_by_enumeration():
    x, y = [0, 1, 0, 1], [1, 0, 1]
    for tables in level_tables(x, y):
        lvl = tables.level
        for i in range(1, 5):
            for j in range(1, 4):
                want = sum(
                    1
                    for I in itertools.combinations(range(i), lvl)
                    for J in itertools.combinations(range(j), lvl)
                    if I[-1] == i - 1 and J[-1] == j - 1 and all(x[a] == y[b] for a, b in zip(I, J))
                )
                assert tables.ending_counts[i, j] == want


def test_switch_to_big_integers():
    # C(70,35)^2 is far beyond int64; the grids must widen without overflow
    c = [0] * 70
    tables = list(level_tables(c, c, max_level=35))
    assert tables[0].prefix_counts.dtype == np.int64
    assert tables[-1].prefix_counts.dtype == object
    assert tables[-1].prefix_counts[-1, -1] == comb(70, 35) ** 2


# --- batch kernels ----------------------------------------------------------

def test_batch_matches_single(rng):
    xs = np.array([random_word(rng, 8, 3) for _ in range(30)])
    ys = np.array([random_word(rng, 6, 3) for _ in range(30)])
    assert count_k_batch(xs, ys, 2) == [count_k(x, y, 2) for x, y in zip(xs, ys)]
    assert count_by_level_batch(xs, ys) == [count_by_level(x, y) for x, y in zip(xs, ys)]


def test_batch_shape_checked():
    with pytest.raises(InputError):
        count_k_batch(np.zeros((2, 3)), np.zeros((3, 3)), 1)


def test_profile_across_dtype_boundaries():
    # levels widen to Python ints mid-profile and narrow again near the end
    c = [1] * 70
    prof = count_by_level(c, c)
    assert prof == [comb(70, k) ** 2 for k in range(1, 71)]
