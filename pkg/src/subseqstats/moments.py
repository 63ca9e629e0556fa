"""Exact moments of subsequence counts in random words.

Letters are i.i.d. with law ``p`` on ``{0, ..., a-1}``.  With the collision
probability ``q = sum(p_j ** 2)`` (``1/a`` for the uniform law), each pair
of index tuples of length k matches with probability ``q ** k``, so

    E[T_{n,k}] = C(n,k)^2 q^k,        E[T_n] = sum_{k=1}^n C(n,k)^2 q^k.

Everything here is exact rational arithmetic on ``fractions.Fraction``;
callers convert to float at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial

import numpy as np

from subseqstats.counting import count_by_level_batch
from subseqstats.errors import BudgetExceededError, InputError
from subseqstats.logreal import LogReal

DEFAULT_EXHAUSTIVE_BUDGET = 10**6


def to_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, ``"num/den"`` / decimal string, or float.

    Floats go through their shortest decimal repr, so ``0.3`` becomes ``3/10``.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InputError(f"non-finite value {value}")
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"cannot read {value!r} as a rational") from exc
    raise InputError(f"unsupported numeric type {type(value).__name__}")


@dataclass(frozen=True)
class ProbVector:
    """Letter distribution on ``{0, ..., a-1}`` with exact rational entries."""

    probs: tuple

    def __post_init__(self):
        probs = tuple(to_fraction(p) for p in self.probs)
        if not probs:
            raise InputError("a distribution needs at least one letter")
        if any(p < 0 for p in probs):
            raise InputError("probabilities must be nonnegative")
        if sum(probs) != 1:
            raise InputError(f"probabilities sum to {sum(probs)}, not exactly 1")
        object.__setattr__(self, "probs", probs)

    @classmethod
    def uniform(cls, a: int) -> ProbVector:
        a = _check_alphabet(a)
        return cls(tuple(Fraction(1, a) for _ in range(a)))

    @property
    def size(self) -> int:
        return len(self.probs)

    @property
    def collision(self) -> Fraction:
        """Probability that two independent letters coincide."""
        return sum((p * p for p in self.probs), Fraction(0))


@dataclass(frozen=True)
class MomentBounds:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    def contains(self, value) -> bool:
        return self.lower <= value <= self.upper


def _check_alphabet(a) -> int:
    if isinstance(a, bool) or int(a) != a or a < 1:
        raise InputError(f"alphabet size must be a positive integer, got {a!r}")
    return int(a)


def _check_positive(name, v) -> int:
    if isinstance(v, bool) or int(v) != v or v < 1:
        raise InputError(f"{name} must be a positive integer, got {v!r}")
    return int(v)


def as_distribution(dist) -> ProbVector:
    """Normalize an alphabet size or a list of probabilities to a ``ProbVector``."""
    if isinstance(dist, ProbVector):
        return dist
    if isinstance(dist, (int, np.integer)) and not isinstance(dist, bool):
        return ProbVector.uniform(int(dist))
    return ProbVector(tuple(dist))


def collision_probability(dist) -> Fraction:
    if isinstance(dist, (int, np.integer)) and not isinstance(dist, bool):
        return Fraction(1, _check_alphabet(dist))
    return as_distribution(dist).collision


def expected_count_k(n: int, k: int, dist) -> Fraction:
    """``E[T_{n,k}] = C(n,k)^2 q^k``; zero when ``k > n``.

    >>> expected_count_k(4, 2, 2)
    Fraction(9, 1)
    """
    n = _check_positive("n", n)
    k = _check_positive("k", k)
    q = collision_probability(dist)
    if k > n:
        return Fraction(0)
    return comb(n, k) ** 2 * q**k


def expected_total(n: int, dist) -> Fraction:
    """``E[T_n]``, the expected number of nonempty common subsequences."""
    n = _check_positive("n", n)
    q = collision_probability(dist)
    return sum((comb(n, k) ** 2 * q**k for k in range(1, n + 1)), Fraction(0))


def second_moment_bounds(n: int, k: int, a: int) -> MomentBounds:
    """Lower and upper bounds on ``E[T_{n,k}^2]`` for uniform letters.

    The lower bound is the squared mean.  The upper bound is
    ``C(n,k)^2 a^-k * sum_j C(n-k,j)^2 C(n-j,k-j)^2 a^-j``, obtained by
    dropping the dependence between two embeddings that share positions.
    """
    n = _check_positive("n", n)
    k = _check_positive("k", k)
    a = _check_alphabet(a)
    if k > n:
        raise InputError(f"k = {k} exceeds n = {n}")
    lower = Fraction(comb(n, k) ** 4, a ** (2 * k))
    inner = sum(
        (Fraction(comb(n - k, j) ** 2 * comb(n - j, k - j) ** 2, a**j) for j in range(k + 1)),
        Fraction(0),
    )
    upper = Fraction(comb(n, k) ** 2, a**k) * inner
    return MomentBounds(lower, upper)


def upper_bound_coefficient(k: int, a: int) -> Fraction:
    """Leading coefficient of ``n^{4k}`` in the upper second-moment bound."""
    k = _check_positive("k", k)
    a = _check_alphabet(a)
    inner = sum(
        (Fraction(1, factorial(j) ** 2 * factorial(k - j) ** 2 * a**j) for j in range(k + 1)),
        Fraction(0),
    )
    return Fraction(1, factorial(k) ** 2 * a**k) * inner


def bound_asymptote(n: int, k: int, a: int, which: str = "lower") -> LogReal:
    """Leading-order term of a second-moment bound, as a ``LogReal``.

    ``lower``: ``n^{4k} / ((k!)^4 a^{2k})``; ``upper``:
    ``upper_bound_coefficient(k, a) * n^{4k}``.
    """
    n = _check_positive("n", n)
    k = _check_positive("k", k)
    a = _check_alphabet(a)
    if k > n:
        raise InputError(f"k = {k} exceeds n = {n}")
    growth = LogReal.from_log(4 * k * math.log(n))
    if which == "lower":
        coef = Fraction(1, factorial(k) ** 4 * a ** (2 * k))
    elif which == "upper":
        coef = upper_bound_coefficient(k, a)
    else:
        raise InputError(f"which must be 'lower' or 'upper', got {which!r}")
    return LogReal.from_value(coef) * growth


def _words(n: int, size: int) -> np.ndarray:
    return np.array(list(product(range(size), repeat=n)), dtype=np.int64).reshape(-1, n)


def exhaustive_moments(n: int, dist, budget: int = DEFAULT_EXHAUSTIVE_BUDGET, chunk: int = 1 << 15):
    """Exact ``(E[T_{n,k}], E[T_{n,k}^2])`` for ``k = 1..n`` by full enumeration.

    Every one of the ``a^{2n}`` word pairs is counted with the leveled
    dynamic program and weighted by its probability.  Raises
    ``BudgetExceededError`` when ``a^{2n} > budget``.
    """
    n = _check_positive("n", n)
    pv = as_distribution(dist)
    needed = pv.size ** (2 * n)
    if needed > budget:
        raise BudgetExceededError(needed, budget, "word pairs")

    words = _words(n, pv.size)
    uniform = len(set(pv.probs)) == 1
    if uniform:
        weights = None
    else:
        weights = [math.prod((pv.probs[s] for s in w), start=Fraction(1)) for w in words.tolist()]

    first = [0] * n
    second = [0] * n
    num_words = len(words)
    rows_per_block = max(1, chunk // num_words)
    for start in range(0, num_words, rows_per_block):
        stop = min(num_words, start + rows_per_block)
        xs = np.repeat(words[start:stop], num_words, axis=0)
        ys = np.tile(words, (stop - start, 1))
        profiles = count_by_level_batch(xs, ys)
        for idx, prof in enumerate(profiles):
            if weights is None:
                w = 1
            else:
                w = weights[start + idx // num_words] * weights[idx % num_words]
                if w == 0:
                    continue
            for lvl, t in enumerate(prof):
                if t:
                    first[lvl] += w * t
                    second[lvl] += w * t * t

    scale = Fraction(1, needed) if weights is None else Fraction(1)
    return [(Fraction(f) * scale, Fraction(s) * scale) for f, s in zip(first, second)]


def second_moment_exhaustive(n: int, k: int, a: int, budget: int = DEFAULT_EXHAUSTIVE_BUDGET) -> Fraction:
    """Exact ``E[T_{n,k}^2]`` for uniform letters by enumerating all word pairs."""
    n = _check_positive("n", n)
    k = _check_positive("k", k)
    a = _check_alphabet(a)
    needed = a ** (2 * n)
    if needed > budget:
        raise BudgetExceededError(needed, budget, "word pairs")
    if k > n:
        return Fraction(0)
    return exhaustive_moments(n, a, budget)[k - 1][1]


def _padded_sorted(values, size: int) -> list[Fraction]:
    vals = [to_fraction(v) for v in values]
    vals += [Fraction(0)] * (size - len(vals))
    return sorted(vals, reverse=True)


def majorizes(p, q) -> bool:
    """True when ``p`` majorizes ``q``: sorted partial sums of ``p`` dominate those of ``q``.

    Shorter vectors are padded with zeros; totals must agree.
    """
    pv = p.probs if isinstance(p, ProbVector) else p
    qv = q.probs if isinstance(q, ProbVector) else q
    size = max(len(pv), len(qv))
    ps, qs = _padded_sorted(pv, size), _padded_sorted(qv, size)
    if sum(ps) != sum(qs):
        raise InputError("majorization compares vectors with equal totals")
    acc_p = acc_q = Fraction(0)
    for a, b in zip(ps, qs):
        acc_p += a
        acc_q += b
        if acc_p < acc_q:
            return False
    return True
