"""Exact counts of common-subsequence embeddings between two words.

A k-long common subsequence of ``x`` and ``y`` is a pair of strictly
increasing index tuples ``(i_1 < ... < i_k)``, ``(j_1 < ... < j_k)`` with
``x[i_s] == y[j_s]`` for every ``s``.  Pairs of index tuples are counted, not
distinct strings.

Three engines are provided:

* a leveled dynamic program (``count_k``, ``count_by_level``, ``count_all``),
  one pass over the ``n_x * n_y`` grid per level;
* a direct recurrence over all lengths at once (``count_all_direct``);
* plain enumeration (``count_k_bruteforce``), used as ground truth.

Counts are Python ints.  Grids are kept in ``int64`` while the level's
largest possible entry fits, and switch to object arrays of Python ints
beyond that, so no engine ever overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterator

import numpy as np

from subseqstats.errors import BudgetExceededError, InputError

DEFAULT_BRUTEFORCE_BUDGET = 10**7
_INT64_MAX = 2**63 - 1


@dataclass(frozen=True)
class Sequence:
    """A word over the alphabet ``{0, ..., alphabet_size - 1}``."""

    symbols: tuple
    alphabet_size: int

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))
        if int(self.alphabet_size) < 1:
            raise InputError(f"alphabet size must be positive, got {self.alphabet_size}")
        for pos, s in enumerate(self.symbols):
            if not 0 <= s < self.alphabet_size:
                raise InputError(
                    f"symbol {s} at position {pos} is outside [0, {self.alphabet_size})"
                )

    @classmethod
    def from_symbols(cls, symbols, alphabet_size: int | None = None) -> Sequence:
        """Build a word, inferring the alphabet as ``max symbol + 1`` when not given."""
        symbols = tuple(int(s) for s in symbols)
        if alphabet_size is None:
            alphabet_size = max(symbols, default=0) + 1
        return cls(symbols, alphabet_size)

    @property
    def length(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __getitem__(self, idx):
        return self.symbols[idx]


@dataclass
class LevelTables:
    """Grids for one level ``l`` of the leveled dynamic program.

    ``ending_counts[i, j]`` is the number of l-long common subsequences whose
    last matched pair is exactly ``(i, j)`` (1-based; row and column 0 are
    zero).  ``prefix_counts[i, j]`` counts those lying inside ``x[:i]`` and
    ``y[:j]``.
    """

    ending_counts: np.ndarray
    prefix_counts: np.ndarray
    level: int


def _as_symbols(word) -> np.ndarray:
    if isinstance(word, Sequence):
        return np.asarray(word.symbols, dtype=np.int64)
    arr = np.asarray(list(word), dtype=np.int64)
    if arr.ndim != 1:
        raise InputError("a word must be a flat sequence of symbol ids")
    if arr.size and arr.min() < 0:
        raise InputError("symbol ids must be nonnegative")
    return arr


def _pair(x, y) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(x, Sequence) and isinstance(y, Sequence):
        if x.alphabet_size != y.alphabet_size:
            raise InputError(
                f"words use different alphabets ({x.alphabet_size} vs {y.alphabet_size})"
            )
    else:
        # a bare list checked against the Sequence partner's alphabet
        ref = x if isinstance(x, Sequence) else y if isinstance(y, Sequence) else None
        if ref is not None:
            other = y if ref is x else x
            Sequence(tuple(other), ref.alphabet_size)
    return _as_symbols(x), _as_symbols(y)


def _check_k(k) -> int:
    if isinstance(k, bool) or int(k) != k:
        raise InputError(f"k must be an integer, got {k!r}")
    k = int(k)
    if k < 1:
        raise InputError(f"k must be at least 1, got {k}")
    return k


def _level_dtype(nx: int, ny: int, level: int):
    # every prefix entry at this level is at most C(nx, level) * C(ny, level)
    return np.int64 if comb(nx, level) * comb(ny, level) <= _INT64_MAX else object


def _sweep(xs: np.ndarray, ys: np.ndarray, max_level: int) -> Iterator[tuple]:
    """Yield ``(level, ending, prefix)`` for levels ``1..max_level``.

    Works on arrays with arbitrary leading batch axes: ``xs`` is
    ``(..., nx)`` and ``ys`` is ``(..., ny)``.  Only the previous level's
    prefix grid is retained.
    """
    nx, ny = xs.shape[-1], ys.shape[-1]
    match = xs[..., :, None] == ys[..., None, :]
    shape = match.shape[:-2] + (nx + 1, ny + 1)
    prev = None
    for level in range(1, max_level + 1):
        dtype = _level_dtype(nx, ny, level)
        ending = np.zeros(shape, dtype=dtype)
        if prev is None:
            ending[..., 1:, 1:] = match
        else:
            # matched entries count l-long embeddings, so they fit this level's dtype
            # even when the previous level's grid needed Python ints
            ending[..., 1:, 1:] = np.where(match, prev[..., :-1, :-1], 0)
        # 2-D inclusive prefix sum == P(i-1,j) + P(i,j-1) - P(i-1,j-1) + E(i,j)
        prefix = ending.cumsum(axis=-2).cumsum(axis=-1)
        yield level, ending, prefix
        prev = prefix


def level_tables(x, y, max_level: int | None = None) -> Iterator[LevelTables]:
    """Iterate over the dynamic-programming grids of ``x`` and ``y`` level by level."""
    xs, ys = _pair(x, y)
    top = min(xs.size, ys.size) if max_level is None else min(max_level, xs.size, ys.size)
    for level, ending, prefix in _sweep(xs, ys, top):
        yield LevelTables(ending, prefix, level)


def count_k(x, y, k: int) -> int:
    """Number of k-long common subsequences of ``x`` and ``y``.

    >>> count_k([0, 0, 0], [0, 0], 2)
    3
    """
    k = _check_k(k)
    xs, ys = _pair(x, y)
    if k > min(xs.size, ys.size):
        return 0
    for _, _, prefix in _sweep(xs, ys, k):
        pass
    return int(prefix[-1, -1])


def count_by_level(x, y) -> list[int]:
    """Counts for every length ``1..min(len(x), len(y))`` from a single sweep."""
    xs, ys = _pair(x, y)
    top = min(xs.size, ys.size)
    out = []
    for _, _, prefix in _sweep(xs, ys, top):
        total = int(prefix[-1, -1])
        out.append(total)
        if total == 0:
            break
    # no l-long match implies no longer one
    out.extend([0] * (top - len(out)))
    return out


def count_all(x, y) -> int:
    """Total number of nonempty common subsequences, summed over all lengths."""
    return sum(count_by_level(x, y))


def count_all_direct(x, y) -> int:
    """Total over all lengths by a single recurrence on the ``n_x * n_y`` grid.

    ``A(i, j)`` counts common subsequences (the empty one included) inside
    ``x[:i]`` and ``y[:j]``::

        A(i, j) = A(i-1, j) + A(i, j-1) - A(i-1, j-1) + [x_i == y_j] A(i-1, j-1)

    with ``A(0, .) = A(., 0) = 1``.  Each row is produced from the previous
    one with a running sum, since ``A(i, j) - A(i-1, j)`` accumulates the
    matched terms along the row.
    """
    xs, ys = _pair(x, y)
    row = np.ones(ys.size + 1, dtype=object)
    for sym in xs:
        gained = np.where(ys == sym, row[:-1], 0).cumsum()
        row = row.copy()
        row[1:] += gained
    return int(row[-1]) - 1


def count_k_bruteforce(x, y, k: int, budget: int = DEFAULT_BRUTEFORCE_BUDGET) -> int:
    """Enumerate every pair of k-index tuples and count letterwise matches.

    Raises ``BudgetExceededError`` when ``C(n_x, k) * C(n_y, k) > budget``.
    """
    k = _check_k(k)
    xs, ys = _pair(x, y)
    xs, ys = xs.tolist(), ys.tolist()
    if k > min(len(xs), len(ys)):
        return 0
    needed = comb(len(xs), k) * comb(len(ys), k)
    if needed > budget:
        raise BudgetExceededError(needed, budget, "index-tuple pairs")
    y_words = [tuple(ys[j] for j in idx) for idx in combinations(range(len(ys)), k)]
    total = 0
    for idx in combinations(range(len(xs)), k):
        total += y_words.count(tuple(xs[i] for i in idx))
    return total


def _batch(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if xs.ndim != 2 or ys.ndim != 2 or xs.shape[0] != ys.shape[0]:
        raise InputError("batched words must be 2-D arrays with equal row counts")
    return xs, ys


def count_k_batch(xs, ys, k: int) -> list[int]:
    """``count_k`` for each row pair of two ``(batch, n)`` symbol arrays."""
    k = _check_k(k)
    xs, ys = _batch(xs, ys)
    if k > min(xs.shape[1], ys.shape[1]):
        return [0] * xs.shape[0]
    for _, _, prefix in _sweep(xs, ys, k):
        pass
    return [int(v) for v in prefix[:, -1, -1]]


def count_by_level_batch(xs, ys) -> list[list[int]]:
    """``count_by_level`` for each row pair of two ``(batch, n)`` symbol arrays."""
    xs, ys = _batch(xs, ys)
    top = min(xs.shape[1], ys.shape[1])
    rows: list[list[int]] = [[] for _ in range(xs.shape[0])]
    for _, _, prefix in _sweep(xs, ys, top):
        last = prefix[:, -1, -1]
        for row, v in zip(rows, last):
            row.append(int(v))
        if not np.any(last):
            break
    for row in rows:
        row.extend([0] * (top - len(row)))
    return rows
