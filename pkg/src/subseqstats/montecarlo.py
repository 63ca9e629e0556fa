"""Seeded sampling of random word pairs and normality checks for ``T_{n,k}``.

Random streams
--------------
Every replica (one word pair) draws from its own PCG64 generator, seeded
through ``numpy.random.SeedSequence(seed, spawn_key=(run, replica))``.  Only
the raw 64-bit output (``random_raw``) is consumed, and both PCG64 and
SeedSequence are bit-stable across platforms and numpy releases, so a
``(seed, run, replica)`` triple always yields the same words.  Because
streams are per replica and results are merged in replica order, the
report does not depend on how many worker processes were used.

Letters are drawn by inverting the exact cumulative distribution: the top 53
bits of a raw draw give ``m``, i.e. ``u = m / 2**53``, and letter ``j`` is
chosen when ``F_{j-1} <= u < F_j``.  The comparison ``u < F_j`` is done on
integers as ``m < ceil(F_j * 2**53)``, so it is exact for rational ``F_j``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from subseqstats.counting import Sequence, count_k_batch
from subseqstats.errors import DegenerateDistributionError, InputError
from subseqstats.moments import as_distribution, expected_count_k

ALGORITHM = "PCG64 via numpy.random.SeedSequence(seed, spawn_key=(run, stream_index))"
_MANTISSA = 53
_CHUNK = 500
HISTOGRAM_EDGES = tuple(x / 2 for x in range(-8, 9))


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_index: int = 0
    run: int = 0

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.stream_index < 0 or self.run < 0:
            raise InputError("stream and run indices must be nonnegative")

    def bit_generator(self) -> np.random.PCG64:
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.run, self.stream_index))
        return np.random.PCG64(seq)

    def raw(self, count: int) -> np.ndarray:
        """``count`` raw 64-bit outputs from the start of this stream."""
        return self.bit_generator().random_raw(count)


def _thresholds(dist) -> np.ndarray:
    pv = as_distribution(dist)
    scale = 1 << _MANTISSA
    cum = Fraction(0)
    out = []
    for p in pv.probs:
        cum += p
        out.append(-((-cum.numerator * scale) // cum.denominator))  # ceil
    return np.array(out, dtype=np.uint64)


def _letters(raw: np.ndarray, thresholds: np.ndarray) -> np.ndarray:
    m = raw >> np.uint64(64 - _MANTISSA)
    return np.searchsorted(thresholds, m, side="right").astype(np.int64)


def sample_word(n: int, dist, rng: RngStream) -> Sequence:
    """``n`` i.i.d. letters from ``dist`` (alphabet size or probabilities)."""
    if n < 0:
        raise InputError(f"word length must be nonnegative, got {n}")
    pv = as_distribution(dist)
    letters = _letters(rng.raw(n), _thresholds(pv)) if n else np.empty(0, dtype=np.int64)
    return Sequence(tuple(letters.tolist()), pv.size)


def normal_cdf(x: float) -> float:
    """Standard normal CDF, ``erfc(-x / sqrt 2) / 2``.

    ``math.erfc`` keeps full relative precision in the lower tail, so the
    absolute error stays near machine epsilon everywhere.
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def kolmogorov_distance(samples) -> float:
    """Sup distance between the empirical CDF of ``samples`` and the standard normal."""
    xs = sorted(float(v) for v in samples)
    if not xs:
        raise InputError("kolmogorov_distance needs at least one sample")
    size = len(xs)
    worst = 0.0
    for i, v in enumerate(xs, start=1):
        phi = normal_cdf(v)
        worst = max(worst, abs(i / size - phi), abs((i - 1) / size - phi))
    return min(worst, 1.0)


def histogram(values, edges=HISTOGRAM_EDGES) -> list:
    """Counts over ``(-inf, e0), [e0, e1), ..., [e_last, inf)``; bins as ``(lo, hi)`` with ``None`` for infinite ends."""
    counts = [0] * (len(edges) + 1)
    arr = np.asarray(values, dtype=float)
    idx = np.searchsorted(np.asarray(edges), arr, side="right")
    for i in idx.tolist():
        counts[i] += 1
    bounds = [None, *edges, None]
    return [((bounds[i], bounds[i + 1]), counts[i]) for i in range(len(counts))]


def _replica_counts(n, k, thresholds, seed, run, start, stop):
    xs = np.empty((stop - start, n), dtype=np.int64)
    ys = np.empty((stop - start, n), dtype=np.int64)
    for row, replica in enumerate(range(start, stop)):
        letters = _letters(RngStream(seed, replica, run).raw(2 * n), thresholds)
        xs[row] = letters[:n]
        ys[row] = letters[n:]
    return count_k_batch(xs, ys, k)


@dataclass
class SimulationReport:
    n: int
    k: int
    probs: tuple
    num_samples: int
    seed: int
    run: int
    sample_mean: float
    sample_variance: float
    sample_second_moment: float
    kolmogorov_distance: float
    histogram: list
    theoretical_mean: Fraction
    counts: tuple = field(repr=False)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "probs": [str(p) for p in self.probs],
            "num_samples": self.num_samples,
            "seed": self.seed,
            "run": self.run,
            "rng": ALGORITHM,
            "sample_mean": self.sample_mean,
            "sample_variance": self.sample_variance,
            "sample_second_moment": self.sample_second_moment,
            "kolmogorov_distance": self.kolmogorov_distance,
            "histogram": [
                {"lo": lo, "hi": hi, "count": c} for (lo, hi), c in self.histogram
            ],
            "theoretical_mean": self.theoretical_mean,
        }


def draw_counts(n: int, k: int, dist, num_samples: int, seed: int, parallelism: int = 1, run: int = 0) -> list[int]:
    """``T_{n,k}`` for ``num_samples`` independent word pairs, in replica order."""
    if parallelism < 1:
        raise InputError(f"parallelism must be positive, got {parallelism}")
    RngStream(seed, 0, run)
    thresholds = _thresholds(dist)
    spans = [(s, min(num_samples, s + _CHUNK)) for s in range(0, num_samples, _CHUNK)]
    if parallelism == 1 or len(spans) == 1:
        parts = [_replica_counts(n, k, thresholds, seed, run, a, b) for a, b in spans]
    else:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            futures = [
                pool.submit(_replica_counts, n, k, thresholds, seed, run, a, b) for a, b in spans
            ]
            parts = [f.result() for f in futures]
    return [c for part in parts for c in part]


def simulate(n: int, k: int, dist, num_samples: int, seed: int, parallelism: int = 1, run: int = 0) -> SimulationReport:
    """Sample ``T_{n,k}``, standardize by the sample mean and deviation, and measure d_K to N(0,1)."""
    if n < 1 or k < 1:
        raise InputError(f"n and k must be positive, got n={n}, k={k}")
    if num_samples < 2:
        raise InputError(f"need at least 2 samples, got {num_samples}")
    pv = as_distribution(dist)
    counts = draw_counts(n, k, pv, num_samples, seed, parallelism, run)

    total = sum(counts)
    total_sq = sum(c * c for c in counts)
    mean = Fraction(total, num_samples)
    var = (Fraction(total_sq) - total * mean) / (num_samples - 1)
    if var == 0:
        raise DegenerateDistributionError(
            f"T_{{n,k}} is constant ({counts[0]}) across all {num_samples} samples"
        )
    theory = expected_count_k(n, k, pv)

    # below 2**53 ints convert exactly; above, shift first so rounding stays small
    shift = 0 if max(counts) < 2**53 else math.floor(theory)
    centre = float(mean - shift)
    sd = math.sqrt(float(var))
    z = [(float(c - shift) - centre) / sd for c in counts]

    return SimulationReport(
        n=n,
        k=k,
        probs=pv.probs,
        num_samples=num_samples,
        seed=seed,
        run=run,
        sample_mean=float(mean),
        sample_variance=float(var),
        sample_second_moment=float(Fraction(total_sq, num_samples)),
        kolmogorov_distance=kolmogorov_distance(z),
        histogram=histogram(z),
        theoretical_mean=theory,
        counts=tuple(counts),
    )


def clt_trend(n_list, k: int, dist, num_samples: int, seed: int, parallelism: int = 1) -> list[tuple[int, float]]:
    """Kolmogorov distance to N(0,1) for each ``n``; run ``t`` uses stream family ``t``."""
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise InputError("clt_trend needs at least two word lengths")
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise InputError(f"word lengths must be strictly increasing, got {n_list}")
    out = []
    for run, n in enumerate(n_list):
        report = simulate(n, k, dist, num_samples, seed, parallelism, run=run)
        out.append((n, report.kolmogorov_distance))
    return out


def is_decreasing(values, slack: float) -> bool:
    """Each value is at most the previous one plus ``slack``."""
    return all(b <= a + slack for a, b in zip(values, values[1:]))
