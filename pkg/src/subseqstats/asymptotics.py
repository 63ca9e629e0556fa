"""Log-space asymptotics of ``E[T_n] = sum_k C(n,k)^2 a_n^{-k}`` for growing alphabets.

The alphabet size grows as ``a_n = a * n**alpha``.  The summand peaks near
``k* = n / (1 + sqrt(a_n))`` and is Gaussian there with curvature scale
``A_n = (1 + sqrt(a_n))**2 / sqrt(a_n)``, which gives the master
approximation

    E[T_n] ~ C(n, k*)^2 a_n^{-k*} sqrt(pi n / A_n).

Closed forms for each regime of ``alpha`` follow from evaluating
``C(n, k*)`` asymptotically.  All functions return ``LogReal`` (or a float
ratio); nothing is exponentiated at full size.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb, lgamma, log, log1p, pi, sqrt

from subseqstats.errors import InputError, OutOfRangeError
from subseqstats.logreal import LogReal, log_sum_exp

ALPHA_ZERO = "alpha=0"
ALPHA_LOW = "(0,1/2)"
ALPHA_MID = "[1/2,2/3)"
ALPHA_HIGH = "[2/3,1)"
ALPHA_ONE = "alpha=1"
ALPHA_TOP = "(1,2)"


def log_binom(n: float, k: float) -> float:
    """``ln C(n, k)`` through log-gamma, valid for real ``0 <= k <= n``."""
    if k < 0 or k > n:
        return -math.inf
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


def regime_branch(alpha: float) -> str:
    if alpha < 0 or alpha >= 2:
        raise OutOfRangeError(f"alpha must lie in [0, 2), got {alpha}")
    if alpha == 0:
        return ALPHA_ZERO
    if alpha < 0.5:
        return ALPHA_LOW
    if alpha < 2 / 3:
        return ALPHA_MID
    if alpha < 1:
        return ALPHA_HIGH
    if alpha == 1:
        return ALPHA_ONE
    return ALPHA_TOP


@dataclass(frozen=True)
class RegimeParams:
    """Derived quantities for ``a_n = a * n**alpha``."""

    n: int
    a: float
    alpha: float

    def __post_init__(self):
        if self.n < 1:
            raise InputError(f"n must be positive, got {self.n}")
        if not self.a > 0:
            raise InputError(f"a must be positive, got {self.a}")
        if self.alpha < 0:
            raise OutOfRangeError(f"alpha must be nonnegative, got {self.alpha}")

    @property
    def a_n(self) -> float:
        return self.a * self.n**self.alpha

    @property
    def root(self) -> float:
        return sqrt(self.a_n)

    @property
    def k_star(self) -> float:
        return self.n / (1 + self.root)

    @property
    def big_a(self) -> float:
        return (1 + self.root) ** 2 / self.root

    @property
    def branch(self) -> str:
        return regime_branch(self.alpha)

    @property
    def kappa(self) -> float:
        """Correction exponent in ``C(n, k*) ~ e^kappa n^{k*} / k*!``.

        The ``(1 + o(1))`` factor of the ``(0, 1/2)`` branch is dropped.  At
        ``alpha = 0`` the binomial has no such form; ``kappa_exact`` applies.
        """
        n, k = self.n, self.k_star
        branch = self.branch
        if branch == ALPHA_ZERO:
            return self.kappa_exact
        if branch in (ALPHA_LOW, ALPHA_HIGH):
            return -k * k / (2 * n)
        if branch == ALPHA_MID:
            return -k * k / (2 * n) - k**3 / (6 * n * n)
        if branch == ALPHA_ONE:
            return -1 / (2 * self.a)
        return 0.0

    @property
    def kappa_exact(self) -> float:
        """``ln C(n, k*) - k* ln n + ln Gamma(k* + 1)``, the value kappa approximates."""
        k = self.k_star
        return log_binom(self.n, k) - k * log(self.n) + lgamma(k + 1)

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "a": self.a,
            "alpha": self.alpha,
            "a_n": self.a_n,
            "k_star": self.k_star,
            "A_n": self.big_a,
            "kappa_branch": self.branch,
            "kappa": self.kappa,
        }


def _check_n_an(n, a_n):
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    if not a_n > 0:
        raise InputError(f"a_n must be positive, got {a_n}")


def exact_log_expected_total(n: int, a_n: float) -> LogReal:
    """``ln sum_{k=1}^n C(n,k)^2 a_n^{-k}`` by log-sum-exp over log-gamma terms."""
    _check_n_an(n, a_n)
    ln_a = log(a_n)
    return log_sum_exp(2 * log_binom(n, k) - k * ln_a for k in range(1, n + 1))


def master_approx(n: int, a_n: float) -> LogReal:
    """``C(n,k*)^2 a_n^{-k*} sqrt(pi n / A_n)`` with the binomial at real ``k*``."""
    _check_n_an(n, a_n)
    root = sqrt(a_n)
    k = n / (1 + root)
    big_a = (1 + root) ** 2 / root
    return LogReal.from_log(2 * log_binom(n, k) - k * log(a_n) + 0.5 * log(pi * n / big_a))


def _prefactor(p: RegimeParams) -> float:
    # ln( a_n^{1/4} / (2 sqrt(pi n)) )
    return 0.25 * log(p.a_n) - log(2 * sqrt(pi * p.n))


def _peak_exponent(p: RegimeParams) -> float:
    # ln( e^{2k*} (1 + 1/sqrt(a_n))^{2k*} )
    k = p.k_star
    return 2 * k + 2 * k * log1p(1 / p.root)


def closed_form(n: int, a: float, alpha: float, kappa: float | None = None) -> LogReal:
    """``a_n^{1/4} / (2 sqrt(pi n)) e^{2 kappa} e^{2k*} (1 + a_n^{-1/2})^{2k*}``.

    This is the master approximation after Stirling's formula for ``k*!``.
    ``kappa`` defaults to the branch value of ``RegimeParams.kappa``.
    """
    p = RegimeParams(n, a, alpha)
    if kappa is None:
        kappa = p.kappa
    return LogReal.from_log(_prefactor(p) + 2 * kappa + _peak_exponent(p))


def regime_formula(n: int, a: float, alpha: float) -> LogReal:
    """Closed-form asymptotic of ``E[T_n]`` for the regime containing ``alpha``.

    * ``alpha = 0``: ``a^{1/4} / (2 sqrt(pi n)) (1 + a^{-1/2})^{2n+1}``
    * ``(0, 1/2)`` and ``[1/2, 2/3)``: ``closed_form`` with the branch kappa
    * ``[2/3, 1)``: ``a_n^{1/4} / (2 sqrt(pi n)) exp(2 a^{-1/2} n^{1-alpha/2} - 1/(2(1+sqrt(a_n))))``
    * ``alpha = 1``: ``a^{1/4} / (2 sqrt(pi)) e^{3/(2a)} n^{-1/4} e^{2 sqrt(n/a)}``
    * ``(1, 2)``: ``a_n^{1/4} / (2 sqrt(pi n)) exp(2 a^{-1/2} n^{1-alpha/2})``
    """
    p = RegimeParams(n, a, alpha)
    branch = p.branch
    if branch == ALPHA_ZERO:
        value = 0.25 * log(a) - log(2 * sqrt(pi * n)) + (2 * n + 1) * log1p(1 / sqrt(a))
    elif branch in (ALPHA_LOW, ALPHA_MID):
        value = _prefactor(p) + 2 * p.kappa + _peak_exponent(p)
    elif branch == ALPHA_HIGH:
        value = _prefactor(p) + 2 / sqrt(a) * n ** (1 - alpha / 2) - 0.5 / (1 + p.root)
    elif branch == ALPHA_ONE:
        value = (
            0.25 * log(a)
            - log(2 * sqrt(pi))
            + 1.5 / a
            - 0.25 * log(n)
            + 2 / sqrt(a) * sqrt(n)
        )
    else:
        value = _prefactor(p) + 2 / sqrt(a) * n ** (1 - alpha / 2)
    return LogReal.from_log(value)


def binom_kstar_approx(n: int, a: float, alpha: float) -> LogReal:
    """Asymptotic value of ``C(n, k*)`` for the regime containing ``alpha``.

    At ``alpha = 0`` this is Stirling's formula for ``C(n, cn)`` with
    ``c = 1/(1+sqrt(a))``, written as
    ``(1+sqrt(a))^{n+1} / (sqrt(2 pi n) sqrt(a)^{n-k*+1/2})``.  Otherwise it is
    ``e^kappa n^{k*} / Gamma(k*+1)``.
    """
    p = RegimeParams(n, a, alpha)
    k = p.k_star
    if p.branch == ALPHA_ZERO:
        s = sqrt(a)
        value = (n + 1) * log(1 + s) - 0.5 * log(2 * pi * n) - (n - k + 0.5) * log(s)
    else:
        value = p.kappa + k * log(n) - lgamma(k + 1)
    return LogReal.from_log(value)


def _log1p_minus_x(t: float) -> float:
    # ln(1+t) - t without cancellation for small t
    if abs(t) < 1e-3:
        return sum((-1) ** (m + 1) * t**m / m for m in range(2, 9))
    return log1p(t) - t


def lemma_ratio(n: int, a: float, alpha: float) -> float:
    """``(1 + a_n^{-1/2})^{2n/(1+sqrt(a_n))} / exp(2n / (a_n + sqrt(a_n)))``.

    Tends to 1 for ``alpha`` in ``(2/3, 2)``.
    """
    if not 2 / 3 < alpha < 2:
        raise OutOfRangeError(f"alpha must lie in (2/3, 2), got {alpha}")
    p = RegimeParams(n, a, alpha)
    t = 1 / p.root
    # both exponents share the factor 2n/(1+u); the ratio's log is that times (ln(1+t) - t)
    return math.exp(2 * n / (1 + p.root) * _log1p_minus_x(t))


def permutation_reference(n: int) -> LogReal:
    """``n^{-1/4} e^{2 sqrt(n)} / (2 sqrt(pi e))``, the matching count for two random permutations."""
    if n < 1:
        raise InputError(f"n must be positive, got {n}")
    return LogReal.from_log(-log(2 * sqrt(pi * math.e)) - 0.25 * log(n) + 2 * sqrt(n))


def nearest_k_star(n: int, a_n: float) -> int:
    """Integer nearest to ``k*``, clipped to ``[1, n]``."""
    k = n / (1 + sqrt(a_n))
    return min(n, max(1, math.floor(k + 0.5)))


def summand_shape(n: int, a_n) -> tuple[bool, int]:
    """Exact check of the summand ``C(n,k)^2 a_n^{-k}`` over ``k = 1..n``.

    Returns ``(unimodal, argmax)`` where unimodal means nondecreasing then
    nonincreasing.  ``a_n`` must be an int or Fraction.
    """
    a_n = Fraction(a_n)
    if a_n <= 0:
        raise InputError(f"a_n must be positive, got {a_n}")
    p, q = a_n.numerator, a_n.denominator
    # scaled by p^n: C(n,k)^2 q^k p^(n-k), all integers
    terms = [comb(n, k) ** 2 * q**k * p ** (n - k) for k in range(1, n + 1)]
    peak = max(range(n), key=terms.__getitem__)
    rising = all(terms[i] <= terms[i + 1] for i in range(peak))
    falling = all(terms[i] >= terms[i + 1] for i in range(peak, n - 1))
    return rising and falling, peak + 1
