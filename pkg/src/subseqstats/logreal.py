"""Nonnegative reals stored by their natural logarithm."""

from __future__ import annotations

import math
from dataclasses import dataclass

ZERO = "zero"
POSITIVE = "positive"


@dataclass(frozen=True)
class LogReal:
    """A value ``exp(ln)`` or exactly zero.

    Products add logarithms; sums are anchored at the larger term so nothing
    is exponentiated at full magnitude.
    """

    sign: str
    ln: float = 0.0

    def __post_init__(self):
        if self.sign not in (ZERO, POSITIVE):
            raise ValueError(f"sign must be {ZERO!r} or {POSITIVE!r}, got {self.sign!r}")
        if self.sign == POSITIVE and math.isnan(self.ln):
            raise ValueError("log magnitude is NaN")

    @classmethod
    def zero(cls) -> LogReal:
        return cls(ZERO, 0.0)

    @classmethod
    def from_log(cls, ln: float) -> LogReal:
        if ln == -math.inf:
            return cls.zero()
        return cls(POSITIVE, float(ln))

    @classmethod
    def from_value(cls, value) -> LogReal:
        """Accepts ints (any size), Fractions and floats; negatives are rejected."""
        if value < 0:
            raise ValueError("LogReal holds nonnegative values only")
        if value == 0:
            return cls.zero()
        # math.log is exact-ish on big ints; Fractions split to avoid float overflow
        num = getattr(value, "numerator", None)
        den = getattr(value, "denominator", None)
        if num is not None and den is not None and not isinstance(value, float):
            return cls(POSITIVE, math.log(num) - math.log(den))
        return cls(POSITIVE, math.log(value))

    @property
    def is_zero(self) -> bool:
        return self.sign == ZERO

    def __mul__(self, other: LogReal) -> LogReal:
        if self.is_zero or other.is_zero:
            return LogReal.zero()
        return LogReal(POSITIVE, self.ln + other.ln)

    def __truediv__(self, other: LogReal) -> LogReal:
        if other.is_zero:
            raise ZeroDivisionError("division by a zero LogReal")
        if self.is_zero:
            return LogReal.zero()
        return LogReal(POSITIVE, self.ln - other.ln)

    def __add__(self, other: LogReal) -> LogReal:
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        hi, lo = max(self.ln, other.ln), min(self.ln, other.ln)
        return LogReal(POSITIVE, hi + math.log1p(math.exp(lo - hi)))

    def __float__(self) -> float:
        if self.is_zero:
            return 0.0
        return math.exp(self.ln)

    def as_dict(self) -> dict:
        """JSON-friendly form used by the CLI."""
        return {"sign": self.sign, "ln": None if self.is_zero else self.ln}


def log_sum_exp(logs) -> LogReal:
    """Sum of ``exp(v)`` over ``logs``, anchored at the maximum."""
    logs = [v for v in logs if v != -math.inf]
    if not logs:
        return LogReal.zero()
    top = max(logs)
    return LogReal(POSITIVE, top + math.log(math.fsum(math.exp(v - top) for v in logs)))
