"""Exact counts, moments, simulations and asymptotics for common-subsequence
statistics of two words."""

from subseqstats.errors import (
    BudgetExceededError,
    DegenerateDistributionError,
    InputError,
    OutOfRangeError,
)
from subseqstats.logreal import LogReal
from subseqstats.counting import (
    LevelTables,
    Sequence,
    count_all,
    count_all_direct,
    count_by_level,
    count_k,
    count_k_bruteforce,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceededError",
    "DegenerateDistributionError",
    "InputError",
    "OutOfRangeError",
    "LogReal",
    "LevelTables",
    "Sequence",
    "count_all",
    "count_all_direct",
    "count_by_level",
    "count_k",
    "count_k_bruteforce",
    "__version__",
]
