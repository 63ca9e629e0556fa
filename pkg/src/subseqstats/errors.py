"""Exception hierarchy shared by the library and the command line."""


class InputError(ValueError):
    """Malformed arguments: bad symbol ids, k = 0, probabilities not summing to 1."""


class OutOfRangeError(InputError):
    """A parameter lies outside the range where a formula is defined."""


class BudgetExceededError(RuntimeError):
    """An enumeration oracle would need more work than its budget allows."""

    def __init__(self, needed, budget, what="items"):
        self.needed = needed
        self.budget = budget
        super().__init__(f"enumeration needs {needed} {what}, budget is {budget}")


class DegenerateDistributionError(ValueError):
    """The sampled statistic has zero variance, so it cannot be standardized."""
