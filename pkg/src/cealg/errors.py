class CealgError(Exception):
    """Base class for library errors."""


class BudgetExceeded(CealgError):
    """An enumeration would visit more elements than the budget allows."""

    def __init__(self, size: int, budget: int):
        super().__init__(f"enumeration of {size} elements exceeds budget {budget}")
        self.size = size
        self.budget = budget


class NotClosedError(CealgError):
    """A subspace expected to be an algebra is not closed under multiplication."""


class NotNilpotentError(CealgError):
    pass


class NotLocalError(CealgError):
    """The algebra does not have the scalar-plus-nilpotent shape."""


class FormatError(CealgError):
    """Malformed algebra, certificate or matrix file."""
