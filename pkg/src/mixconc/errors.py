"""Exception types shared across the package."""


class MixconcError(Exception):
    """Base class for all library errors."""


class ValidationError(MixconcError, ValueError):
    """Malformed input: bad shapes, non-stochastic rows, indices out of range."""


class CapacityError(MixconcError):
    """A dense table would exceed the configured cell budget."""

    def __init__(self, cells, budget):
        super().__init__(f"dense table needs {cells} cells, budget is {budget}")
        self.cells = cells
        self.budget = budget


class BudgetError(MixconcError):
    """An exhaustive search would exceed its candidate budget."""

    def __init__(self, candidates, budget):
        super().__init__(f"search needs {candidates} candidates, budget is {budget}")
        self.candidates = candidates
        self.budget = budget


class ConditioningError(MixconcError, ValueError):
    """Conditioning on an event of zero probability."""

    def __init__(self, prefix):
        super().__init__(f"prefix {tuple(prefix)} has zero probability")
        self.prefix = tuple(prefix)


class OutOfValidityError(MixconcError, ValueError):
    """A bound was evaluated outside the range where it is valid."""

    def __init__(self, t, threshold):
        super().__init__(f"t={t} is not above the validity threshold {threshold}")
        self.t = t
        self.threshold = threshold


class ConventionError(MixconcError, ValueError):
    """An estimate and a certificate disagree on n, metric, or Lipschitz constant."""
