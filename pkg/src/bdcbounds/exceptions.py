class DomainError(ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class EstimationError(RuntimeError):
    """A Monte Carlo estimate could not be formed from the sampled data."""
