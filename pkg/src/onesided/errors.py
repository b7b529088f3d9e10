"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation
    (endpoint outside the window, negative weight sample, vanishing
    leading coefficient, ...)."""


class GridMismatchError(ValueError):
    """Two sampled functions that must share a grid do not."""


class ConfigError(ValueError):
    """A search / quadrature configuration is unusable (window too small
    for the requested interval lengths, gamma out of range, ...)."""
