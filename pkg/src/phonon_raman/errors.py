"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain where an operation is defined."""


class ConsistencyError(ValueError):
    """A state violates an invariant it is required to satisfy."""


class IntegrationError(RuntimeError):
    """Time integration could not proceed.

    ``last_time`` is the last time up to which the solution is trustworthy.
    """

    def __init__(self, message: str, last_time: float):
        super().__init__(f"{message} (last good time {last_time!r})")
        self.last_time = last_time
