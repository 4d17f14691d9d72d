"""Exception types shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (bad grid, bad parameter, bad file)."""


class ResourceLimitError(RuntimeError):
    """Instance exceeds an explicit size bound of a brute-force routine."""


class InvariantViolation(RuntimeError):
    """A mathematical invariant that should always hold was observed to fail.

    Carries ``index`` when the violation is tied to one member of a sequence.
    """

    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index
