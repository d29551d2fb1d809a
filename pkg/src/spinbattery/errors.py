"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Invalid argument: out of range, wrong type, or inconsistent."""


class NumericalError(RuntimeError):
    """A computation produced results outside its accuracy contract."""


class CapacityError(RuntimeError):
    """Problem size exceeds what the requested method is allowed to handle."""
