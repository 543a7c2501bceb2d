class InputError(ValueError):
    """Malformed or invalid input (bad file, wrong shape, asymmetric matrix...)."""


class CapExceeded(RuntimeError):
    """A size guard was hit before starting an exponential computation."""
