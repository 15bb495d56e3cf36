"""Error type shared by the whole package."""


class InputError(ValueError):
    """Raised when an argument violates a documented precondition.

    The CLI maps this to exit code 2; everything else that goes wrong is a bug.
    """
