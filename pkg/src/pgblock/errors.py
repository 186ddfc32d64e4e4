class BoundExceeded(RuntimeError):
    """A configured size bound would be exceeded."""

    def __init__(self, what, size, bound):
        self.what = what
        self.size = size
        self.bound = bound
        super().__init__(f"{what} {size} exceeds bound {bound}")


class AmbientMismatch(ValueError):
    pass


class PreconditionError(ValueError):
    pass
