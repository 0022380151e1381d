"""Exception types shared across the package."""


class InvalidParams(ValueError):
    """Parameters outside the supported (n, p, s) range."""


class RangeViolated(ValueError):
    """A claim was requested outside the range n >= 2p+s where it is made."""


class CapExceeded(RuntimeError):
    """A configured resource cap (family size, mapping enumeration) was hit."""


class OrderTooLarge(ValueError):
    """The exhaustive clique oracle was given a graph it refuses to search."""


class CountingError(AssertionError):
    """A counting identity failed; ``pair`` holds the offending (H, B) data."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair
