"""Exception taxonomy shared by the library, the service and the CLI."""


class CoxHodgeError(Exception):
    """Base class for all library errors."""


class InvalidInputError(CoxHodgeError):
    """User-supplied data is malformed (bad matrix, bad word, bad weight)."""


class NotReducedError(InvalidInputError):
    """A word was required to be reduced and is not."""


class NonLinearError(InvalidInputError):
    """A degree-2 (linear) polynomial was required."""


class GroupInfiniteError(CoxHodgeError):
    """Enumeration exceeded its bound: the group is infinite or the bound too small.

    Reported distinctly from invalid input so callers can raise the bound.
    """

    def __init__(self, bound: int):
        super().__init__(f"group closure exceeded the enumeration bound {bound}")
        self.bound = bound


class InternalInvariantError(CoxHodgeError):
    """An internal exactness check failed; this signals a bug, not bad input."""
