"""Exception hierarchy shared by all cmlab modules."""


class CMLabError(Exception):
    """Base class for domain errors (CLI exit code 1)."""


class NotADiscriminant(CMLabError, ValueError):
    pass


class BoundExceeded(CMLabError, ValueError):
    """An input is larger than the guard for predictable resource use."""


class PrecisionInsufficient(CMLabError, ArithmeticError):
    """Integer rounding could not be certified at the working precision."""

    def __init__(self, message, bits=None):
        super().__init__(message)
        self.bits = bits


class PrecisionOverflow(CMLabError, ArithmeticError):
    """A series would need more terms than the internal cap allows."""


class EqualDiscriminants(CMLabError, ValueError):
    pass


class OrdinaryReduction(CMLabError, ValueError):
    """The prime splits in the order, so reduction is ordinary."""


class DoesNotSplit(CMLabError, ValueError):
    """A polynomial has roots outside F_{p^2}."""


class BoundaryTie(CMLabError, ArithmeticError):
    """A root lies on a disc boundary within certification error."""


class UnknownRelation(CMLabError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown relation"
