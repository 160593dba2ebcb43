"""Exception hierarchy shared by all measure-lab modules.

``ValidationError`` covers everything a caller could have avoided by
supplying valid input; the CLI maps it to exit code 2.
``PrecisionExhausted`` means an adaptively refined numerical enclosure hit
the configured precision cap without resolving a comparison; the CLI maps
it to exit code 3.
"""


class MeasureLabError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MeasureLabError):
    """Invalid input (polynomial, automaton document, precondition)."""


class NotMonic(ValidationError):
    pass


class NotPisot(ValidationError):
    pass


class Reducible(ValidationError):
    pass


class SchemaError(ValidationError):
    pass


class DuplicateEdge(ValidationError):
    pass


class UnknownState(ValidationError):
    pass


class LabelOutsideAlphabet(ValidationError):
    pass


class NotPrimitive(ValidationError):
    pass


class NotStronglyConnected(ValidationError):
    pass


class EmptyInitialSet(ValidationError):
    pass


class DeadState(ValidationError):
    pass


class CapExceeded(ValidationError):
    pass


class PrecisionExhausted(MeasureLabError):
    """Adaptive precision reached its cap without separating a comparison."""
