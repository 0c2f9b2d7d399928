"""Exception hierarchy shared by every module of the package."""


class CircuitError(Exception):
    """Base class for all errors raised by hdlkernel."""


class ShapeMismatch(CircuitError):
    """Two interfaces that must be equal are not.

    ``left`` and ``right`` are the offending shapes and ``path`` is the first
    position (as a dotted step string) where they differ.
    """

    def __init__(self, left, right, context="", path=None):
        self.left = left
        self.right = right
        self.context = context
        if path is None:
            from .shape import first_difference

            path = first_difference(left, right)
        self.path = path
        where = "<root>" if path == "" else path
        msg = f"{left} != {right} (first difference at {where})"
        if context:
            msg = f"{context}: {msg}"
        super().__init__(msg)


class NotASum(CircuitError):
    pass


class InvalidMap(CircuitError):
    pass


class LengthMismatch(CircuitError):
    pass


class ArityMismatch(CircuitError):
    pass


class SequentialGate(CircuitError):
    """Boolean semantics was requested for a DFF."""


class HasDelay(CircuitError):
    """A delay-free circuit was required but the circuit contains a DFF."""


class CombinationalLoop(CircuitError):
    """A feedback cycle that does not pass through a DFF."""


class DomainTooLarge(CircuitError):
    pass


class ParseError(CircuitError):
    def __init__(self, message, line=None, field=None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        if where:
            message = f"{', '.join(where)}: {message}"
        super().__init__(message)
