"""Exception hierarchy shared by all modules."""


class ToolkitError(Exception):
    """Base class for all errors raised by expcompare."""


class LabelError(ToolkitError):
    """A label is missing from, or duplicated in, a labeled set."""


class ShapeError(ToolkitError):
    """Operands are defined over incompatible spaces or dimensions."""


class ArgumentError(ToolkitError):
    """An argument violates a documented precondition."""


class SolverError(ToolkitError):
    """The linear-program solver failed to produce a usable answer."""
