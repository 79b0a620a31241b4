"""Exception hierarchy.

Every error carries the name of the violated invariant in its message so the
command line front end can report it verbatim.
"""


class WeakWignerError(Exception):
    """Base class for all package errors."""


class ConfigError(WeakWignerError):
    """Malformed scenario configuration or input file."""


class NumericalPreconditionError(WeakWignerError):
    """A numerical precondition of an operation is violated."""


class InvalidGrid(NumericalPreconditionError):
    pass


class GridMismatch(NumericalPreconditionError):
    pass


class BoundaryLeak(NumericalPreconditionError):
    pass


class KindMismatch(NumericalPreconditionError):
    pass


class OffGridShift(NumericalPreconditionError):
    pass


class OffGridReflection(NumericalPreconditionError):
    pass


class OffGrid(NumericalPreconditionError):
    pass


class DegreeTooHigh(NumericalPreconditionError):
    pass


class AliasedSymbol(NumericalPreconditionError):
    pass


class IndexTooHigh(NumericalPreconditionError):
    pass


class CenterTooFarOut(NumericalPreconditionError):
    pass


class ZeroSum(NumericalPreconditionError):
    pass


class NodeParity(NumericalPreconditionError):
    pass


class SmallMomentumAmplitude(NumericalPreconditionError):
    pass


class OrthogonalStates(NumericalPreconditionError):
    """Pre- and post-selected states are (numerically) orthogonal."""


class OrthogonalAuxiliary(OrthogonalStates):
    """Auxiliary state is orthogonal to the post-selected state."""
