class InvalidInput(ValueError):
    """Raised for malformed shapes, dimensions or parameters."""


class NotSelfAdjoint(InvalidInput):
    """The map does not send self-adjoint matrices to self-adjoint matrices."""


class NegativeOfCpMap(ValueError):
    """The positive part of the Choi matrix vanishes, so ``-phi`` is completely
    positive and the trace-minus-CP split is undefined."""


class WitnessInapplicable(ValueError):
    """Preconditions for extending a witness vector are not met."""
