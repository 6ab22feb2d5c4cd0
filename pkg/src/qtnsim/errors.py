"""Exception types shared across the package.

Every error raised deliberately by the library derives from :class:`QtnError`
so callers (and the CLI) can distinguish usage errors from bugs.
"""


class QtnError(Exception):
    """Base class for all library errors."""


# --- circuit construction / validation ---

class InvalidCircuit(QtnError):
    pass


class QubitOutOfRange(QtnError):
    pass


class EmptyMeasurement(QtnError):
    pass


class BadInitStateLength(QtnError):
    pass


class NonUnitNorm(QtnError):
    pass


class ParamLengthMismatch(QtnError):
    pass


class UnsupportedMeasurementForMode(QtnError):
    pass


class TooManyQubits(QtnError):
    """Statevector mode refuses circuits past the amplitude-memory boundary."""


class SchemaViolation(QtnError):
    """Circuit JSON document violates schema v1.

    ``pointer`` is a JSON-pointer path to the offending element.
    """

    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")


# --- gradients ---

class FourTermGateUnsupported(QtnError):
    pass


class NonExpectationMeasurement(QtnError):
    pass


class TapeMissing(QtnError):
    pass


# --- tensor network / contraction ---

class ShapeMismatch(QtnError):
    pass


class OutOfMemoryBudget(QtnError):
    pass


class PathSearchTimeout(QtnError):
    pass


class Unsliceable(QtnError):
    pass


# --- vqa toolkit ---

class ParamCountMismatch(QtnError):
    pass


class FeatureLengthMismatch(QtnError):
    pass


class ZeroVector(QtnError):
    pass


class UnknownTask(QtnError):
    pass


class HamiltonianParseError(QtnError):
    pass


class TooManyQubitsForExactEvolution(QtnError):
    pass
