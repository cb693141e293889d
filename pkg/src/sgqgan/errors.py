"""Exception types shared across the package."""


class SgqganError(Exception):
    """Base class for all errors raised by this package."""


class ZeroVector(SgqganError):
    """A vector with norm below the representable threshold was normalized."""


class DimensionMismatch(SgqganError):
    """Operands live in Hilbert spaces of different dimension."""


class DomainError(SgqganError):
    """A scalar argument lies outside its mathematical domain."""


class DegenerateBaseline(SgqganError):
    """A sampled baseline measurement returned zero counts twice in a row."""


class InvalidAmplitudes(SgqganError):
    """Frequency-bin weights are negative or do not sum to one."""


class LengthMismatch(SgqganError):
    """Sequences that must be equally long are not."""


class InvalidDensityMatrix(SgqganError):
    """Input is not Hermitian, unit-trace and positive semidefinite."""


class NotUnitary(SgqganError):
    """A matrix expected to be unitary is not, within tolerance."""


class InsufficientProbes(SgqganError):
    """Too few linearly independent probe states to pin down a process."""


class SchemaError(SgqganError):
    """A config document violates the schema. Carries the JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class RangeError(SgqganError):
    """A config value is outside its allowed range. Carries path and value."""

    def __init__(self, path: str, value, message: str):
        self.path = path
        self.value = value
        self.message = message
        super().__init__(f"{path}: {message} (got {value!r})")
