"""Exception families. The CLI maps each family to its own exit status."""


class FWRegError(Exception):
    exit_code = 4


class ParseError(FWRegError):
    """Malformed instance or certificate text."""

    exit_code = 3

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class PreconditionError(FWRegError):
    """Input violates an operation's precondition."""

    exit_code = 4


class MalformedGroup(PreconditionError):
    pass


class UnknownSymbol(PreconditionError):
    pass


class CarrierMismatch(PreconditionError):
    pass


class NotInjective(PreconditionError):
    pass


class OrbitMissed(PreconditionError):
    def __init__(self, message: str, orbits=()):
        self.orbits = list(orbits)
        super().__init__(message)


class InexpressibleSubset(PreconditionError):
    pass


class NotCommensurated(PreconditionError):
    pass


class NotExact(PreconditionError):
    pass


class CapExceeded(PreconditionError):
    pass


class XNotDenseOpen(PreconditionError):
    pass


class ActionNotContinuous(PreconditionError):
    pass


class NotIrreducible(PreconditionError):
    pass


class DomainNotDense(PreconditionError):
    pass


class NonHomeomorphicChart(PreconditionError):
    pass


class UnsupportedField(PreconditionError):
    pass


class InvalidCertificate(PreconditionError):
    """A user-supplied transfixing set is not invariant or not at finite distance."""

    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class Inconclusive(FWRegError):
    """A bounded search or truncation could not settle the question."""

    exit_code = 5


class TruncationInconclusive(Inconclusive):
    pass


class NoWitnessWithinBound(Inconclusive):
    pass


class TransfixerFailed(Inconclusive):
    def __init__(self, message: str, partial=None):
        self.partial = partial
        super().__init__(message)


class CommensurationFailed(Inconclusive):
    pass


class HypothesisViolated(UserWarning):
    """The finite set meets a finite orbit, so Neumann's lemma does not apply."""
