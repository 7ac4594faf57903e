"""Exception hierarchy shared by every qsetk module."""


class QsetError(Exception):
    """Base class for all qsetk errors."""


class DuplicateKind(QsetError):
    pass


class DepthExceeded(QsetError):
    pass


class PoolExhausted(QsetError):
    pass


class UnknownKind(QsetError):
    pass


class UniverseMismatch(QsetError):
    pass


class IllFormedFormula(QsetError):
    """Raised when an identity statement is attempted between m-atoms."""


class BoundExceeded(QsetError):
    pass


class KindViolation(QsetError):
    pass


class NotMember(QsetError):
    pass


class CapExceeded(QsetError):
    """The chain family (or lattice walk) is larger than the configured cap.

    ``partial`` carries whatever was enumerated before the cap was hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NonTerminatingChain(QsetError):
    pass


class InvalidChain(QsetError):
    pass


class NotPure(QsetError):
    pass


class UnknownTheorem(QsetError):
    pass


class ZeroVector(QsetError):
    pass


class IndexOutOfRange(QsetError):
    pass


class BadDistribution(QsetError):
    pass


class InvalidDensity(QsetError):
    pass


class NoQuasisetRepresentation(QsetError):
    """The state has no definite particle number, so no quasiset models it."""

    def __init__(self, off_diagonal_norm: float):
        super().__init__(
            f"particle number undefined (off-diagonal norm {off_diagonal_norm:.6g})"
        )
        self.off_diagonal_norm = off_diagonal_norm


class UnboundIdent(QsetError):
    pass
