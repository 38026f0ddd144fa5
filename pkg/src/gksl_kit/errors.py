"""Exception types raised by the structure-extraction and verification routines."""


class NotCPError(ValueError):
    """Input map is not completely positive (Choi matrix fails the PSD test)."""

    def __init__(self, message: str, min_eigenvalue: float | None = None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NotDcpError(ValueError):
    """Input superoperator does not generate a CP semigroup."""

    def __init__(self, message: str, compressed_min_eigenvalue: float | None = None):
        super().__init__(message)
        self.compressed_min_eigenvalue = compressed_min_eigenvalue


class NonHermitianChoiError(ValueError):
    """Choi matrix is not hermitian: the map is not a dagger-morphism (generator)."""


class NotMinimalError(ValueError):
    """Presentation is not minimal where a minimal one is required."""


class NotProjectiveError(ValueError):
    """Sequence along a filtration fails the compression-consistency property."""


class NormBoundViolatedError(ValueError):
    """Sequence along a filtration exceeds the declared uniform norm bound."""

    def __init__(self, message: str, worst_norm: float | None = None):
        super().__init__(message)
        self.worst_norm = worst_norm
