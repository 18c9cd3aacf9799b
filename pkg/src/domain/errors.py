from typing import Any, Dict, Optional


class DickeRbmError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(DickeRbmError, ValueError):
    """
    An input violates a documented precondition (out-of-range index,
    length mismatch, repeated site, non-finite parameter).
    """


class DegenerateStateError(DomainError):
    """
    The request targets a product state (D = 0 or D = N) where the
    compact-RBM ratio rule does not apply.
    """


class CapacityError(DickeRbmError):
    """
    Exact enumeration or a dense state vector would exceed the configured guard.
    """

    def __init__(self, message: str, n_qubits: Optional[int] = None, guard: Optional[int] = None):
        super().__init__(message)
        self.n_qubits = n_qubits
        self.guard = guard


class TrainingError(DickeRbmError):
    """
    Contrastive-divergence training produced a non-finite update.
    `diagnostics` holds epoch, batch and parameter norms at the failure point.
    """

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v}" for k, v in self.diagnostics.items())
        return f"{base} ({details})"


class ArtifactIOError(DickeRbmError, OSError):
    """An artifact could not be read or written."""


class ArtifactFormatError(ArtifactIOError):
    """
    An artifact was readable but malformed. Carries the file, line and column
    so the CLI can point at the offending input.
    """

    def __init__(self, message: str, path: str = "", line: Optional[int] = None,
                 column: Optional[int] = None, context: str = ""):
        super().__init__(message)
        self.path = path
        self.line = line
        self.column = column
        self.context = context

    def __str__(self) -> str:
        msg = self.args[0] if self.args else "Malformed artifact"
        location = self.path
        if self.line is not None:
            location += f":{self.line}"
            if self.column is not None:
                location += f":{self.column}"
        out = f"{msg} [{location}]" if location else msg
        if self.context:
            out += f"\n    {self.context}"
        return out
