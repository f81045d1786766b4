"""Exception taxonomy shared by all cheshire modules."""


class CheshireError(Exception):
    """Base class for every error raised by this package."""


class InputError(CheshireError):
    """Malformed labels, mixed conventions, out-of-range indices, bad parameters."""


class ZeroNormError(CheshireError):
    """Normalization of a zero vector was requested."""


class AnomalousSelectionError(CheshireError):
    """Pre- and post-selection are (near-)orthogonal, so conditioning diverges.

    Carries the raw overlap so callers can opt into amplification studies
    deliberately instead of receiving amplified noise.
    """

    def __init__(self, message: str, overlap: complex):
        super().__init__(message)
        self.overlap = overlap


class DegenerateScenarioError(CheshireError):
    """Scenario parameters sit on a singular boundary (e.g. cot(theta) blows up)."""


class InfeasibleTargetsError(CheshireError):
    """The weak-value constraint system has no nonzero solution."""


class VacuousSelectionError(CheshireError):
    """Every solution of the constraint system is orthogonal to the pre-state,
    so the targeted weak values are undefined for all of them."""


class CalibrationError(CheshireError):
    """No beam-splitter setting reaches the requested post-selection residual.

    Carries the best residual achieved by the deterministic calibration rule.
    """

    def __init__(self, message: str, residual: float):
        super().__init__(message)
        self.residual = residual


class FileParseError(CheshireError):
    """Malformed structured text file; carries the 1-based line number."""

    def __init__(self, message: str, line_no: int):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class CircuitParseError(FileParseError):
    """Malformed circuit description file."""


class CircuitConfigError(CheshireError):
    """Structurally invalid circuit at run time (unbound port, mode collision)."""
