"""Exception hierarchy.

Every error raised for bad input derives from :class:`PersnormError`; the CLI
maps those to exit code 1 and anything else to exit code 2.
"""


class PersnormError(Exception):
    """Base class for input-level errors."""


class DegenerateCloudError(PersnormError, ValueError):
    """Too few points for the requested operation."""


class NonFiniteError(PersnormError, ValueError):
    """A coordinate is NaN or infinite."""


class ConstantAxisError(PersnormError, ValueError):
    """Zero variance where a correlation needs a spread."""


class CapacityError(PersnormError):
    """The complex would exceed the configured simplex budget."""


class OracleSizeError(PersnormError, ValueError):
    """The dense reference reduction was asked to handle too many points."""


class PolicyError(PersnormError, ValueError):
    """An essential-bar policy cannot be applied to the given diagram."""


class ParseError(PersnormError, ValueError):
    """Malformed input file; ``line`` is 1-based."""

    def __init__(self, message: str, line: int | None = None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class EmptyBundleError(PersnormError, ValueError):
    """No dataset (or a requested dataset) has any rows."""


class DegenerateSampleError(PersnormError, ValueError):
    """Random draw with a singular sample covariance."""


class DomainError(PersnormError, ValueError):
    """Transformation parameter outside its domain."""


class ShortcutMismatchError(PersnormError):
    """Analytic sweep shortcut disagrees with full recomputation."""


class MissingInputError(PersnormError, FileNotFoundError):
    """An input file does not exist."""
