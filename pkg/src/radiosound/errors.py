"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: usage and precondition problems exit
with 2, malformed or unsupported file content with 3, and numerically
degenerate inputs with 4.
"""


class RadioSoundError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(RadioSoundError, ValueError):
    """An argument violates a documented precondition."""


class FormatError(RadioSoundError):
    """File content is malformed or corrupt."""


class UnsupportedFormatError(FormatError):
    """Recognized container holding an encoding we do not handle."""


class DegenerateInputError(RadioSoundError, ValueError):
    """Input is well-formed but numerically degenerate for the operation."""
