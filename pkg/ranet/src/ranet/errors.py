"""Error taxonomy; exit codes in the CLI mirror the recovery toolchain."""


class RanetError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(RanetError):
    """A caller-supplied value is out of range or inconsistent."""


class FormatError(RanetError):
    """A file or byte stream does not match its declared format."""


__all__ = ["RanetError", "ParameterError", "FormatError"]
