"""Exception types mapped to CLI exit codes.

Both subclass ValueError so callers embedding the library can catch them
with stdlib semantics.
"""


class PrdcError(ValueError):
    """Base class for all errors raised by this package."""

    exit_code = 1
    category = "usage"


class DataError(PrdcError):
    """Malformed, non-finite, or inconsistent input data. CLI exit code 2."""

    exit_code = 2
    category = "data"


class ParameterError(PrdcError):
    """Out-of-range or incompatible numeric parameters. CLI exit code 3."""

    exit_code = 3
    category = "parameter"
