"""Exception hierarchy shared by all modules."""


class PrefAuditError(Exception):
    """Base class for all package errors."""


class InputError(PrefAuditError):
    """Fatal input error: bad dimensions, non-finite values, empty data."""


class ConfigError(PrefAuditError):
    """Fatal configuration error: invalid specs or config files."""


class NumericError(PrefAuditError):
    """Fatal numeric error: non-finite loss or gradient during optimization."""
