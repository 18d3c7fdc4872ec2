"""Exception hierarchy.

Every error carries a short ``category`` string; the command line prints it as
``error: <category>: <detail>``.
"""


class StegoError(Exception):
    category = "error"


class ConfigError(StegoError, ValueError):
    category = "config"


class DimensionError(StegoError, ValueError):
    category = "dimension"


class FormatError(StegoError, ValueError):
    category = "format"


class SequenceError(StegoError, ValueError):
    category = "sequence"


class CapacityError(StegoError):
    category = "capacity"

    def __init__(self, required, available):
        self.required = required
        self.available = available
        super().__init__(
            f"payload needs {required} blocks but only {available} are available"
        )


class NoPayloadError(StegoError):
    category = "not-found"


class VersionError(StegoError):
    category = "version"


class CorruptionError(StegoError):
    category = "corruption"


class TruncationError(StegoError):
    category = "truncated"


class ComparisonError(StegoError, ValueError):
    category = "comparison"
