"""Exception hierarchy.

Every error raised on purpose by this package derives from
:class:`WitnessError` (itself a :class:`ValueError`), so callers wanting a
single catch-all can use it; the CLI maps it to exit status 1.
"""


class WitnessError(ValueError):
    pass


class DimensionError(WitnessError):
    """Matrix shape is wrong for the requested operation."""


class ParameterError(WitnessError):
    """A scalar argument lies outside its domain."""


class SizeLimitError(WitnessError):
    """Input exceeds a documented size cap."""


class ValidationError(WitnessError):
    """A composite object violates one of its invariants."""


class EventError(WitnessError):
    """Input and output photon numbers do not match."""


class LabelError(WitnessError):
    """An extremal label does not fit the photons it describes."""


class ParseError(WitnessError):
    """A text file could not be parsed.

    ``line`` and ``key`` identify the offending location when known.
    """

    def __init__(self, message, line=None, key=None, source=None):
        self.line = line
        self.key = key
        self.source = source
        where = []
        if source is not None:
            where.append(str(source))
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key {key!r}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)
