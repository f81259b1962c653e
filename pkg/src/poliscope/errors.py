"""Exception types shared across pipeline stages."""


class PoliscopeError(Exception):
    """Base class for all pipeline errors."""


class SchemaError(PoliscopeError):
    """A record violates a wire-format schema.

    Carries the 1-based line number and offending field when known, so
    loaders can point at the exact input defect.
    """

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"field {field!r}: "
        super().__init__(prefix + message)


class ReferentialIntegrityError(PoliscopeError):
    """A record references an id that does not exist in its companion dataset."""


class DegenerateDocumentError(PoliscopeError):
    """A document has no shingles; it cannot participate in similarity estimation."""


class ConfigError(PoliscopeError):
    """The pipeline configuration is unusable (missing path, bad value)."""
