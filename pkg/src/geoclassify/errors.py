"""Exception types raised by the toolkit."""


class GeoClassifyError(Exception):
    """Base class for all toolkit errors."""


class SchemaError(GeoClassifyError):
    """The input CSV is unusable: empty, or a required header column is missing."""


class LabelEncodingError(GeoClassifyError):
    """A record's code fields do not map to any known event class."""

    def __init__(self, actor_code: str, event_code: str):
        self.actor_code = actor_code
        self.event_code = event_code
        super().__init__(
            f"unknown event code: actor1_type_code={actor_code!r}, event_code={event_code!r}"
        )


class ModelFormatError(GeoClassifyError):
    """A persisted model payload cannot be read."""


class CorruptModelError(ModelFormatError):
    """The payload is truncated, malformed, or fails its checksum."""


class UnsupportedVersionError(ModelFormatError):
    """The payload declares a format version this build does not understand."""
