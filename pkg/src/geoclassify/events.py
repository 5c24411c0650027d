"""Domain types shared across the toolkit: event classes, bounding boxes, points."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class EventClass(Enum):
    """The five studied event categories.

    Each variant carries the integer label used as the classification
    target, the source code text found in the raw export, and a human
    readable name.
    """

    REFUGEES = (0, "REF", "Refugees")
    HUMANITARIAN_AID = (73, "073", "Provide humanitarian aid")
    VIOLENT_PROTEST = (145, "145", "Violent protests")
    ARTILLERY_FIGHT = (194, "194", "Fight with artillery and tanks")
    MASS_KILLING = (202, "202", "Engage in mass killings")

    def __init__(self, label: int, code: str, display_name: str):
        self.label = label
        self.code = code
        self.display_name = display_name

    @classmethod
    def from_label(cls, label: int) -> "EventClass":
        try:
            return _BY_LABEL[int(label)]
        except KeyError:
            raise ValueError(f"unknown event class label: {label!r}") from None

    @classmethod
    def from_code(cls, code: str) -> "EventClass":
        try:
            return _BY_CODE[code]
        except KeyError:
            raise ValueError(f"unknown event class code: {code!r}") from None


_BY_LABEL = {ec.label: ec for ec in EventClass}
_BY_CODE = {ec.code: ec for ec in EventClass}

#: All valid class labels in ascending order.
ALL_LABELS = tuple(sorted(_BY_LABEL))

#: Event codes that select a class through the EventCode column. REF is
#: matched through Actor1Type1Code instead, so it is not listed here.
EVENT_CODE_LABELS = {ec.code: ec.label for ec in EventClass if ec is not EventClass.REFUGEES}


def class_name(label: int) -> str:
    return EventClass.from_label(label).display_name


@dataclass(frozen=True)
class BoundingBox:
    """A strict latitude/longitude rectangle. Containment excludes the edges."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self):
        if not (self.lat_min < self.lat_max):
            raise ValueError(f"lat_min must be < lat_max, got {self.lat_min} >= {self.lat_max}")
        if not (self.lon_min < self.lon_max):
            raise ValueError(f"lon_min must be < lon_max, got {self.lon_min} >= {self.lon_max}")

    def contains(self, lat: float, lon: float) -> bool:
        return (self.lat_min < lat < self.lat_max) and (self.lon_min < lon < self.lon_max)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.lat_min, self.lat_max, self.lon_min, self.lon_max)


#: Study region for the bundled workflow (Iraq).
IRAQ_BBOX = BoundingBox(29.12, 37.29, 39.22, 48.48)

#: Default year range selected by the bundled workflow.
DEFAULT_YEAR_RANGE = (2012, 2015)

#: Country filter matching the study region in the raw exports.
DEFAULT_COUNTRY_CODE = "IZ"


@dataclass(frozen=True)
class LabeledPoint:
    """A coordinate pair with its integer event-class label."""

    lat: float
    lon: float
    label: int

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"coordinates must be finite, got ({self.lat}, {self.lon})")
