"""Parse GDELT-style CSV exports into labeled coordinate datasets.

The expected input is a comma-separated UTF-8 file whose header names at
least the six columns in ``REQUIRED_COLUMNS``. Columns are matched by
name, never by position, and extra columns are ignored. Malformed rows
are never dropped silently: every data row ends up either as a
``RawEventRecord`` or as a ``RejectedRow`` with a reason.
"""

from __future__ import annotations

import csv
import io
import math
import os
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Iterable, Sequence

from .dataset import Dataset
from .errors import LabelEncodingError, SchemaError
from .events import (
    DEFAULT_COUNTRY_CODE,
    DEFAULT_YEAR_RANGE,
    IRAQ_BBOX,
    BoundingBox,
    EventClass,
    EVENT_CODE_LABELS,
)

REQUIRED_COLUMNS = (
    "Actor1Type1Code",
    "Year",
    "ActionGeo_CountryCode",
    "Actor1Geo_Lat",
    "Actor1Geo_Long",
    "EventCode",
)


@dataclass(frozen=True)
class RawEventRecord:
    actor1_type_code: str
    year: int
    action_country_code: str
    actor1_lat: float
    actor1_lon: float
    event_code: str


@dataclass(frozen=True)
class RejectedRow:
    """A data row that could not be parsed, with its file line number."""

    line: int
    reason: str


def _open_text(source) -> IO[str]:
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline="")
    if isinstance(source, bytes):
        return io.StringIO(source.decode("utf-8"))
    if isinstance(source, io.TextIOBase):
        return source
    # binary file-like
    return io.TextIOWrapper(source, encoding="utf-8", newline="")


def _parse_coord(raw: str, what: str, lo: float, hi: float):
    """Returns (value, None) or (None, reject reason)."""
    raw = raw.strip()
    if not raw:
        return None, f"missing {what}"
    try:
        value = float(raw)
    except ValueError:
        return None, f"unparseable {what}"
    if not math.isfinite(value):
        return None, f"non-finite {what}"
    if not (lo <= value <= hi):
        return None, f"{what} out of range"
    return value, None


def parse_gdelt_csv(
    source, schema: Sequence[str] = REQUIRED_COLUMNS
) -> tuple[list[RawEventRecord], list[RejectedRow]]:
    """Parse a CSV export into records and rejected rows.

    Raises SchemaError when the input is empty or the header is missing
    one of the ``schema`` columns. Every data row is accounted for:
    ``len(records) + len(rejects)`` equals the number of data rows read.
    """
    stream = _open_text(source)
    close = not (source is stream)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError("empty input: no header row") from None
        positions = {name.strip(): i for i, name in enumerate(header)}
        for column in schema:
            if column not in positions:
                raise SchemaError(f"missing required column: {column}")

        col = {name: positions[name] for name in schema}
        i_actor = col["Actor1Type1Code"]
        i_year = col["Year"]
        i_country = col["ActionGeo_CountryCode"]
        i_lat = col["Actor1Geo_Lat"]
        i_lon = col["Actor1Geo_Long"]
        i_event = col["EventCode"]
        width = max(col.values()) + 1

        records: list[RawEventRecord] = []
        rejects: list[RejectedRow] = []
        for row in reader:
            line = reader.line_num
            if not row or all(not cell.strip() for cell in row):
                rejects.append(RejectedRow(line, "blank row"))
                continue
            if len(row) < width:
                rejects.append(RejectedRow(line, "short row"))
                continue

            lat, reason = _parse_coord(row[i_lat], "latitude", -90.0, 90.0)
            if reason:
                rejects.append(RejectedRow(line, reason))
                continue
            lon, reason = _parse_coord(row[i_lon], "longitude", -180.0, 180.0)
            if reason:
                rejects.append(RejectedRow(line, reason))
                continue

            raw_year = row[i_year].strip()
            if not raw_year:
                rejects.append(RejectedRow(line, "missing year"))
                continue
            try:
                year = int(raw_year)
            except ValueError:
                rejects.append(RejectedRow(line, "non-numeric year"))
                continue
            if not (1000 <= year <= 9999):
                rejects.append(RejectedRow(line, "invalid year"))
                continue

            records.append(
                RawEventRecord(
                    actor1_type_code=row[i_actor].strip(),
                    year=year,
                    action_country_code=row[i_country].strip(),
                    actor1_lat=lat,
                    actor1_lon=lon,
                    event_code=row[i_event].strip(),
                )
            )
        return records, rejects
    finally:
        if close:
            stream.close()


def filter_records(
    records: Iterable[RawEventRecord],
    bbox: BoundingBox,
    year_min: int,
    year_max: int,
    country_code: str,
) -> list[RawEventRecord]:
    """Keep records strictly inside the box, in the inclusive year range,
    and matching the country code. Order is preserved."""
    if year_min > year_max:
        raise ValueError(f"year_min {year_min} exceeds year_max {year_max}")
    return [
        r
        for r in records
        if bbox.contains(r.actor1_lat, r.actor1_lon)
        and year_min <= r.year <= year_max
        and r.action_country_code == country_code
    ]


def encode_label(record: RawEventRecord) -> EventClass:
    """Map a record's code fields to its event class.

    An actor type of REF wins over any event code; rows carrying both are
    counted as collisions by the ingest pipeline.
    """
    if record.actor1_type_code == EventClass.REFUGEES.code:
        return EventClass.REFUGEES
    label = EVENT_CODE_LABELS.get(record.event_code)
    if label is None:
        raise LabelEncodingError(record.actor1_type_code, record.event_code)
    return EventClass.from_label(label)


@dataclass
class IngestReport:
    """Accounting for one ingest run: where every input row went."""

    source: str
    total_rows: int = 0
    parsed: int = 0
    rejects: list[RejectedRow] = field(default_factory=list)
    filtered_out: int = 0
    unknown_code_rows: int = 0
    ref_collisions: int = 0
    class_counts: dict[int, int] = field(default_factory=dict)

    @property
    def kept(self) -> int:
        return sum(self.class_counts.values())

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "total_rows": self.total_rows,
            "parsed": self.parsed,
            "rejected": len(self.rejects),
            "filtered_out": self.filtered_out,
            "unknown_code_rows": self.unknown_code_rows,
            "ref_collisions": self.ref_collisions,
            "kept": self.kept,
            "class_counts": {str(k): v for k, v in sorted(self.class_counts.items())},
        }

    def render_text(self) -> str:
        lines = [
            f"ingest report for {self.source}",
            f"  data rows read:     {self.total_rows}",
            f"  parsed:             {self.parsed}",
            f"  rejected:           {len(self.rejects)}",
            f"  outside filters:    {self.filtered_out}",
            f"  unknown event code: {self.unknown_code_rows}",
            f"  REF collisions:     {self.ref_collisions}",
            f"  kept:               {self.kept}",
            "  per-class counts:",
        ]
        for label in sorted(self.class_counts):
            name = EventClass.from_label(label).display_name
            lines.append(f"    {label:>3}  {name:<32} {self.class_counts[label]}")
        if self.rejects:
            reasons = Counter(r.reason for r in self.rejects)
            lines.append("  reject reasons:")
            for reason, count in sorted(reasons.items()):
                lines.append(f"    {reason}: {count}")
        return "\n".join(lines)


def ingest_csv(
    source,
    bbox: BoundingBox = IRAQ_BBOX,
    year_min: int = DEFAULT_YEAR_RANGE[0],
    year_max: int = DEFAULT_YEAR_RANGE[1],
    country_code: str = DEFAULT_COUNTRY_CODE,
    dataset_id: str | None = None,
) -> tuple[Dataset, IngestReport]:
    """Full pipeline: parse, filter, encode. Returns the labeled dataset
    plus a report accounting for every input row."""
    name = os.fspath(source) if isinstance(source, (str, Path)) else "<stream>"
    records, rejects = parse_gdelt_csv(source)
    report = IngestReport(source=name)
    report.total_rows = len(records) + len(rejects)
    report.parsed = len(records)
    report.rejects = rejects

    kept = filter_records(records, bbox, year_min, year_max, country_code)
    report.filtered_out = len(records) - len(kept)

    lats: list[float] = []
    lons: list[float] = []
    labels: list[int] = []
    counts: Counter[int] = Counter()
    for rec in kept:
        try:
            ec = encode_label(rec)
        except LabelEncodingError:
            report.unknown_code_rows += 1
            continue
        if ec is EventClass.REFUGEES and rec.event_code in EVENT_CODE_LABELS:
            report.ref_collisions += 1
        lats.append(rec.actor1_lat)
        lons.append(rec.actor1_lon)
        labels.append(ec.label)
        counts[ec.label] += 1
    report.class_counts = dict(counts)

    provenance = (
        f"{name} bbox={bbox.as_tuple()} years={year_min}-{year_max} country={country_code}"
    )
    dataset = Dataset.from_columns(
        id=dataset_id or "-".join(str(l) for l in sorted(counts)),
        lats=lats,
        lons=lons,
        labels=labels,
        provenance=provenance,
        bbox=bbox,
    )
    return dataset, report


def generate_query(
    event: EventClass,
    year_min: int,
    year_max: int,
    bbox: BoundingBox,
) -> str:
    """Build the SQL used to pull one event class from the hosted event table.

    Year bounds are exclusive (a 2012-2015 range emits ``Year > 2011 AND
    Year < 2016``) and coordinate bounds are strict, with NOT NULL guards
    on both coordinates.
    """
    if year_min > year_max:
        raise ValueError(f"year_min {year_min} exceeds year_max {year_max}")
    if event is EventClass.REFUGEES:
        predicate = f'Actor1Type1Code="{event.code}"'
    else:
        predicate = f'EventCode="{event.code}"'
    return (
        "SELECT Actor1Type1Code, Year, ActionGeo_CountryCode, "
        "Actor1Geo_Lat, Actor1Geo_Long, EventCode\n"
        "FROM [gdelt-bq:full.events]\n"
        f"WHERE {predicate}\n"
        f"AND (Year > {year_min - 1} AND Year < {year_max + 1})\n"
        f"AND (Actor1Geo_Lat > {bbox.lat_min} AND Actor1Geo_Lat < {bbox.lat_max})\n"
        f"AND (Actor1Geo_Long > {bbox.lon_min} AND Actor1Geo_Long < {bbox.lon_max})\n"
        "AND Actor1Geo_Lat IS NOT NULL\n"
        "AND Actor1Geo_Long IS NOT NULL"
    )
