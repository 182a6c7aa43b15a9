"""CSV ingestion into dense numeric datasets with an optional time column."""

from __future__ import annotations

import csv
import io
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from pathlib import Path

import numpy as np

EPOCH = datetime(1970, 1, 1)

DEFAULT_TIMESTAMP_FORMATS = (
    "%Y-%m-%dT%H:%M:%S",
    "%Y-%m-%d %H:%M:%S",
    "%Y-%m-%d %H:%M",
    "%Y-%m-%d",
    "%d/%m/%Y %H:%M:%S",
    "%d/%m/%Y %H:%M",
    "%d/%m/%Y",
    "%d/%m",
    "%H:%M:%S",
    "%H:%M",
)

_DATE_DIRECTIVES = ("%Y", "%y", "%m", "%d", "%j", "%b", "%B")


class DatasetError(ValueError):
    """Raised for malformed or unusable input data."""


@dataclass(frozen=True)
class IngestOptions:
    delimiter: str = ","
    has_header: bool = True
    time_column_hint: str | int | None = None
    timestamp_formats: tuple[str, ...] = DEFAULT_TIMESTAMP_FORMATS
    # row-label columns dropped on load (matched case-insensitively)
    skip_columns: tuple[str, ...] = ("id",)

    def __post_init__(self):
        if len(self.delimiter) != 1 or not self.delimiter.isprintable():
            raise DatasetError(f"delimiter must be one printable character, got {self.delimiter!r}")


@dataclass(frozen=True, eq=False)
class NumericDataset:
    """Named numeric attributes over ordered tuples.

    ``data`` has one row per tuple and one column per attribute. When
    ``time_column`` is set, that column holds timestamps in seconds and
    ``time_format`` is the format it was parsed with (used when writing).
    """

    names: tuple[str, ...]
    data: np.ndarray
    time_column: int | None = None
    time_format: str | None = None
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        data = np.array(self.data, dtype=np.float64, copy=True)
        if data.ndim == 1 and data.size == 0:
            data = data.reshape(0, len(self.names))
        if data.ndim != 2 or data.shape[1] != len(self.names):
            raise DatasetError("every attribute needs exactly one value per tuple")
        if len(set(self.names)) != len(self.names):
            raise DatasetError(f"duplicate attribute names in {list(self.names)}")
        if not np.all(np.isfinite(data)):
            raise DatasetError("dataset contains missing or non-finite values")
        if self.time_column is not None and not 0 <= self.time_column < len(self.names):
            raise DatasetError(f"time column index {self.time_column} out of range")
        data.setflags(write=False)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_index", {name: i for i, name in enumerate(self.names)})

    @classmethod
    def from_columns(cls, columns, time_column=None, time_format=None):
        """Build from a ``{name: values}`` mapping; ``time_column`` is a name."""
        names = tuple(columns)
        n = len(next(iter(columns.values()))) if columns else 0
        data = np.empty((n, len(names)))
        for j, name in enumerate(names):
            if len(columns[name]) != n:
                raise DatasetError(f"column {name!r} has {len(columns[name])} values, expected {n}")
            data[:, j] = columns[name]
        tcol = names.index(time_column) if time_column is not None else None
        return cls(names, data, tcol, time_format)

    @property
    def tuple_count(self):
        return self.data.shape[0]

    def __len__(self):
        return self.data.shape[0]

    def __eq__(self, other):
        if not isinstance(other, NumericDataset):
            return NotImplemented
        return (
            self.names == other.names
            and self.time_column == other.time_column
            and self.data.shape == other.data.shape
            and bool(np.array_equal(self.data, other.data))
        )

    __hash__ = None

    def index(self, attr):
        """Resolve an attribute name or index to an index."""
        if isinstance(attr, (int, np.integer)):
            if not 0 <= attr < len(self.names):
                raise DatasetError(f"attribute index {attr} out of range")
            return int(attr)
        try:
            return self._index[attr]
        except KeyError:
            raise DatasetError(f"unknown attribute {attr!r}; have {list(self.names)}") from None

    def column(self, attr):
        return self.data[:, self.index(attr)]

    @property
    def numeric_columns(self):
        """Indices of all attributes except the time column."""
        return [j for j in range(len(self.names)) if j != self.time_column]

    @property
    def times(self):
        if self.time_column is None:
            raise DatasetError("dataset has no time column")
        return self.data[:, self.time_column]


def _has_date(fmt):
    return any(d in fmt for d in _DATE_DIRECTIVES)


def parse_timestamp(text, formats=DEFAULT_TIMESTAMP_FORMATS):
    """Parse ``text`` with the first matching format and return seconds.

    Date-bearing formats count from 1970-01-01; formats without a year are
    anchored to 1970. Time-of-day formats count from midnight.
    """
    return _parse_timestamp(text, formats)[0]


def _parse_timestamp(text, formats):
    text = text.strip()
    if not text:
        raise DatasetError("empty timestamp")
    for fmt in formats:
        try:
            dt = datetime.strptime(text, fmt)
        except ValueError:
            continue
        if not _has_date(fmt):
            secs = dt.hour * 3600 + dt.minute * 60 + dt.second + dt.microsecond / 1e6
            return float(secs), fmt
        if "%Y" not in fmt and "%y" not in fmt:
            dt = dt.replace(year=EPOCH.year)
        return (dt - EPOCH).total_seconds(), fmt
    raise DatasetError(f"no timestamp format matches {text!r}")


def format_timestamp(seconds, fmt):
    return (EPOCH + timedelta(seconds=float(seconds))).strftime(fmt)


def _open_text(source):
    if isinstance(source, (str, Path)):
        if str(source) == "-":
            return io.StringIO(sys.stdin.read()), True
        try:
            return open(source, newline="", encoding="utf-8"), True
        except OSError as exc:
            raise DatasetError(f"cannot read {source}: {exc.strerror}") from exc
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(source.decode("utf-8")), True
    if isinstance(source, io.TextIOBase):
        return source, False
    # binary stream
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), False


def load_csv(source, opts=None):
    """Load a delimited text file into a :class:`NumericDataset`.

    ``source`` may be a path, ``"-"`` for stdin, raw bytes, or an open text or
    binary stream.
    """
    opts = opts or IngestOptions()
    handle, owned = _open_text(source)
    try:
        rows = [r for r in csv.reader(handle, delimiter=opts.delimiter) if r]
    finally:
        if owned:
            handle.close()

    if opts.has_header:
        if not rows:
            raise DatasetError("missing header row")
        header = [h.strip() for h in rows[0]]
        body = rows[1:]
    else:
        width = len(rows[0]) if rows else 0
        header = [f"col{j}" for j in range(width)]
        body = rows
    if len(set(header)) != len(header):
        raise DatasetError(f"duplicate header names in {header}")

    for lineno, row in enumerate(body, start=2 if opts.has_header else 1):
        if len(row) != len(header):
            raise DatasetError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
    skip = {s.lower() for s in opts.skip_columns}
    keep = [j for j, h in enumerate(header) if h.lower() not in skip]
    names = [header[j] for j in keep]
    raw = [[row[j].strip() for j in keep] for row in body]

    hint = opts.time_column_hint
    if isinstance(hint, int):
        if not 0 <= hint < len(names):
            raise DatasetError(f"time column index {hint} out of range")
        hint = names[hint]
    if hint is not None and hint not in names:
        raise DatasetError(f"time column {hint!r} not found in {names}")

    parsed_times = {}
    for j, name in enumerate(names):
        if not raw and name != hint:
            continue
        try:
            parsed = [_parse_timestamp(r[j], opts.timestamp_formats) for r in raw]
        except DatasetError:
            if name == hint:
                raise DatasetError(f"time column {name!r} has unparseable values") from None
            continue
        parsed_times[name] = parsed

    if hint is not None:
        tname = hint
    elif len(parsed_times) > 1:
        raise DatasetError(f"ambiguous time columns {sorted(parsed_times)}; pass a hint")
    else:
        tname = next(iter(parsed_times), None)

    data = np.empty((len(raw), len(names)))
    tformat = None
    for j, name in enumerate(names):
        if name == tname:
            vals = parsed_times[name]
            data[:, j] = [v for v, _ in vals]
            tformat = vals[0][1] if vals else None
            continue
        for i, r in enumerate(raw):
            cell = r[j]
            if cell == "":
                raise DatasetError(f"missing value in column {name!r}, row {i + 1}")
            try:
                data[i, j] = float(cell)
            except ValueError:
                raise DatasetError(f"non-numeric value {cell!r} in column {name!r}, row {i + 1}") from None
    tcol = names.index(tname) if tname is not None else None
    return NumericDataset(tuple(names), data, tcol, tformat)


def _fmt_number(v):
    v = float(v)
    if math.isfinite(v) and v.is_integer():
        return str(int(v))
    return repr(v)


def write_csv(ds, dest, delimiter=","):
    """Write ``ds`` as CSV; the time column (if any) goes in its own position."""
    own = isinstance(dest, (str, Path))
    handle = open(dest, "w", newline="", encoding="utf-8") if own else dest
    try:
        w = csv.writer(handle, delimiter=delimiter, lineterminator="\n")
        w.writerow(ds.names)
        fmt = ds.time_format or "%Y-%m-%dT%H:%M:%S"
        for row in ds.data:
            w.writerow(
                format_timestamp(v, fmt) if j == ds.time_column else _fmt_number(v)
                for j, v in enumerate(row)
            )
    finally:
        if own:
            handle.close()


def dumps_csv(ds, delimiter=","):
    buf = io.StringIO()
    write_csv(ds, buf, delimiter)
    return buf.getvalue()
