"""Parsing of raw text, basket logs and seismic catalogs into event streams.

Every input kind ends up as an :class:`EventStream`: an ordered list of
timestamped multisets of string items.  Text sentences, point-of-sale
baskets and gridded epicenters are all treated the same way downstream.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import resources
from typing import IO, Iterable, Iterator, Mapping, Optional, Union

Timestamp = Union[int, float]


class IngestError(ValueError):
    """Raised for malformed input; carries the offending line/row number."""

    def __init__(self, message: str, lineno: Optional[int] = None):
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True)
class Event:
    t: Timestamp
    items: Mapping[str, int]

    def __post_init__(self):
        if not self.items:
            raise ValueError("event has no items")
        for item, count in self.items.items():
            if not item or any(ch.isspace() for ch in item):
                raise ValueError(f"invalid item {item!r}")
            if count < 1:
                raise ValueError(f"non-positive count for item {item!r}")

    @classmethod
    def of(cls, t: Timestamp, items: Iterable[str]) -> "Event":
        return cls(t, dict(Counter(items)))


@dataclass(frozen=True)
class EventStream:
    events: tuple = ()

    def __post_init__(self):
        ts = [e.t for e in self.events]
        if any(b < a for a, b in zip(ts, ts[1:])):
            raise ValueError("events must be non-decreasing in t")

    @classmethod
    def from_events(cls, events: Iterable[Event]) -> "EventStream":
        """Build a stream, stably sorting by timestamp."""
        return cls(tuple(sorted(events, key=lambda e: e.t)))

    def __iter__(self) -> Iterator[Event]:
        return iter(self.events)

    def __len__(self) -> int:
        return len(self.events)

    def __getitem__(self, idx):
        return self.events[idx]

    @property
    def t_first(self) -> Timestamp:
        return self.events[0].t

    @property
    def t_last(self) -> Timestamp:
        return self.events[-1].t

    def between(self, start: Timestamp, end: Timestamp) -> "EventStream":
        """Events with ``start <= t < end``."""
        return EventStream(tuple(e for e in self.events if start <= e.t < end))

    def vocabulary(self) -> list:
        return sorted({item for e in self.events for item in e.items})


@dataclass(frozen=True)
class SeismicEvent:
    t: Timestamp
    lat: float
    lon: float
    mag: Optional[float] = None

    def __post_init__(self):
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude out of range: {self.lat}")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude out of range: {self.lon}")


def default_stopwords() -> frozenset:
    text = resources.files("chancekit").joinpath("stopwords_en.txt").read_text("utf-8")
    return load_stopwords(text.splitlines())


def load_stopwords(lines: Iterable[str]) -> frozenset:
    """One token per line; blank lines and ``#`` comments are ignored."""
    words = set()
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return frozenset(words)


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = True
    min_token_len: int = 2
    stopwords: frozenset = field(default_factory=default_stopwords)
    sentence_delimiters: frozenset = frozenset(".!?\n")

    def __post_init__(self):
        if self.min_token_len < 1:
            raise ValueError("min_token_len must be >= 1")
        if not self.sentence_delimiters:
            raise ValueError("sentence_delimiters must not be empty")


# Unicode letters and digits; underscore is a word character for \w but not here.
_TOKEN_RE = re.compile(r"[^\W_]+")


def tokenize_text(raw: str, cfg: Optional[TokenizerConfig] = None) -> EventStream:
    """Split text into sentences; each non-empty sentence becomes one event.

    The timestamp of an event is the index of its sentence among the
    non-empty ones, starting at 0.
    """
    cfg = cfg or TokenizerConfig()
    splitter = re.compile("[" + re.escape("".join(sorted(cfg.sentence_delimiters))) + "]+")
    stop = cfg.stopwords
    if cfg.lowercase:
        stop = frozenset(w.lower() for w in stop)
    events = []
    for sentence in splitter.split(raw):
        tokens = []
        for tok in _TOKEN_RE.findall(sentence):
            if cfg.lowercase:
                tok = tok.lower()
            if len(tok) < cfg.min_token_len or tok in stop:
                continue
            tokens.append(tok)
        if tokens:
            events.append(Event.of(len(events), tokens))
    return EventStream(tuple(events))


def parse_timestamp(value) -> Timestamp:
    """Integer ticks pass through; ISO-8601 strings become POSIX seconds.

    Naive ISO timestamps are read as UTC.
    """
    if isinstance(value, bool):
        raise ValueError("boolean is not a timestamp")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError("non-finite timestamp")
        return int(value) if value.is_integer() else value
    if isinstance(value, str):
        s = value.strip()
        if re.fullmatch(r"[+-]?\d+", s):
            return int(s)
        try:
            return parse_timestamp(float(s))
        except ValueError:
            pass
        if s.endswith(("Z", "z")):
            s = s[:-1] + "+00:00"
        # 3.10 only takes 3 or 6 fractional digits
        s = re.sub(r"\.(\d{1,6})\d*", lambda m: "." + m.group(1).ljust(6, "0"), s, count=1)
        dt = datetime.fromisoformat(s)
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        secs = dt.timestamp()
        return int(secs) if float(secs).is_integer() else secs
    raise ValueError(f"unsupported timestamp {value!r}")


def _text_lines(stream) -> Iterator[str]:
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(stream)
    if isinstance(stream, str):
        stream = io.StringIO(stream)
    for line in stream:
        if isinstance(line, (bytes, bytearray)):
            line = line.decode("utf-8")
        yield line


def parse_basket_jsonl(stream: Union[IO, bytes, str]) -> EventStream:
    """Read one ``{"t": ..., "items": [...]}`` object per line.

    Blank lines are skipped.  The result is stably sorted by ``t``.
    """
    events = []
    for lineno, line in enumerate(_text_lines(stream), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(f"malformed JSON at line {lineno}: {exc.msg}", lineno) from None
        if not isinstance(obj, dict) or "t" not in obj or "items" not in obj:
            raise IngestError(f"line {lineno}: expected object with 't' and 'items'", lineno)
        items = obj["items"]
        if not isinstance(items, list):
            raise IngestError(f"line {lineno}: 'items' must be an array", lineno)
        if not items:
            raise IngestError(f"empty basket at line {lineno}", lineno)
        for item in items:
            if not isinstance(item, str) or not item or any(ch.isspace() for ch in item):
                raise IngestError(f"line {lineno}: invalid item {item!r}", lineno)
        try:
            t = parse_timestamp(obj["t"])
        except (ValueError, TypeError) as exc:
            raise IngestError(f"line {lineno}: bad timestamp: {exc}", lineno) from None
        events.append(Event.of(t, items))
    return EventStream.from_events(events)


def dump_basket_jsonl(stream: EventStream) -> str:
    """Inverse of :func:`parse_basket_jsonl`; multiplicities become repeats."""
    out = []
    for e in stream:
        items = [item for item in sorted(e.items) for _ in range(e.items[item])]
        out.append(json.dumps({"t": e.t, "items": items}, ensure_ascii=False))
    return "".join(line + "\n" for line in out)


def parse_catalog_csv(stream: Union[IO, bytes, str]) -> list:
    """Read a ``t,lat,lon[,mag]`` catalog; rows are returned in file order."""
    reader = csv.reader(_text_lines(stream))
    try:
        header = [h.strip().lower() for h in next(reader)]
    except StopIteration:
        return []
    if header not in (["t", "lat", "lon"], ["t", "lat", "lon", "mag"]):
        raise IngestError(f"bad header {','.join(header)!r}; expected t,lat,lon[,mag]", 1)
    has_mag = len(header) == 4
    events = []
    for rowno, row in enumerate(reader, start=2):
        if not row or all(not f.strip() for f in row):
            continue
        if len(row) != len(header):
            raise IngestError(f"row {rowno}: expected {len(header)} fields, got {len(row)}", rowno)
        try:
            t = parse_timestamp(row[0])
            lat = float(row[1])
            lon = float(row[2])
            mag = float(row[3]) if has_mag and row[3].strip() else None
        except ValueError as exc:
            raise IngestError(f"row {rowno}: unparsable field: {exc}", rowno) from None
        if not (math.isfinite(lat) and -90.0 <= lat <= 90.0):
            raise IngestError(f"row {rowno}: latitude out of range: {row[1]}", rowno)
        if not (math.isfinite(lon) and -180.0 <= lon <= 180.0):
            raise IngestError(f"row {rowno}: longitude out of range: {row[2]}", rowno)
        events.append(SeismicEvent(t, lat, lon, mag))
    return events


def filter_magnitude(catalog: Iterable[SeismicEvent], min_mag: Optional[float]) -> list:
    """Keep events with ``mag >= min_mag``; unset magnitudes are dropped."""
    if min_mag is None:
        return list(catalog)
    return [e for e in catalog if e.mag is not None and e.mag >= min_mag]
