"""Co-occurrence graphs, KeyGraph maps and entropy-based change signs."""

from .ingest import (
    Event,
    EventStream,
    IngestError,
    SeismicEvent,
    TokenizerConfig,
    dump_basket_jsonl,
    parse_basket_jsonl,
    parse_catalog_csv,
    tokenize_text,
)
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Event",
    "EventStream",
    "IngestError",
    "SeismicEvent",
    "TokenizerConfig",
    "dump_basket_jsonl",
    "parse_basket_jsonl",
    "parse_catalog_csv",
    "tokenize_text",
]
