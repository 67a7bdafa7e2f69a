"""``chancekit`` command-line front end.

Subcommands: keygraph, gbe, change, resi, oracle.  Settings come from an
optional flat ``key = value`` file (``--config``) and are overridden by
flags.  Exit codes: 0 success, 1 analysis-level failure or escalated
warning (``--strict``), 2 input/config error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import report
from .change import ChangeConfig, ChangeError, annotate, detect_changes, explain_change
from .change import default_vocab, magnitude_series, segment_trends
from .cooccur import GraphConfig
from .diversity import GbeConfig, change_signs, gbe_series
from .ingest import (
    IngestError,
    TokenizerConfig,
    default_stopwords,
    filter_magnitude,
    load_stopwords,
    parse_basket_jsonl,
    parse_catalog_csv,
    tokenize_text,
)
from .keygraph import KeyGraphConfig, assemble_map
from .oracle import FAULTS, verify
from .resi import RegionSpec, ResiConfig, detect_precursor, resi_series

log = logging.getLogger("chancekit")

EXIT_OK, EXIT_WARN, EXIT_INPUT = 0, 1, 2


class ConfigError(ValueError):
    pass


def _bool(s: str) -> bool:
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _choice(*options) -> Callable[[str], str]:
    def parse(s: str) -> str:
        if s not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {s!r}")
        return s
    parse.__name__ = "choice"
    return parse


def _number(s: str):
    """Integers stay integers so timestamps and window bounds remain exact."""
    try:
        return int(s)
    except ValueError:
        return float(s)


def _optional_int(s: str) -> Optional[int]:
    return None if str(s).strip().lower() in ("", "none", "auto") else int(s)


def _optional_float(s: str) -> Optional[float]:
    return None if str(s).strip().lower() in ("", "none") else float(s)


GRAPH_KEYS = {
    "top_nodes": (int, 30, "graph nodes kept (most frequent items)"),
    "top_edges": (_optional_int, None, "graph edges kept (default top_nodes - 1)"),
}

SCHEMAS: Dict[str, Dict[str, Tuple]] = {
    "keygraph": {
        "mode": (_choice("text", "baskets"), "text", "input kind"),
        **GRAPH_KEYS,
        "top_roofs": (int, 12, "roofs kept by key score"),
        "columns_per_roof": (int, 2, "dotted edges per roof"),
        "lowercase": (_bool, True, "case-fold text tokens"),
        "min_token_len": (int, 2, "shortest kept token"),
        "stopwords": (str, "", "stopword file, one token per line (default: bundled list)"),
        "format": (_choice("json", "dot"), "json", "stdout format when --out is not given"),
    },
    "gbe": {
        "window_len": (_number, 7, "window length in ticks"),
        "step": (_number, 7, "window step in ticks"),
        **GRAPH_KEYS,
        "membership": (_choice("any", "all"), "any", "event-to-island rule"),
        "jaccard": (float, 0.5, "Jaccard threshold for matching islands"),
        "delta_threshold": (float, 0.0, "report |dHg| >= this (0 disables)"),
        "printed_sign": (_bool, False, "drop the minus sign of the entropy"),
        "jobs": (int, 1, "worker threads for windows"),
    },
    "change": {
        "dt": (_number, 10, "half-width of the compared windows"),
        "q": (float, 0.2, "magnitude threshold"),
        "metric": (_choice("L1", "L2", "cosine"), "L2", "distance between market vectors"),
        "vocab_size": (int, 100, "most frequent items tracked"),
        "nms": (_bool, True, "keep only local maxima within dt"),
        "step": (_number, 1, "candidate grid step"),
        "label_k": (int, 5, "label items per trend"),
        "gbe_window_len": (_number, 0, "if > 0, attach GBE structural changes (window length)"),
        "jobs": (int, 1, "worker threads for the candidate grid"),
    },
    "resi": {
        "lat_min": (float, -90.0, "region south edge"),
        "lat_max": (float, 90.0, "region north edge"),
        "lon_min": (float, -180.0, "region west edge"),
        "lon_max": (float, 180.0, "region east edge"),
        "cell_deg": (float, 1.0, "grid pitch in degrees"),
        "window": (_number, 30, "window length W"),
        "step": (_number, 30, "window step"),
        "neighborhood": (_choice("4", "8"), "8", "cell adjacency"),
        "min_events": (int, 1, "windows with fewer events are flagged"),
        "rise_lookback": (int, 3, "readings in the rise window"),
        "flat_lookback": (int, 2, "readings in the flat window"),
        "theta_up": (float, 0.3, "minimum rise slope (bits/window)"),
        "theta_flat": (float, 0.05, "maximum |flat slope| (bits/window)"),
        "min_mag": (_optional_float, None, "drop events below this magnitude"),
        "jobs": (int, 1, "worker threads for windows"),
    },
    "oracle": {
        **GRAPH_KEYS,
        "membership": (_choice("any", "all"), "any", "event-to-island rule"),
    },
}


def read_config_file(path: str) -> Dict[str, str]:
    values = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = value
    return values


def resolve(command: str, args: argparse.Namespace) -> Dict[str, object]:
    schema = SCHEMAS[command]
    raw: Dict[str, object] = {}
    if args.config:
        raw.update(read_config_file(args.config))
    unknown = sorted(set(raw) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config key(s) for {command}: {', '.join(unknown)}")
    for key in schema:
        flag = getattr(args, key, None)
        if flag is not None:
            raw[key] = flag
    out = {}
    for key, (parse, default, _) in schema.items():
        if key not in raw:
            out[key] = default
            continue
        try:
            out[key] = parse(raw[key])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {exc}") from None
    return out


def _read_input(path: str, binary: bool = False):
    if path == "-":
        return sys.stdin.buffer.read() if binary else sys.stdin.read()
    p = Path(path)
    return p.read_bytes() if binary else p.read_text("utf-8")


class Outputs:
    """Writes named artifacts to ``--out DIR``, or the primary one to stdout."""

    def __init__(self, out_dir: Optional[str]):
        self.out_dir = Path(out_dir) if out_dir else None
        if self.out_dir:
            self.out_dir.mkdir(parents=True, exist_ok=True)

    def emit(self, name: str, text: str, primary: bool = False) -> None:
        if self.out_dir:
            (self.out_dir / name).write_text(text, encoding="utf-8")
        elif primary:
            sys.stdout.write(text)


def _graph_cfg(c) -> GraphConfig:
    return GraphConfig(c["top_nodes"], c["top_edges"])


def cmd_keygraph(args, c) -> int:
    warned = False
    if c["mode"] == "text":
        stop = default_stopwords()
        if c["stopwords"]:
            stop = load_stopwords(Path(c["stopwords"]).read_text("utf-8").splitlines())
        tok = TokenizerConfig(lowercase=c["lowercase"], min_token_len=c["min_token_len"],
                              stopwords=stop)
        stream = tokenize_text(_read_input(args.input), tok)
    else:
        stream = parse_basket_jsonl(_read_input(args.input, binary=True))
    if not len(stream):
        log.warning("input contains no events; emitting an empty map")
        warned = True
    cfg = KeyGraphConfig(_graph_cfg(c), c["top_roofs"], c["columns_per_roof"])
    kmap = assemble_map(stream, cfg)
    out = Outputs(args.out)
    out.emit("keygraph.json", report.dumps(report.keygraph_json(kmap)), c["format"] == "json")
    out.emit("keygraph.dot", report.keygraph_dot(kmap, stream), c["format"] == "dot")
    return EXIT_WARN if warned and args.strict else EXIT_OK


def cmd_gbe(args, c) -> int:
    stream = parse_basket_jsonl(_read_input(args.input, binary=True))
    cfg = GbeConfig(c["window_len"], c["step"], _graph_cfg(c), c["membership"], c["jaccard"],
                    c["delta_threshold"], c["printed_sign"])
    series = gbe_series(stream, cfg, jobs=c["jobs"])
    signs = change_signs(series, cfg)
    out = Outputs(args.out)
    out.emit("gbe_series.csv", report.gbe_series_csv(series, signs))
    out.emit("signs.json", report.dumps(report.signs_json(signs, series)), primary=True)
    if not len(stream):
        log.warning("input contains no events")
        return EXIT_WARN if args.strict else EXIT_OK
    return EXIT_OK


def cmd_change(args, c) -> int:
    stream = parse_basket_jsonl(_read_input(args.input, binary=True))
    cfg = ChangeConfig(c["dt"], c["q"], c["metric"], c["vocab_size"], c["nms"], c["step"],
                       c["label_k"])
    vocab = default_vocab(stream, cfg.vocab_size) if len(stream) else None
    series = magnitude_series(stream, cfg, vocab, jobs=c["jobs"])
    points = detect_changes(stream, cfg, vocab, jobs=c["jobs"])
    segments = segment_trends(stream, points, cfg, vocab)
    points = annotate(points, segments)
    signs = None
    if c["gbe_window_len"] and c["gbe_window_len"] > 0:
        gcfg = GbeConfig(c["gbe_window_len"], c["gbe_window_len"])
        signs = change_signs(gbe_series(stream, gcfg), gcfg)
    explanations = [explain_change(p, segments, signs, cfg.dt, cfg.label_k) for p in points]
    out = Outputs(args.out)
    out.emit("change_report.json",
             report.dumps(report.change_report_json(points, segments, explanations)), primary=True)
    out.emit("magnitudes.csv", report.magnitude_csv(series))
    return EXIT_OK


def cmd_resi(args, c) -> int:
    catalog = parse_catalog_csv(_read_input(args.input, binary=True))
    catalog = filter_magnitude(catalog, c["min_mag"])
    region = RegionSpec(c["lat_min"], c["lat_max"], c["lon_min"], c["lon_max"], c["cell_deg"])
    cfg = ResiConfig(region, c["window"], c["step"], int(c["neighborhood"]), c["min_events"],
                     c["rise_lookback"], c["flat_lookback"], c["theta_up"], c["theta_flat"])
    series = resi_series(catalog, cfg, jobs=c["jobs"])
    usable = sum(1 for r in series if not r.flagged)
    flags = []
    warned = False
    if usable >= cfg.rise_lookback + cfg.flat_lookback:
        flags = detect_precursor(series, cfg)
    else:
        log.warning("too few usable readings (%d) for precursor detection", usable)
        warned = True
    out = Outputs(args.out)
    out.emit("resi_series.csv", report.resi_series_csv(series), primary=True)
    out.emit("flags.csv", report.flags_csv(flags))
    return EXIT_WARN if warned and args.strict else EXIT_OK


def cmd_oracle(args, c) -> int:
    stream = parse_basket_jsonl(_read_input(args.input, binary=True))
    rep = verify(stream, args.check, KeyGraphConfig(_graph_cfg(c)), c["membership"],
                 fault=args.inject_fault)
    sys.stdout.write("\n".join(rep.lines()) + "\n")
    sys.stdout.write(("PASS" if rep.passed else "FAIL") + "\n")
    return EXIT_OK if rep.passed else EXIT_WARN


COMMANDS = {
    "keygraph": (cmd_keygraph, "KeyGraph map (islands, roofs, bridges) as JSON and DOT"),
    "gbe": (cmd_gbe, "graph-based entropy series and structural change signs"),
    "change": (cmd_change, "change points, trend segments and explanations"),
    "resi": (cmd_resi, "regional seismic entropy series and precursor flags"),
    "oracle": (cmd_oracle, "re-check counts and entropies by brute force"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chancekit", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        if name == "oracle":
            p.add_argument("check", choices=["cooccur", "distribution", "entropy", "all"])
            p.add_argument("--inject-fault", choices=FAULTS, help=argparse.SUPPRESS)
        p.add_argument("input", help="input path, or - for stdin")
        p.add_argument("--config", help="flat 'key = value' settings file")
        p.add_argument("--out", help="directory for output files (default: stdout)")
        p.add_argument("--strict", action="store_true", help="exit 1 on analysis warnings")
        for key, (_, default, help_text) in SCHEMAS[name].items():
            p.add_argument("--" + key.replace("_", "-"), dest=key, default=None,
                           help=f"{help_text} (default: {default})")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s: %(message)s", stream=sys.stderr, force=True)
    func = COMMANDS[args.command][0]
    try:
        settings = resolve(args.command, args)
        return func(args, settings)
    except (IngestError, ConfigError, ChangeError, OSError, UnicodeDecodeError) as exc:
        log.error("%s", exc)
    except ValueError as exc:
        log.error("invalid configuration: %s", exc)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
