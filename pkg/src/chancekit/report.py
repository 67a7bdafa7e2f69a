"""Byte-stable JSON, CSV and DOT renderings of analysis results."""

from __future__ import annotations

import csv
import io
import json
from typing import Sequence

from .cooccur import cooccurrence
from .keygraph import KeyGraphMap, bridges


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def write_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


# -- KeyGraph -----------------------------------------------------------------

def keygraph_json(kmap: KeyGraphMap) -> dict:
    return {
        "black_nodes": sorted(kmap.black_nodes),
        "red_nodes": sorted(kmap.red_nodes),
        "keyword_nodes": sorted(kmap.keyword_nodes),
        "islands": [{"id": g.id, "items": sorted(g.items)} for g in kmap.islands],
        "solid_edges": [[a, b, w] for (a, b), w in sorted(kmap.solid_edges.items())],
        "dotted_edges": [{"word": c.word, "island": c.island, "strength": c.strength}
                         for c in kmap.dotted_edges],
        "roofs": [{"item": w, "key": kmap.key_scores.get(w, 0.0),
                   "freq": kmap.frequencies.get(w, 0)} for w in kmap.roofs],
        "bridges": [{"from": a, "to": b, "via": via} for a, b, via in bridges(kmap)],
        "frequencies": dict(sorted(kmap.frequencies.items())),
    }


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def keygraph_dot(kmap: KeyGraphMap, stream=None, name: str = "keygraph") -> str:
    """Render the map as an undirected DOT graph.

    Islands become ``cluster_<id>`` subgraphs.  A dotted edge is drawn from
    the roof to the island member it co-occurs with most (``stream``
    needed; otherwise the island's first member) with ``lhead`` set.
    """
    lines = [f"graph {_q(name)} {{", "  compound=true;", "  node [shape=ellipse];"]
    roofs = kmap.red_nodes | kmap.keyword_nodes
    for g in kmap.islands:
        lines.append(f"  subgraph cluster_{g.id} {{")
        lines.append(f'    label="island {g.id}";')
        for item in sorted(g.items):
            attrs = ["style=filled", "fillcolor=black", "fontcolor=white"]
            if item in kmap.keyword_nodes:
                attrs.append("peripheries=2")
            lines.append(f"    {_q(item)} [{', '.join(attrs)}];")
        for (a, b), w in sorted(kmap.solid_edges.items()):
            if a in g.items:
                lines.append(f"    {_q(a)} -- {_q(b)} [weight={w}];")
        lines.append("  }")
    for item in sorted(kmap.red_nodes):
        lines.append(f"  {_q(item)} [color=red, fontcolor=red];")
    for c in sorted(kmap.dotted_edges, key=lambda c: (c.word, c.island)):
        if c.word not in roofs:
            continue
        members = sorted(next(g.items for g in kmap.islands if g.id == c.island))
        target = members[0]
        if stream is not None:
            target = min(members, key=lambda m: (-cooccurrence(stream, c.word, m), m))
        lines.append(f"  {_q(c.word)} -- {_q(target)} "
                     f"[style=dashed, color=red, lhead=cluster_{c.island}, "
                     f'label="{c.strength:g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- GBE ----------------------------------------------------------------------

def gbe_series_csv(series, signs) -> str:
    kinds = {s.window: ";".join(c.kind for c in s.changes) for s in signs}
    rows = []
    for k, r in enumerate(series):
        rows.append([r.window_start, r.window_end, r.n_events, r.Hg,
                     len(r.distribution.freqs), kinds.get(k, "")])
    return write_csv(["window_start", "window_end", "n_events", "Hg", "n_clusters", "changes"], rows)


def change_record(c) -> dict:
    return {"kind": c.kind, "before": list(c.before), "after": list(c.after),
            "window_end": c.window_end}


def signs_json(signs, series=None) -> dict:
    out = []
    for s in signs:
        entry = {"window": s.window, "window_start": s.window_start,
                 "window_end": s.window_end, "delta_hg": s.delta_hg,
                 "changes": [change_record(c) for c in s.changes]}
        if series is not None:
            entry["islands_before"] = [sorted(g.items) for g in series[s.window - 1].islands]
            entry["islands_after"] = [sorted(g.items) for g in series[s.window].islands]
        out.append(entry)
    return {"signs": out}


# -- change -------------------------------------------------------------------

def change_report_json(points, segments, explanations) -> dict:
    return {
        "change_points": [{"t": p.t, "magnitude": p.magnitude, "from_trend": p.from_trend,
                           "to_trend": p.to_trend} for p in points],
        "segments": [{"trend_id": s.trend_id, "start": s.start, "end": s.end,
                      "label_items": list(s.label_items),
                      "centroid": s.centroid.as_dict()} for s in segments],
        "explanations": [{"t": x.t, "from_trend": x.from_trend, "to_trend": x.to_trend,
                          "from_labels": list(x.from_labels), "to_labels": list(x.to_labels),
                          "rising": [[i, d] for i, d in x.rising],
                          "falling": [[i, d] for i, d in x.falling],
                          "structural": [change_record(c) for c in x.structural]}
                         for x in explanations],
    }


def magnitude_csv(series) -> str:
    return write_csv(["t", "magnitude"], series)


# -- RESI ---------------------------------------------------------------------

def resi_series_csv(series) -> str:
    return write_csv(["t", "H", "n_clusters", "n_events", "flagged"],
                     [[r.t, r.H, r.n_clusters, r.n_events, int(r.flagged)] for r in series])


def flags_csv(flags) -> str:
    return write_csv(["t", "rise_slope", "flat_slope"],
                     [[f.t, f.rise_slope, f.flat_slope] for f in flags])
