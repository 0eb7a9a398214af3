"""Seed reports: the four activity criteria plus mean positive opinion."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Sequence

from opinion_im.graph import SocialGraph, _num
from opinion_im.maximize import SeedSelection

REPORT_FORMAT = "opinion-im-seeds"
CRITERIA = ("follow", "tweet", "mention", "retweet")


class IncompatibleReports(ValueError):
    pass


def graph_fingerprint(g: SocialGraph) -> str:
    """SHA-256 over the ordered node labels; identifies the node universe."""
    h = hashlib.sha256()
    for label in g.labels:
        h.update(label.encode("utf-8") + b"\n")
    return h.hexdigest()


def seed_report(
    g: SocialGraph,
    selection: SeedSelection,
    model: str,
    gain: str = "exact",
    algorithm: str = "celf",
    wall_time: float | None = None,
) -> dict:
    rows = []
    for rank, (u, gain_value) in enumerate(zip(selection.seeds, selection.gains), start=1):
        rows.append(
            {
                "rank": rank,
                "label": g.labels[u],
                "gain": _num(gain_value),
                "follow": g.followers[u],
                "tweet": g.tweets[u],
                "mention": g.mentions_received[u],
                "retweet": g.retweets_received[u],
                "p_pos": _num(g.opinions[u].p_pos),
            }
        )
    return {
        "format": REPORT_FORMAT,
        "version": 1,
        "model": model,
        "gain": gain,
        "algorithm": algorithm,
        "k": len(rows),
        "graph": {"n": g.n, "fingerprint": graph_fingerprint(g)},
        "seeds": rows,
        "aggregates": aggregates(rows, selection.sigma_final),
        "evaluations": selection.evaluations,
        "initial_evaluations": selection.initial_evaluations,
        "wall_time_s": None if wall_time is None else round(wall_time, 6),
    }


def aggregates(rows: Sequence[dict], sigma: float) -> dict:
    agg = {"sigma": _num(sigma)}
    agg["mean_p_pos"] = _num(sum(r["p_pos"] for r in rows) / len(rows)) if rows else 0.0
    for c in CRITERIA:
        agg[f"total_{c}"] = sum(r[c] for r in rows)
    return agg


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=1, ensure_ascii=False) + "\n"


def load_report(path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(doc, dict) or doc.get("format") != REPORT_FORMAT:
        raise ValueError(f"{path}: not an {REPORT_FORMAT} document")
    return doc


def format_table(report: dict) -> str:
    header = ("rank", "user", "gain", "#Follow", "#Tweet", "#Mention", "#Retweet", "Pr(Pos)")
    body = [
        (
            str(r["rank"]),
            r["label"],
            f"{r['gain']:.6f}",
            str(r["follow"]),
            str(r["tweet"]),
            str(r["mention"]),
            str(r["retweet"]),
            f"{r['p_pos']:.4f}",
        )
        for r in report["seeds"]
    ]
    agg = report["aggregates"]
    lines = _align([header, *body])
    lines.append("")
    lines.append(
        f"model={report['model']} gain={report['gain']} k={report['k']} "
        f"sigma={agg['sigma']:.6f} mean Pr(Pos)={agg['mean_p_pos']:.4f} "
        f"evaluations={report['evaluations']}"
    )
    return "\n".join(lines) + "\n"


def _align(rows: list[Sequence[str]]) -> list[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    out = []
    for j, r in enumerate(rows):
        first = r[0].rjust(widths[0])
        rest = [c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r[1:], widths[1:]))]
        out.append("  ".join([first, *rest]).rstrip())
    return out


def _column_names(reports: Sequence[dict]) -> list[str]:
    names = [r["model"] for r in reports]
    seen: dict[str, int] = {}
    out = []
    for name in names:
        if names.count(name) > 1:
            seen[name] = seen.get(name, 0) + 1
            out.append(f"{name}#{seen[name]}")
        else:
            out.append(name)
    return out


def compare(reports: Sequence[dict]) -> dict:
    """Side-by-side aggregates; every report must come from the same node universe."""
    if not reports:
        raise ValueError("need at least one report")
    prints = {r["graph"]["fingerprint"] for r in reports}
    if len(prints) > 1:
        raise IncompatibleReports("reports were computed on different node universes")
    columns = []
    for name, r in zip(_column_names(reports), reports):
        columns.append({"name": name, "model": r["model"], "gain": r["gain"], "k": r["k"], **r["aggregates"]})
    return {"format": "opinion-im-comparison", "version": 1, "graph": reports[0]["graph"], "columns": columns}


def format_comparison(comparison: dict) -> str:
    cols = comparison["columns"]
    keys = [("k", "{}"), ("sigma", "{:.6f}"), ("mean_p_pos", "{:.4f}")]
    keys += [(f"total_{c}", "{}") for c in CRITERIA]
    rows = [["", *[c["name"] for c in cols]]]
    for key, fmt in keys:
        rows.append([key, *[fmt.format(c[key]) for c in cols]])
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    lines = ["  ".join([r[0].ljust(widths[0]), *[c.rjust(w) for c, w in zip(r[1:], widths[1:])]]) for r in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"


def curves_csv(reports: Sequence[dict]) -> str:
    """Per-rank cumulative criteria and running mean Pr(Pos) for each report."""
    names = _column_names(reports)
    header = ["rank"]
    for name in names:
        header += [f"{name}_{c}" for c in CRITERIA] + [f"{name}_mean_p_pos"]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    depth = max(len(r["seeds"]) for r in reports)
    running = [dict.fromkeys((*CRITERIA, "p_pos"), 0.0) for _ in reports]
    for rank in range(1, depth + 1):
        row: list = [rank]
        for i, r in enumerate(reports):
            if rank <= len(r["seeds"]):
                seed = r["seeds"][rank - 1]
                for c in (*CRITERIA, "p_pos"):
                    running[i][c] += seed[c]
                row += [int(running[i][c]) for c in CRITERIA] + [_num(running[i]["p_pos"] / rank)]
            else:
                row += [""] * (len(CRITERIA) + 1)
        writer.writerow(row)
    return buf.getvalue()
