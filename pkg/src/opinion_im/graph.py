"""Social graph ingestion, per-edge evidence and edge influence scoring.

Direction convention: an influence edge ``u -> v`` means ``v`` follows ``u``
(information flows from the followed account to its follower).  A CSV line
``follower,followee`` therefore yields the influence edge
``followee -> follower``.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from opinion_im.belief import INFLUENCER, combine_dempster, feature_to_bba, BBA, OMEGA
from opinion_im.opinion import OBJECTIVE, Lexicon, OpinionDistribution, score_message, user_opinion

log = logging.getLogger(__name__)

EDGES_HEADER = ("follower", "followee")
EXPORT_FORMAT = "opinion-im-graph"
FEATURES = ("common_neighbors", "mentions", "retweets")


class IngestError(ValueError):
    """Malformed input line; ``line`` is 1-based."""

    def __init__(self, source: str, line: int, reason: str):
        super().__init__(f"{source}: line {line}: {reason}")
        self.source = source
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Message:
    id: str
    author: str
    timestamp: int
    text: str
    mentions: tuple[str, ...] = ()
    retweet_of: str | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "author": self.author,
                "ts": self.timestamp,
                "text": self.text,
                "mentions": list(self.mentions),
                "retweet_of": self.retweet_of,
            },
            ensure_ascii=False,
        )


@dataclass
class EdgeEvidence:
    common_neighbors: int = 0
    mentions: int = 0
    retweets: int = 0

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.common_neighbors, self.mentions, self.retweets)


@dataclass
class Edge:
    evidence: EdgeEvidence = field(default_factory=EdgeEvidence)
    follow: bool = True
    influence: float = 0.0


class SocialGraph:
    """Directed influence graph with dense integer node indices.

    ``version`` is bumped on every mutation so cached views can detect
    staleness.
    """

    def __init__(self):
        self.labels: list[str] = []
        self.index: dict[str, int] = {}
        self.edges: dict[tuple[int, int], Edge] = {}
        self.in_neighbors: list[list[int]] = []
        self.out_neighbors: list[list[int]] = []
        self.followers: list[int] = []
        self.tweets: list[int] = []
        self.mentions_received: list[int] = []
        self.retweets_received: list[int] = []
        self.opinions: list[OpinionDistribution] = []
        self.messages: list[Message] = []
        self.warnings: list[str] = []
        self.version = 0

    @property
    def n(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def add_node(self, label: str) -> int:
        idx = self.index.get(label)
        if idx is not None:
            return idx
        idx = len(self.labels)
        self.labels.append(label)
        self.index[label] = idx
        self.in_neighbors.append([])
        self.out_neighbors.append([])
        for counter in (self.followers, self.tweets, self.mentions_received, self.retweets_received):
            counter.append(0)
        self.opinions.append(OBJECTIVE)
        self.version += 1
        return idx

    def add_edge(self, u: int, v: int, follow: bool = True) -> Edge:
        """Return edge ``u -> v``, creating it if needed. A follow mark is sticky."""
        if u == v:
            raise ValueError(f"self-loop on {self.labels[u]!r}")
        edge = self.edges.get((u, v))
        if edge is None:
            edge = Edge(follow=follow)
            self.edges[(u, v)] = edge
            self.out_neighbors[u].append(v)
            self.in_neighbors[v].append(u)
            if follow:
                self.followers[u] += 1
        elif follow and not edge.follow:
            edge.follow = True
            self.followers[u] += 1
        self.version += 1
        return edge

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def edge(self, u: int, v: int) -> Edge:
        try:
            return self.edges[(u, v)]
        except KeyError:
            raise KeyError(f"no edge {self._name(u)} -> {self._name(v)}") from None

    def neighbors(self, u: int) -> set[int]:
        """Undirected neighborhood of ``u``."""
        return set(self.in_neighbors[u]) | set(self.out_neighbors[u])

    def edge_influence(self, u: int, v: int) -> float:
        edge = self.edges.get((u, v))
        return 0.0 if edge is None else edge.influence

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def set_opinion(self, u: int, opinion: OpinionDistribution) -> None:
        self.opinions[u] = opinion
        self.version += 1

    def set_influence_value(self, u: int, v: int, value: float) -> None:
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"edge influence {value} outside [0, 1]")
        self.edge(u, v).influence = float(value)
        self.version += 1

    def messages_by(self, u: int) -> list[Message]:
        label = self.labels[u]
        return [m for m in self.messages if m.author == label]

    def _name(self, u: int) -> str:
        return self.labels[u] if 0 <= u < self.n else str(u)


# ---------------------------------------------------------------- parsing


def _lines(source) -> tuple[str, Iterable[str]]:
    if isinstance(source, (str, Path)):
        path = Path(source)
        return str(path), path.read_text(encoding="utf-8").splitlines()
    return "<stream>", source


def parse_edges(source) -> list[tuple[str, str]]:
    """Read ``follower,followee`` pairs."""
    name, lines = _lines(source)
    pairs = []
    lines = list(lines)
    if not lines:
        raise IngestError(name, 1, "missing header 'follower,followee'")
    reader = csv.reader(lines)
    for lineno, row in enumerate(reader, start=1):
        row = [c.strip() for c in row]
        if lineno == 1:
            if tuple(row) != EDGES_HEADER:
                raise IngestError(name, 1, f"expected header 'follower,followee', got {','.join(row)!r}")
            continue
        if not row or row == [""]:
            continue
        if len(row) != 2 or not row[0] or not row[1]:
            raise IngestError(name, lineno, "expected two non-empty fields")
        pairs.append((row[0], row[1]))
    return pairs


def _parse_message(obj, name: str, lineno: int) -> Message:
    if not isinstance(obj, dict):
        raise IngestError(name, lineno, "expected a JSON object")
    missing = [k for k in ("id", "author", "ts", "text", "mentions", "retweet_of") if k not in obj]
    if missing:
        raise IngestError(name, lineno, f"missing keys {missing}")
    mid, author, ts, text = obj["id"], obj["author"], obj["ts"], obj["text"]
    mentions, retweet_of = obj["mentions"], obj["retweet_of"]
    if not isinstance(mid, str) or not mid:
        raise IngestError(name, lineno, "'id' must be a non-empty string")
    if not isinstance(author, str) or not author:
        raise IngestError(name, lineno, "'author' must be a non-empty string")
    if isinstance(ts, bool) or not isinstance(ts, int) or ts < 0:
        raise IngestError(name, lineno, "'ts' must be a non-negative integer")
    if not isinstance(text, str):
        raise IngestError(name, lineno, "'text' must be a string")
    if not isinstance(mentions, list) or not all(isinstance(m, str) and m for m in mentions):
        raise IngestError(name, lineno, "'mentions' must be an array of non-empty strings")
    if retweet_of is not None and (not isinstance(retweet_of, str) or not retweet_of):
        raise IngestError(name, lineno, "'retweet_of' must be a non-empty string or null")
    return Message(mid, author, ts, text, tuple(mentions), retweet_of)


def parse_log(source) -> list[Message]:
    """Read a JSON Lines propagation log. Blank lines are skipped."""
    name, lines = _lines(source)
    messages = []
    seen: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestError(name, lineno, f"invalid JSON ({exc.msg})") from None
        msg = _parse_message(obj, name, lineno)
        if msg.id in seen:
            raise IngestError(name, lineno, f"duplicate message id {msg.id!r}")
        seen.add(msg.id)
        messages.append(msg)
    return messages


# -------------------------------------------------------------- ingestion


def ingest(follow_edges, log_source, lexicon: Lexicon | None = None) -> SocialGraph:
    """Build a graph from a follow edge list and a propagation log.

    Users seen only in the log become nodes. Evidence is extracted for every
    edge; opinions are scored when a lexicon is given. Edge influence is left
    at 0 until :func:`score_edges` runs.
    """
    pairs = follow_edges if _is_pairs(follow_edges) else parse_edges(follow_edges)
    messages = log_source if _is_messages(log_source) else parse_log(log_source)
    g = SocialGraph()
    for follower, followee in pairs:
        v, u = g.add_node(follower), g.add_node(followee)
        if u == v:
            g.warnings.append(f"ignored self-follow of {follower!r}")
            continue
        g.add_edge(u, v, follow=True)
    for msg in messages:
        _apply_message(g, msg)
    extract_evidence(g)
    if lexicon is not None:
        assign_opinions(g, lexicon)
    for w in g.warnings:
        log.warning(w)
    return g


def _is_pairs(source) -> bool:
    return isinstance(source, list) and all(isinstance(p, tuple) for p in source)


def _is_messages(source) -> bool:
    return isinstance(source, list) and all(isinstance(m, Message) for m in source)


def _apply_message(g: SocialGraph, msg: Message) -> None:
    a = g.add_node(msg.author)
    g.messages.append(msg)
    g.tweets[a] += 1
    for label in msg.mentions:
        b = g.add_node(label)
        g.mentions_received[b] += 1
        if b != a:
            g.add_edge(a, b, follow=False).evidence.mentions += 1
    if msg.retweet_of is not None:
        if msg.retweet_of not in g.index:
            g.warnings.append(f"message {msg.id!r}: retweet_of user {msg.retweet_of!r} not in graph, added")
        src = g.add_node(msg.retweet_of)
        g.retweets_received[src] += 1
        if src != a:
            g.add_edge(src, a, follow=False).evidence.retweets += 1


def edge_evidence(g: SocialGraph, u: int, v: int) -> EdgeEvidence:
    edge = g.edge(u, v)
    common = len(g.neighbors(u) & g.neighbors(v))
    return EdgeEvidence(common, edge.evidence.mentions, edge.evidence.retweets)


def extract_evidence(g: SocialGraph) -> SocialGraph:
    """Fill ``common_neighbors`` on every edge from the undirected neighborhoods."""
    nbrs = [g.neighbors(u) for u in range(g.n)]
    for (u, v), edge in g.edges.items():
        edge.evidence.common_neighbors = len(nbrs[u] & nbrs[v])
    g.version += 1
    return g


def assign_opinions(g: SocialGraph, lexicon: Lexicon) -> SocialGraph:
    per_user: list[list[OpinionDistribution]] = [[] for _ in range(g.n)]
    for msg in g.messages:
        per_user[g.index[msg.author]].append(score_message(msg.text, lexicon))
    for u, scores in enumerate(per_user):
        g.opinions[u] = user_opinion(scores)
    g.version += 1
    return g


def feature_maxima(g: SocialGraph) -> tuple[int, int, int]:
    maxima = [0, 0, 0]
    for edge in g.edges.values():
        for i, value in enumerate(edge.evidence.as_tuple()):
            maxima[i] = max(maxima[i], value)
    return tuple(maxima)


def edge_bba(evidence: EdgeEvidence, maxima: Sequence[int]) -> BBA:
    """Fuse the three feature BBAs of one edge with Dempster's rule."""
    fused = BBA.vacuous(OMEGA)
    for value, top in zip(evidence.as_tuple(), maxima):
        if top > 0:
            fused = combine_dempster(fused, feature_to_bba(value, top))
    return fused


def score_edges(g: SocialGraph) -> SocialGraph:
    """Set ``edge.influence`` = fused m({I}) on every edge."""
    maxima = feature_maxima(g)
    for edge in g.edges.values():
        edge.influence = min(1.0, max(0.0, edge_bba(edge.evidence, maxima).mass(INFLUENCER)))
    g.version += 1
    return g


def build_graph(
    labels: Sequence[str],
    influences: Mapping[tuple[str, str], float],
    opinions: Mapping[str, OpinionDistribution | float] | None = None,
) -> SocialGraph:
    """Graph with edge influence given directly (no evidence, no log).

    ``opinions`` values may be full distributions or a bare Pr(Pos), in which
    case the remainder is objective. Unlisted users are fully positive.
    """
    g = SocialGraph()
    for label in labels:
        g.add_node(label)
    for (a, b), value in influences.items():
        g.add_edge(g.add_node(a), g.add_node(b), follow=True)
        g.set_influence_value(g.index[a], g.index[b], value)
    opinions = opinions or {}
    for u, label in enumerate(g.labels):
        op = opinions.get(label, 1.0)
        if not isinstance(op, OpinionDistribution):
            op = OpinionDistribution(float(op), 0.0, 1.0 - float(op))
        g.opinions[u] = op
    extract_evidence(g)
    return g


# ---------------------------------------------------------- serialization


def _num(x: float) -> float:
    """Round to 12 significant digits."""
    return float(f"{x:.12g}")


def export_graph(g: SocialGraph) -> dict:
    nodes = [
        {
            "index": u,
            "label": g.labels[u],
            "followers": g.followers[u],
            "tweets": g.tweets[u],
            "mentions": g.mentions_received[u],
            "retweets": g.retweets_received[u],
            "opinion": [_num(x) for x in g.opinions[u].as_tuple()],
        }
        for u in range(g.n)
    ]
    edges = []
    for u, v in g.sorted_edges():
        e = g.edges[(u, v)]
        edges.append(
            {
                "u": g.labels[u],
                "v": g.labels[v],
                "follow": e.follow,
                "common_neighbors": e.evidence.common_neighbors,
                "mentions": e.evidence.mentions,
                "retweets": e.evidence.retweets,
                "influence": _num(e.influence),
            }
        )
    return {"format": EXPORT_FORMAT, "version": 1, "nodes": nodes, "edges": edges}


def dumps_graph(g: SocialGraph) -> str:
    return json.dumps(export_graph(g), indent=1, ensure_ascii=False) + "\n"


def loads_graph(text: str, source: str = "<graph>") -> SocialGraph:
    """Rebuild a graph from :func:`dumps_graph` output. Messages are not stored there."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IngestError(source, exc.lineno, f"invalid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or doc.get("format") != EXPORT_FORMAT:
        raise IngestError(source, 1, f"not an {EXPORT_FORMAT} document")
    g = SocialGraph()
    try:
        for i, node in enumerate(doc["nodes"]):
            if node["index"] != i:
                raise IngestError(source, 1, f"node table out of order at {i}")
            u = g.add_node(node["label"])
            g.tweets[u] = int(node["tweets"])
            g.mentions_received[u] = int(node["mentions"])
            g.retweets_received[u] = int(node["retweets"])
            g.opinions[u] = OpinionDistribution(*map(float, node["opinion"]))
        for e in doc["edges"]:
            u, v = g.index[e["u"]], g.index[e["v"]]
            edge = g.add_edge(u, v, follow=bool(e["follow"]))
            edge.evidence = EdgeEvidence(int(e["common_neighbors"]), int(e["mentions"]), int(e["retweets"]))
            g.set_influence_value(u, v, float(e["influence"]))
        for node in doc["nodes"]:
            u = g.index[node["label"]]
            if g.followers[u] != int(node["followers"]):
                raise IngestError(source, 1, f"follower count of {node['label']!r} disagrees with edge table")
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, IngestError):
            raise
        raise IngestError(source, 1, f"malformed graph document ({exc!r})") from None
    return g


def load_graph(path) -> SocialGraph:
    return loads_graph(Path(path).read_text(encoding="utf-8"), str(path))


def format_edges_csv(g: SocialGraph) -> str:
    """Follow edges as ``follower,followee`` CSV (log-derived edges excluded)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(EDGES_HEADER)
    for u, v in g.sorted_edges():
        if g.edges[(u, v)].follow:
            writer.writerow((g.labels[v], g.labels[u]))
    return buf.getvalue()


def format_log_jsonl(messages: Iterable[Message]) -> str:
    return "".join(m.to_json() + "\n" for m in messages)
