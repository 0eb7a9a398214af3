"""Reproducible synthetic follower graph, propagation log and lexicon.

A preferential-attachment follow graph is decorated with a message log in
which a few planted accounts are very active: half of them write positive
messages, half negative. Their audiences mention and retweet them heavily,
so both planted groups carry strong edge evidence while only the positive
group should rank high once opinion is taken into account.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from opinion_im.graph import EDGES_HEADER, Message, format_log_jsonl
from opinion_im.opinion import Lexicon, format_lexicon

POSITIVE_WORDS = {
    "good": (0.75, 0.0),
    "great": (0.875, 0.0),
    "love": (0.625, 0.0),
    "excellent": (1.0, 0.0),
    "amazing": (0.75, 0.125),
    "awesome": (0.875, 0.0),
    "happy": (0.875, 0.0),
    "best": (0.75, 0.0),
}
NEGATIVE_WORDS = {
    "bad": (0.0, 0.625),
    "terrible": (0.0, 0.875),
    "hate": (0.0, 0.75),
    "awful": (0.0, 0.875),
    "worst": (0.0, 0.75),
    "broken": (0.0, 0.625),
    "slow": (0.125, 0.5),
    "poor": (0.0, 0.75),
}
NEUTRAL_WORDS = ["phone", "battery", "screen", "camera", "update", "today", "new", "my", "the", "app"]

START_TS = 1410134400  # 2014-09-08T00:00:00Z


@dataclass
class SynthData:
    labels: list[str]
    follows: list[tuple[str, str]]
    messages: list[Message]
    lexicon: Lexicon
    planted_positive: list[str] = field(default_factory=list)
    planted_negative: list[str] = field(default_factory=list)

    def edges_csv(self) -> str:
        lines = [",".join(EDGES_HEADER)] + [f"{a},{b}" for a, b in self.follows]
        return "\n".join(lines) + "\n"

    def log_jsonl(self) -> str:
        return format_log_jsonl(self.messages)

    def lexicon_tsv(self) -> str:
        return "# token\tpos\tneg\n" + format_lexicon(self.lexicon)

    def manifest(self) -> str:
        doc = {
            "n": len(self.labels),
            "planted_positive": self.planted_positive,
            "planted_negative": self.planted_negative,
        }
        return json.dumps(doc, indent=1) + "\n"

    def write(self, directory) -> dict[str, Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        files = {
            "edges": (out / "edges.csv", self.edges_csv()),
            "log": (out / "log.jsonl", self.log_jsonl()),
            "lexicon": (out / "lexicon.tsv", self.lexicon_tsv()),
            "planted": (out / "planted.json", self.manifest()),
        }
        for path, text in files.values():
            path.write_text(text, encoding="utf-8")
        return {name: path for name, (path, _) in files.items()}


def _text(rng: random.Random, words: list[str], length: int, polar_share: float) -> str:
    out = []
    for _ in range(length):
        out.append(rng.choice(words) if rng.random() < polar_share else rng.choice(NEUTRAL_WORDS))
    return " ".join(out)


def generate(n: int, seed: int = 42, follows_per_node: int = 3, plant_fraction: float = 0.1) -> SynthData:
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = random.Random(seed)
    width = len(str(n - 1))
    labels = [f"u{i:0{width}d}" for i in range(n)]
    pos_words, neg_words = sorted(POSITIVE_WORDS), sorted(NEGATIVE_WORDS)

    # preferential attachment: each newcomer follows existing users by (followers + 1)
    follows: list[tuple[str, str]] = []
    followers_of: list[list[int]] = [[] for _ in range(n)]
    followees_of: list[list[int]] = [[] for _ in range(n)]
    weights = [1] * n
    for i in range(1, n):
        m = min(follows_per_node, i)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(rng.choices(range(i), weights=weights[:i])[0])
        for j in sorted(chosen):
            follows.append((labels[i], labels[j]))
            followers_of[j].append(i)
            followees_of[i].append(j)
            weights[j] += 1

    n_plant = max(1, round(n * plant_fraction)) if n >= 4 else 0
    planted = rng.sample(range(n), 2 * n_plant) if n_plant else []
    positive, negative = sorted(planted[:n_plant]), sorted(planted[n_plant:])
    mood = {u: "pos" for u in positive} | {u: "neg" for u in negative}

    messages: list[Message] = []
    ts = START_TS

    def emit(author: int, text: str, mentions=(), retweet_of: int | None = None) -> None:
        nonlocal ts
        ts += rng.randint(30, 3600)
        messages.append(
            Message(
                f"m{len(messages):06d}",
                labels[author],
                ts,
                text,
                tuple(labels[m] for m in mentions),
                None if retweet_of is None else labels[retweet_of],
            )
        )

    # ordinary users: a few mostly neutral, mixed-polarity messages
    for u in range(n):
        if u in mood:
            continue
        for _ in range(rng.randint(1, 3)):
            words = pos_words if rng.random() < 0.5 else neg_words
            mentions = []
            if followees_of[u] and rng.random() < 0.3:
                mentions.append(rng.choice(followees_of[u]))
            emit(u, _text(rng, words, rng.randint(3, 7), 0.2), mentions)
        if followees_of[u] and rng.random() < 0.3:
            src = rng.choice(followees_of[u])
            emit(u, "rt " + _text(rng, NEUTRAL_WORDS, 4, 0.0), retweet_of=src)

    # planted accounts: many polar messages, heavily mentioned and retweeted
    others = [u for u in range(n) if u not in mood]
    for p in positive + negative:
        words = pos_words if mood[p] == "pos" else neg_words
        for _ in range(rng.randint(8, 12)):
            emit(p, _text(rng, words, rng.randint(4, 8), 0.7))
        audience = set(followers_of[p])
        if others:
            audience |= set(rng.sample(others, min(len(others), 8)))
        audience.discard(p)
        for a in sorted(audience):
            for _ in range(rng.randint(1, 3)):
                emit(a, "rt " + _text(rng, words, 5, 0.4), retweet_of=p)
            if rng.random() < 0.6:
                emit(a, _text(rng, NEUTRAL_WORDS, 4, 0.0), [p])

    lexicon = Lexicon(POSITIVE_WORDS | NEGATIVE_WORDS)
    return SynthData(
        labels,
        follows,
        messages,
        lexicon,
        [labels[u] for u in positive],
        [labels[u] for u in negative],
    )
