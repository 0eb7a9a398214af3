"""Lexicon-based message polarity and per-user opinion distributions."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

_TOKEN_SPLIT = re.compile(r"[\W_]+")


class LexiconParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"lexicon line {line}: {reason}")
        self.line = line


@dataclass(frozen=True)
class OpinionDistribution:
    """Probability triple over {Pos, Neg, Obj}."""

    p_pos: float = 0.0
    p_neg: float = 0.0
    p_obj: float = 1.0

    def __post_init__(self):
        for name in ("p_pos", "p_neg", "p_obj"):
            if not -1e-12 <= getattr(self, name) <= 1 + 1e-12:
                raise ValueError(f"{name}={getattr(self, name)} outside [0, 1]")
        total = self.p_pos + self.p_neg + self.p_obj
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"opinion distribution sums to {total}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.p_pos, self.p_neg, self.p_obj)


OBJECTIVE = OpinionDistribution()
POSITIVE = OpinionDistribution(1.0, 0.0, 0.0)


@dataclass(frozen=True)
class Lexicon:
    entries: Mapping[str, tuple[float, float]] = field(default_factory=dict)

    def __post_init__(self):
        for token, (pos, neg) in self.entries.items():
            if not (0 <= pos <= 1 and 0 <= neg <= 1 and pos + neg <= 1 + 1e-12):
                raise ValueError(f"invalid scores for {token!r}: ({pos}, {neg})")

    def __contains__(self, token: str) -> bool:
        return token in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def load(cls, path) -> "Lexicon":
        return parse_lexicon(Path(path).read_text(encoding="utf-8").splitlines())


def parse_lexicon(lines: Iterable[str]) -> Lexicon:
    """Parse ``token<TAB>pos<TAB>neg`` lines; ``#`` comments and blanks skipped, last entry wins."""
    entries: dict[str, tuple[float, float]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise LexiconParseError(lineno, f"expected 3 tab-separated fields, got {len(parts)}")
        token = parts[0].strip().lower()
        if not token:
            raise LexiconParseError(lineno, "empty token")
        try:
            pos, neg = float(parts[1]), float(parts[2])
        except ValueError:
            raise LexiconParseError(lineno, "scores must be numbers") from None
        if not (0 <= pos <= 1 and 0 <= neg <= 1):
            raise LexiconParseError(lineno, "scores must lie in [0, 1]")
        if pos + neg > 1 + 1e-12:
            raise LexiconParseError(lineno, "pos + neg exceeds 1")
        entries[token] = (pos, neg)
    return Lexicon(entries)


def format_lexicon(lexicon: Lexicon) -> str:
    return "".join(f"{t}\t{p!r}\t{n!r}\n" for t, (p, n) in sorted(lexicon.entries.items()))


def tokenize(text: str) -> list[str]:
    return [t for t in _TOKEN_SPLIT.split(text.lower()) if t]


def score_message(text: str, lexicon: Lexicon) -> OpinionDistribution:
    tokens = tokenize(text)
    if not tokens:
        return OBJECTIVE
    pos = neg = 0.0
    for token in tokens:
        hit = lexicon.entries.get(token)
        if hit is not None:
            pos += hit[0]
            neg += hit[1]
    n = len(tokens)
    pos, neg = pos / n, neg / n
    return OpinionDistribution(pos, neg, max(0.0, 1.0 - pos - neg))


def user_opinion(messages: Iterable[OpinionDistribution]) -> OpinionDistribution:
    """Unweighted mean of message distributions; silent users are objective."""
    messages = list(messages)
    if not messages:
        return OBJECTIVE
    n = len(messages)
    pos = sum(m.p_pos for m in messages) / n
    neg = sum(m.p_neg for m in messages) / n
    obj = sum(m.p_obj for m in messages) / n
    return OpinionDistribution(pos, neg, obj)
