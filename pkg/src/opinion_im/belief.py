"""Basic belief assignments over finite frames and Dempster's rule.

Focal sets are bitsets over the frame's element indices: bit ``i`` set means
``frame.elements[i]`` belongs to the set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

MASS_TOL = 1e-9
CLEANUP_EPS = 1e-12
CONFLICT_EPS = 1e-12
MAX_FRAME_SIZE = 16


class TotalConflictError(ValueError):
    """Raised when two BBAs are fully contradictory (K ~ 1)."""


@dataclass(frozen=True)
class Frame:
    elements: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        if not self.elements:
            raise ValueError("frame must be non-empty")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"frame labels must be unique: {self.elements}")
        if len(self.elements) > MAX_FRAME_SIZE:
            raise ValueError(f"frame larger than {MAX_FRAME_SIZE} elements")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def mask(self, labels: Iterable[str]) -> int:
        """Bitset for a collection of labels."""
        m = 0
        for label in labels:
            try:
                m |= 1 << self.elements.index(label)
            except ValueError:
                raise ValueError(f"{label!r} is not in frame {self.elements}") from None
        return m

    def labels(self, mask: int) -> frozenset[str]:
        return frozenset(e for i, e in enumerate(self.elements) if mask >> i & 1)


OMEGA = Frame(("I", "P"))
INFLUENCER = OMEGA.mask(["I"])


def _as_mask(frame: Frame, focal) -> int:
    if isinstance(focal, int):
        return focal
    if isinstance(focal, str):
        return frame.mask([focal])
    return frame.mask(focal)


@dataclass(frozen=True)
class BBA:
    """Mass function on the non-empty subsets of ``frame``.

    ``masses`` may be keyed by bitset or by label collections; keys are
    normalized to bitsets. Total mass must be 1 within ``MASS_TOL``.
    """

    frame: Frame
    masses: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        cleaned: dict[int, float] = {}
        full = self.frame.full
        total = 0.0
        for key, value in self.masses.items():
            m = _as_mask(self.frame, key)
            if m == 0 or m & ~full:
                raise ValueError(f"focal set {key!r} is not a non-empty subset of the frame")
            value = float(value)
            if value < -CLEANUP_EPS:
                raise ValueError(f"negative mass {value} on {key!r}")
            total += value
            cleaned[m] = cleaned.get(m, 0.0) + value
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"masses sum to {total}, expected 1")
        cleaned = {m: v for m, v in sorted(cleaned.items()) if v >= CLEANUP_EPS}
        object.__setattr__(self, "masses", cleaned)

    @classmethod
    def vacuous(cls, frame: Frame = OMEGA) -> "BBA":
        return cls(frame, {frame.full: 1.0})

    def mass(self, focal) -> float:
        return self.masses.get(_as_mask(self.frame, focal), 0.0)

    def belief(self, focal) -> float:
        target = _as_mask(self.frame, focal)
        return sum(v for m, v in self.masses.items() if m & ~target == 0)

    def plausibility(self, focal) -> float:
        target = _as_mask(self.frame, focal)
        return sum(v for m, v in self.masses.items() if m & target)

    def is_vacuous(self) -> bool:
        return self.masses == {self.frame.full: 1.0}

    def as_labels(self) -> dict[frozenset[str], float]:
        return {self.frame.labels(m): v for m, v in self.masses.items()}


def make_simple_bba(frame: Frame, focal, mass: float) -> BBA:
    """Simple-support BBA: ``mass`` on ``focal``, the rest on the full frame."""
    if not 0.0 <= mass <= 1.0:
        raise ValueError(f"mass must lie in [0, 1], got {mass}")
    m = _as_mask(frame, focal)
    if m == 0:
        raise ValueError("focal set must be non-empty")
    if m == frame.full:
        return BBA.vacuous(frame)
    return BBA(frame, {m: mass, frame.full: 1.0 - mass})


def combine_dempster(a: BBA, b: BBA) -> BBA:
    """Dempster's rule: conjunctive combination renormalized by 1 - K."""
    if a.frame != b.frame:
        raise ValueError(f"frames differ: {a.frame.elements} vs {b.frame.elements}")
    joint: dict[int, float] = {}
    conflict = 0.0
    for ma, va in a.masses.items():
        for mb, vb in b.masses.items():
            inter = ma & mb
            if inter:
                joint[inter] = joint.get(inter, 0.0) + va * vb
            else:
                conflict += va * vb
    if conflict >= 1.0 - CONFLICT_EPS:
        raise TotalConflictError(f"total conflict K={conflict}")
    norm = 1.0 - conflict
    return BBA(a.frame, {m: v / norm for m, v in joint.items()})


def conflict(a: BBA, b: BBA) -> float:
    """Mass K assigned to the empty set by the unnormalized conjunctive rule."""
    return sum(va * vb for ma, va in a.masses.items() for mb, vb in b.masses.items() if not ma & mb)


def feature_to_bba(value: float, max_value: float) -> BBA:
    """Max-normalized simple support for {I} on the influence frame."""
    if max_value <= 0:
        raise ValueError(f"max_value must be positive, got {max_value}")
    if value < 0 or value > max_value:
        raise ValueError(f"value {value} outside [0, {max_value}]")
    return make_simple_bba(OMEGA, INFLUENCER, value / max_value)
