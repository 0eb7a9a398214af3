"""Seed selection: CELF lazy greedy, plain greedy and exhaustive search."""

from __future__ import annotations

import heapq
import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from opinion_im.influence import GainFormula, InfluenceView

BRUTE_FORCE_LIMIT = 10**6


class InstanceTooLarge(ValueError):
    pass


@dataclass
class SeedSelection:
    seeds: list[int] = field(default_factory=list)
    gains: list[float] = field(default_factory=list)
    sigma_final: float = 0.0
    evaluations: int = 0
    initial_evaluations: int = 0

    @property
    def lazy_evaluations(self) -> int:
        """Gain computations after the first full pass."""
        return self.evaluations - self.initial_evaluations


def _check_k(view: InfluenceView, k: int) -> None:
    if not 1 <= k <= view.n:
        raise ValueError(f"k must lie in [1, {view.n}], got {k}")


def greedy_select(view: InfluenceView, k: int, gain: GainFormula | str = GainFormula.EXACT) -> SeedSelection:
    """Recompute every candidate's gain each round; ties go to the smaller index."""
    _check_k(view, k)
    gain_fn = view._gain_fn(gain)
    mask = view._mask([])
    out = SeedSelection()
    for step in range(k):
        best, best_gain = -1, -math.inf
        for x in range(view.n):
            if mask[x]:
                continue
            value = gain_fn(mask, x)
            out.evaluations += 1
            if value > best_gain:
                best, best_gain = x, value
        if step == 0:
            out.initial_evaluations = out.evaluations
        mask[best] = True
        out.seeds.append(best)
        out.gains.append(best_gain)
    out.sigma_final = view.sigma(out.seeds)
    return out


def celf_select(
    view: InfluenceView,
    k: int,
    gain: GainFormula | str = GainFormula.EXACT,
    workers: int | None = None,
) -> SeedSelection:
    """Lazy-forward greedy.

    Queue entries are ``(-gain, index, stamp)`` where ``stamp`` is the seed
    count when the gain was last computed; the head is accepted as soon as
    its stamp is current. ``workers`` parallelizes the first pass only.
    """
    _check_k(view, k)
    gain_fn = view._gain_fn(gain)
    mask = view._mask([])
    nodes = range(view.n)
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            first = list(pool.map(lambda x: gain_fn(mask, x), nodes))
    else:
        first = [gain_fn(mask, x) for x in nodes]
    out = SeedSelection(evaluations=view.n, initial_evaluations=view.n)
    queue = [(-value, x, 0) for x, value in zip(nodes, first)]
    heapq.heapify(queue)
    while len(out.seeds) < k:
        neg, x, stamp = heapq.heappop(queue)
        if stamp == len(out.seeds):
            mask[x] = True
            out.seeds.append(x)
            out.gains.append(-neg)
            continue
        value = gain_fn(mask, x)
        out.evaluations += 1
        heapq.heappush(queue, (-value, x, len(out.seeds)))
    out.sigma_final = view.sigma(out.seeds)
    return out


def brute_force_select(view: InfluenceView, k: int, limit: int = BRUTE_FORCE_LIMIT) -> SeedSelection:
    """Best k-subset by exhaustive sigma evaluation; lexicographically first on ties."""
    _check_k(view, k)
    count = math.comb(view.n, k)
    if count > limit:
        raise InstanceTooLarge(f"C({view.n}, {k}) = {count} subsets exceeds {limit}")
    best, best_sigma = None, -math.inf
    for subset in itertools.combinations(range(view.n), k):
        value = view.sigma(subset)
        if value > best_sigma:
            best, best_sigma = subset, value
    seeds = list(best)
    gains = [view.marginal_gain_exact(seeds[:i], x) for i, x in enumerate(seeds)]
    return SeedSelection(seeds, gains, best_sigma, evaluations=count, initial_evaluations=count)
