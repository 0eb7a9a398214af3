"""Random instances and naive oracles shared by the test modules.

The oracles here deliberately avoid the package's cached matrices and
bitset encodings so they can check those paths independently.
"""

from __future__ import annotations

import itertools

import numpy as np

from opinion_im.graph import build_graph
from opinion_im.influence import InfluenceMode, InfluenceView
from opinion_im.opinion import OpinionDistribution


def reference_graph():
    """Graph R: a->b 0.5, b->c 0.4, a->c 0.3, everyone fully positive."""
    return build_graph(["a", "b", "c"], {("a", "b"): 0.5, ("b", "c"): 0.4, ("a", "c"): 0.3})


def random_graph(rng: np.random.Generator, n: int, density: float = 0.25, wmax: float = 1.0, opinions=True):
    labels = [f"n{i}" for i in range(n)]
    influences = {}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                influences[(labels[u], labels[v])] = float(rng.uniform(0, wmax))
    ops = {}
    for label in labels:
        if opinions:
            p = rng.dirichlet([1.0, 1.0, 1.0])
            ops[label] = OpinionDistribution(float(p[0]), float(p[1]), float(1.0 - p[0] - p[1]))
        else:
            ops[label] = 1.0
    return build_graph(labels, influences, ops)


def random_view(rng, n, density=0.25, wmax=1.0, mode=InfluenceMode.OPINION, opinions=True):
    return InfluenceView(random_graph(rng, n, density, wmax, opinions), mode)


# ------------------------------------------------------------ naive Eq. 2


def naive_inf(g, mode, u, x):
    if u == x:
        return 1.0
    edge = g.edges.get((u, x))
    if edge is None:
        return 0.0
    if InfluenceMode(mode) is InfluenceMode.OPINION:
        return g.opinions[u].p_pos * edge.influence
    return edge.influence


def naive_set_influence(g, mode, seeds, v):
    seeds = set(seeds)
    if v in seeds:
        return 1.0
    total = 0.0
    for u in seeds:
        for x in list(g.in_neighbors[v]) + [v]:
            total += naive_inf(g, mode, u, x) * naive_inf(g, mode, x, v)
    return total


def naive_sigma(g, mode, seeds):
    return sum(naive_set_influence(g, mode, seeds, v) for v in range(g.n))


def naive_brute_force(g, mode, k):
    best, best_sigma = None, -float("inf")
    for subset in itertools.combinations(range(g.n), k):
        s = naive_sigma(g, mode, subset)
        if s > best_sigma:
            best, best_sigma = subset, s
    return list(best), best_sigma


# ------------------------------------------------------ power-set Dempster


def powerset(elements):
    items = list(elements)
    return [frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]


def oracle_dempster(m1: dict, m2: dict, elements) -> dict:
    """Dempster's rule over every pair of subsets, keyed by label frozensets."""
    subsets = powerset(elements)
    joint = {s: 0.0 for s in subsets}
    for a in subsets:
        for b in subsets:
            joint[a & b] += m1.get(a, 0.0) * m2.get(b, 0.0)
    k = joint.pop(frozenset())
    return {s: v / (1.0 - k) for s, v in joint.items() if v / (1.0 - k) >= 1e-12}


def random_label_bba(rng: np.random.Generator, elements) -> dict:
    subsets = [s for s in powerset(elements) if s]
    count = int(rng.integers(1, len(subsets) + 1))
    chosen = rng.choice(len(subsets), size=count, replace=False)
    weights = rng.dirichlet(np.ones(count))
    return {subsets[i]: float(w) for i, w in zip(chosen, weights)}
