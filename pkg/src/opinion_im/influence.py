"""Positive-opinion influence, set influence, spread objective and marginal gains.

With ``Inf(v, v) = 1`` and ``Inf = 0`` off the edge set, let ``A = I + W``
where ``W[u, v] = Inf(u, v)``. The two-hop term of the set-influence sum,

    g(u, v) = sum over x in D_IN(v) | {v} of Inf(u, x) * Inf(x, v),

is exactly ``(A @ A)[u, v]`` because ``A[x, v] = 0`` for every other ``x``.
The view caches that product as a sparse matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from opinion_im.graph import SocialGraph

TOL = 1e-9


class InfluenceMode(str, enum.Enum):
    OPINION = "opinion"
    BELIEF = "belief"


class GainFormula(str, enum.Enum):
    EXACT = "exact"
    EQ3 = "eq3"


class InfluenceView:
    """Read-only influence measure over a scored graph.

    Caches are rebuilt lazily whenever ``graph.version`` changes.
    """

    def __init__(self, graph: SocialGraph, mode: InfluenceMode | str = InfluenceMode.OPINION):
        self.graph = graph
        self.mode = InfluenceMode(mode)
        self._version = None
        self._refresh()

    @property
    def n(self) -> int:
        return self.graph.n

    def _refresh(self) -> None:
        g = self.graph
        if self._version == g.version:
            return
        n = g.n
        rows, cols, vals = [], [], []
        for (u, v) in g.sorted_edges():
            w = self._edge_inf(u, v)
            if w != 0.0:
                rows.append(u)
                cols.append(v)
                vals.append(w)
        w_mat = sp.csr_matrix((vals, (rows, cols)), shape=(n, n), dtype=float)
        a_mat = (sp.identity(n, format="csr", dtype=float) + w_mat).tocsr()
        two_hop = (a_mat @ a_mat).tocsr()
        two_hop.sum_duplicates()
        two_hop.sort_indices()
        self._w = w_mat
        self._g = two_hop
        self._g_csc = two_hop.tocsc()
        self._g_csc.sort_indices()
        self._version = g.version

    def _edge_inf(self, u: int, v: int) -> float:
        m = self.graph.edge_influence(u, v)
        if self.mode is InfluenceMode.OPINION:
            return self.graph.opinions[u].p_pos * m
        return m

    # -------------------------------------------------------------- measures

    def positive_influence(self, u: int, v: int) -> float:
        """Inf(u, v); 1 on the diagonal, 0 off the edge set."""
        if u == v:
            return 1.0
        if not self.graph.has_edge(u, v):
            return 0.0
        return self._edge_inf(u, v)

    inf = positive_influence

    def pair_term(self, u: int, v: int) -> float:
        """Two-hop sum g(u, v) from the cached product."""
        self._refresh()
        return float(self._g[u, v])

    def set_influence(self, seeds: Iterable[int], v: int) -> float:
        seeds = set(seeds)
        if v in seeds:
            return 1.0
        self._refresh()
        lo, hi = self._g_csc.indptr[v], self._g_csc.indptr[v + 1]
        rows = self._g_csc.indices[lo:hi]
        data = self._g_csc.data[lo:hi]
        keep = np.fromiter((r in seeds for r in rows), dtype=bool, count=len(rows))
        return float(data[keep].sum())

    def sigma(self, seeds: Iterable[int]) -> float:
        seeds = sorted(set(seeds))
        if not seeds:
            return 0.0
        self._refresh()
        mask = self._mask(seeds)
        total = float(len(seeds))
        for u in seeds:
            cols, data = self._row(u)
            total += float(data[~mask[cols]].sum())
        return total

    def marginal_gain_exact(self, seeds: Iterable[int], x: int) -> float:
        """sigma(S | {x}) - sigma(S), computed without evaluating sigma twice."""
        seeds = set(seeds)
        if x in seeds:
            raise ValueError(f"node {x} is already a seed")
        self._refresh()
        return self._gain_exact(self._mask(seeds), x)

    def marginal_gain_eq3(self, seeds: Iterable[int], x: int) -> float:
        """The closed-form gain as printed: 1 + sum over v not in S of g(x, v).

        Keeps the ``v = x`` term and ignores the influence S already had on
        ``x``, so it overestimates the true gain.
        """
        seeds = set(seeds)
        if x in seeds:
            raise ValueError(f"node {x} is already a seed")
        self._refresh()
        return self._gain_eq3(self._mask(seeds), x)

    def gain(self, seeds: Iterable[int], x: int, formula: GainFormula | str = GainFormula.EXACT) -> float:
        if GainFormula(formula) is GainFormula.EXACT:
            return self.marginal_gain_exact(seeds, x)
        return self.marginal_gain_eq3(seeds, x)

    # ------------------------------------------------------------- internals

    def _mask(self, seeds: Iterable[int]) -> np.ndarray:
        mask = np.zeros(self.n, dtype=bool)
        mask[list(seeds)] = True
        return mask

    def _row(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._g.indptr[u], self._g.indptr[u + 1]
        return self._g.indices[lo:hi], self._g.data[lo:hi]

    def _col(self, v: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._g_csc.indptr[v], self._g_csc.indptr[v + 1]
        return self._g_csc.indices[lo:hi], self._g_csc.data[lo:hi]

    def _gain_exact(self, mask: np.ndarray, x: int) -> float:
        cols, data = self._row(x)
        out_keep = ~mask[cols] & (cols != x)
        rows, cdata = self._col(x)
        in_keep = mask[rows]
        return 1.0 + float(data[out_keep].sum()) - float(cdata[in_keep].sum())

    def _gain_eq3(self, mask: np.ndarray, x: int) -> float:
        cols, data = self._row(x)
        return 1.0 + float(data[~mask[cols]].sum())

    def _gain_fn(self, formula: GainFormula | str):
        self._refresh()
        return self._gain_exact if GainFormula(formula) is GainFormula.EXACT else self._gain_eq3

    def dense_pair_terms(self) -> np.ndarray:
        """Dense copy of g with the diagonal zeroed (small graphs only)."""
        self._refresh()
        dense = self._g.toarray()
        np.fill_diagonal(dense, 0.0)
        return dense


# ------------------------------------------------------------------ audit


@dataclass
class AuditResult:
    """Outcome of the empirical monotonicity / diminishing-returns check."""

    monotone: bool = True
    submodular: bool = True
    checks: int = 0
    exhaustive: bool = False
    counterexample: dict | None = None
    violations: list[dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.monotone and self.submodular


def audit_objective(
    view: InfluenceView,
    rng: np.random.Generator | None = None,
    chains: int = 8,
    exhaustive_limit: int = 12,
    tol: float = TOL,
) -> AuditResult:
    """Check sigma(S | x) >= sigma(S) and gain(S, x) >= gain(S | y, x).

    Graphs with at most ``exhaustive_limit`` nodes are checked on every
    subset; larger ones on ``chains`` random nested chains. Violations are
    recorded, never raised.
    """
    if view.n <= exhaustive_limit:
        return _audit_exhaustive(view, tol)
    rng = rng if rng is not None else np.random.default_rng(0)
    result = AuditResult()
    n = view.n
    for _ in range(chains):
        order = rng.permutation(n)
        cut = sorted(rng.choice(n, size=min(n, 4), replace=False))
        prefixes = [order[:c] for c in cut]
        probes = rng.choice(n, size=min(n, 6), replace=False)
        for x in probes:
            prev = None
            for prefix in prefixes:
                if x in prefix:
                    break
                gain = view.marginal_gain_exact(prefix, int(x))
                result.checks += 1
                if gain < -tol:
                    result.monotone = False
                    _note(result, "monotone", prefix, int(x), gain)
                if prev is not None and gain > prev[1] + tol:
                    result.submodular = False
                    _note(result, "submodular", prefix, int(x), gain, smaller=prev[0], smaller_gain=prev[1])
                prev = (prefix, gain)
    return result


def _note(result: AuditResult, kind: str, seeds, x: int, gain: float, **extra) -> None:
    entry = {"kind": kind, "seeds": [int(s) for s in seeds], "x": x, "gain": gain}
    entry.update({k: ([int(s) for s in v] if isinstance(v, (list, np.ndarray)) else v) for k, v in extra.items()})
    if result.counterexample is None:
        result.counterexample = entry
    if len(result.violations) < 20:
        result.violations.append(entry)


def subset_sigmas(view: InfluenceView) -> np.ndarray:
    """sigma of every subset, indexed by bitmask over node indices."""
    n = view.n
    g = view.dense_pair_terms()
    masks = np.arange(1 << n)
    member = ((masks[:, None] >> np.arange(n)) & 1).astype(float)
    return member.sum(axis=1) + ((member @ g) * (1.0 - member)).sum(axis=1)


def _audit_exhaustive(view: InfluenceView, tol: float) -> AuditResult:
    n = view.n
    result = AuditResult(exhaustive=True)
    if n == 0:
        return result
    sig = subset_sigmas(view)
    masks = np.arange(1 << n)
    bits = 1 << np.arange(n)
    absent = (masks[:, None] & bits) == 0
    gains = np.where(absent, sig[masks[:, None] | bits] - sig[masks[:, None]], np.nan)
    result.checks = int(absent.sum())
    bad = absent & (gains < -tol)
    if bad.any():
        result.monotone = False
        s, x = map(int, np.argwhere(bad)[0])
        _note(result, "monotone", _members(s, n), x, float(gains[s, x]))
    for y in range(n):
        rows = masks[absent[:, y]]
        larger = gains[rows | (1 << y)]
        smaller = gains[rows]
        valid = absent[rows] & absent[rows | (1 << y)]
        viol = valid & (larger > smaller + tol)
        result.checks += int(valid.sum())
        if viol.any():
            result.submodular = False
            i, x = map(int, np.argwhere(viol)[0])
            s = int(rows[i])
            _note(result, "submodular", _members(s | (1 << y), n), x, float(larger[i, x]),
                  smaller=_members(s, n), smaller_gain=float(smaller[i, x]))
    return result


def _members(mask: int, n: int) -> list[int]:
    return [i for i in range(n) if mask >> i & 1]
