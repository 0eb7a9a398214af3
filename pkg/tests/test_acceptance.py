"""Exit criteria for the package, one test per criterion.

Each test prints a single ``[PASS]``/``[FAIL]`` line (visible even under
pytest's output capture). Run directly with ``python tests/test_acceptance.py``
or ``pytest tests/test_acceptance.py``.
"""

from __future__ import annotations

import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from opinion_im.belief import BBA, Frame, TotalConflictError, combine_dempster
from opinion_im.cli import EXIT_OK, EXIT_PARSE, main
from opinion_im.graph import dumps_graph, ingest, load_graph, loads_graph, score_edges
from opinion_im.influence import InfluenceView, audit_objective
from opinion_im.maximize import brute_force_select, celf_select, greedy_select
from opinion_im.synth import generate

from helpers import (
    naive_brute_force,
    naive_set_influence,
    naive_sigma,
    oracle_dempster,
    random_label_bba,
    random_view,
    reference_graph,
)

FIXTURES = Path(__file__).parent / "fixtures"
WEIGHT_SCALES = (0.1, 0.2, 0.3, 0.5, 1.0)


@pytest.fixture
def verdict(capsys):
    def emit(criterion: str, ok: bool, detail: str, extra: str | None = None) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
            if extra:
                print(f"    {extra}")
        assert ok, f"{criterion}: {detail}"

    return emit


def test_ac1_dempster_oracle(verdict):
    rng = np.random.default_rng(2024)
    start = time.perf_counter()
    compared, worst, conflicts = 0, 0.0, 0
    while compared < 1000:
        elements = ("I", "P") if compared % 2 == 0 else ("a", "b", "c")
        frame = Frame(elements)
        ma, mb = random_label_bba(rng, elements), random_label_bba(rng, elements)
        a = BBA(frame, {frame.mask(s): v for s, v in ma.items()})
        b = BBA(frame, {frame.mask(s): v for s, v in mb.items()})
        try:
            got = combine_dempster(a, b).as_labels()
        except TotalConflictError:
            conflicts += 1
            continue
        want = oracle_dempster(ma, mb, elements)
        for key in set(got) | set(want):
            worst = max(worst, abs(got.get(key, 0.0) - want.get(key, 0.0)))
        compared += 1
    elapsed = time.perf_counter() - start
    verdict(
        "AC1 Dempster vs power-set oracle",
        worst <= 1e-9 and elapsed < 5.0,
        f"{compared} pairs, max err {worst:.2e}, {conflicts} total-conflict skips, {elapsed:.2f}s",
    )


def test_ac2_sigma_oracle(verdict):
    rng = np.random.default_rng(7)
    start = time.perf_counter()
    worst, evaluations = 0.0, 0
    for i in range(200):
        n = int(rng.integers(1, 16))
        view = random_view(rng, n, density=float(rng.uniform(0.05, 0.5)), wmax=float(rng.choice(WEIGHT_SCALES)))
        mode = view.mode if i % 2 else "belief"
        view = InfluenceView(view.graph, mode)
        for _ in range(4):
            seeds = set(rng.choice(n, size=int(rng.integers(0, n + 1)), replace=False).tolist())
            worst = max(worst, abs(view.sigma(seeds) - naive_sigma(view.graph, mode, seeds)))
            for v in range(n):
                worst = max(worst, abs(view.set_influence(seeds, v) - naive_set_influence(view.graph, mode, seeds, v)))
            evaluations += 1
    elapsed = time.perf_counter() - start
    verdict(
        "AC2 sigma/set_influence vs naive set-influence sum",
        worst <= 1e-9 and elapsed < 30.0,
        f"200 graphs, {evaluations} seed sets, max err {worst:.2e}, {elapsed:.2f}s",
    )


def test_ac3_exact_gain_identity(verdict):
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(2, 16))
        view = random_view(rng, n, density=float(rng.uniform(0.05, 0.5)), wmax=float(rng.choice(WEIGHT_SCALES)))
        seeds = set(rng.choice(n, size=int(rng.integers(0, n)), replace=False).tolist())
        x = int(rng.choice([u for u in range(n) if u not in seeds]))
        diff = view.sigma(seeds | {x}) - view.sigma(seeds)
        worst = max(worst, abs(view.marginal_gain_exact(seeds, x) - diff))
    verdict("AC3 exact gain = sigma difference", worst <= 1e-9, f"1000 triples, max err {worst:.2e}")


def test_ac4_celf_equals_greedy(verdict):
    rng = np.random.default_rng(4)
    passing = failing = mismatches = strict = lazier_violations = 0
    failing_sigma_equal = 0
    attempts = 0
    while passing < 100 and attempts < 2000:
        attempts += 1
        n = int(rng.integers(5, 31))
        k = int(rng.integers(1, 6))
        view = random_view(rng, n, density=float(rng.uniform(0.05, 0.3)), wmax=float(rng.choice(WEIGHT_SCALES)))
        audit = audit_objective(view, rng)
        greedy, celf = greedy_select(view, k), celf_select(view, k)
        if celf.lazy_evaluations > greedy.lazy_evaluations:
            lazier_violations += 1
        strict += celf.lazy_evaluations < greedy.lazy_evaluations
        if audit.passed:
            passing += 1
            same = celf.seeds == greedy.seeds and all(abs(a - b) <= 1e-9 for a, b in zip(celf.gains, greedy.gains))
            mismatches += not same
        else:
            failing += 1
            failing_sigma_equal += abs(celf.sigma_final - greedy.sigma_final) <= 1e-9
    ok = passing >= 100 and mismatches == 0 and lazier_violations == 0 and strict >= 1
    verdict(
        "AC4 CELF == greedy",
        ok,
        f"{passing} audit-passing instances ({mismatches} mismatches), {failing} audit-failing "
        f"(sigma equal on {failing_sigma_equal}), CELF strictly lazier on {strict}/{attempts}",
    )


def test_ac5_approximation_bound(verdict):
    rng = np.random.default_rng(5)
    passing = failing = below = 0
    worst_ratio = math.inf
    dump = None
    attempts = 0
    while passing < 50 and attempts < 1000:
        attempts += 1
        n = int(rng.integers(3, 13))
        k = int(rng.integers(1, 4))
        view = random_view(rng, n, density=float(rng.uniform(0.1, 0.4)), wmax=float(rng.choice(WEIGHT_SCALES)))
        audit = audit_objective(view, rng)
        if not audit.passed:
            failing += 1
            if dump is None:
                dump = {
                    "n": n,
                    "edges": {f"{u}->{v}": view.positive_influence(u, v) for (u, v) in view.graph.sorted_edges()},
                    "counterexample": audit.counterexample,
                }
            continue
        passing += 1
        best = brute_force_select(view, k)
        greedy = greedy_select(view, k)
        ratio = greedy.sigma_final / best.sigma_final
        worst_ratio = min(worst_ratio, ratio)
        below += greedy.sigma_final < (1 - 1 / math.e) * best.sigma_final - 1e-12
    ok = passing >= 50 and below == 0
    verdict(
        "AC5 greedy >= (1-1/e) optimum",
        ok,
        f"{passing} audit-passing instances, worst greedy/opt ratio {worst_ratio:.4f}, "
        f"{failing} audit failures",
        None if dump is None else "first audit counterexample: " + json.dumps(dump, default=float),
    )


def test_ac6_reference_graph(verdict):
    g = reference_graph()
    a, b, c = 0, 1, 2
    oracle = {
        "sigma_a": naive_sigma(g, "opinion", {a}),
        "sigma_ab": naive_sigma(g, "opinion", {a, b}),
        "sigma_ac": naive_sigma(g, "opinion", {a, c}),
    }
    oracle_best = naive_brute_force(g, "opinion", 2)
    view = InfluenceView(g)
    sel = greedy_select(view, 2)
    checks = [
        abs(oracle["sigma_a"] - 2.8) <= 1e-12,
        abs(oracle["sigma_ab"] - 3.6) <= 1e-12,
        oracle_best[0] == [a, b],
        abs(view.sigma({a}) - 2.8) <= 1e-12,
        sel.seeds == [a, b],
        abs(sel.gains[0] - 2.8) <= 1e-12 and abs(sel.gains[1] - 0.8) <= 1e-12,
        abs(sel.sigma_final - 3.6) <= 1e-12,
        celf_select(view, 2).seeds == [a, b],
    ]
    verdict(
        "AC6 graph R golden",
        all(checks),
        f"sigma({{a}})={view.sigma({a}):.12g} seeds={sel.seeds} gains={[round(x, 12) for x in sel.gains]} "
        f"sigma={sel.sigma_final:.12g}",
    )


def _pipeline(data):
    return score_edges(ingest(data.edges_csv().splitlines(), data.log_jsonl().splitlines(), data.lexicon))


def test_ac7_opinion_beats_belief_on_positive_opinion(verdict):
    g = _pipeline(generate(50, seed=42))
    means = {}
    for mode in ("opinion", "belief"):
        sel = celf_select(InfluenceView(g, mode), 10)
        means[mode] = sum(g.opinions[u].p_pos for u in sel.seeds) / len(sel.seeds)
    verdict(
        "AC7 mean Pr(Pos) opinion > belief (synth 42, n=50, k=10)",
        means["opinion"] > means["belief"],
        f"opinion {means['opinion']:.4f} vs belief {means['belief']:.4f}",
    )


def test_ac8_scale(verdict):
    runs = []
    elapsed = []
    for _ in range(2):
        start = time.perf_counter()
        g = _pipeline(generate(1000, seed=42))
        sel = celf_select(InfluenceView(g), 50)
        elapsed.append(time.perf_counter() - start)
        runs.append((sel.seeds, sel.gains, sel.sigma_final, sel.evaluations))
    out_degree = len(g.edges) / g.n
    ok = max(elapsed) < 60.0 and runs[0] == runs[1] and out_degree <= 10
    verdict(
        "AC8 n=1000, k=50 CELF",
        ok,
        f"avg out-degree {out_degree:.2f}, runs {elapsed[0]:.2f}s / {elapsed[1]:.2f}s, "
        f"identical={runs[0] == runs[1]}, evaluations={runs[0][3]}",
    )


def test_ac9_round_trips_and_rejections(verdict, tmp_path):
    g = _pipeline(generate(50, seed=42))
    text = dumps_graph(g)
    path = tmp_path / "g.json"
    path.write_text(text, encoding="utf-8")
    again = dumps_graph(load_graph(path))
    stable = again == text and dumps_graph(loads_graph(again)) == text

    edges = str(FIXTURES / "edges.csv")
    good_log = tmp_path / "ok.jsonl"
    good_log.write_text("", encoding="utf-8")
    codes = {
        "log syntax": main(["ingest", "--edges", edges, "--log", str(FIXTURES / "malformed_log.jsonl")]),
        "log types": main(["ingest", "--edges", edges, "--log", str(FIXTURES / "malformed_log_types.jsonl")]),
        "lexicon arity": main(
            ["ingest", "--edges", edges, "--log", str(good_log), "--lexicon", str(FIXTURES / "malformed_lexicon.tsv")]
        ),
        "lexicon range": main(
            ["ingest", "--edges", edges, "--log", str(good_log), "--lexicon", str(FIXTURES / "negative_score_lexicon.tsv")]
        ),
    }
    codes["valid"] = main(["ingest", "--edges", edges, "--log", str(good_log), "--out", str(tmp_path / "v.json")])
    ok = stable and codes.pop("valid") == EXIT_OK and all(c == EXIT_PARSE for c in codes.values())
    verdict("AC9 export round-trip and parser rejections", ok, f"bytes stable={stable}, exit codes={codes}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
