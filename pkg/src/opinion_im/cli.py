"""Command-line front end: ``ingest``, ``maximize``, ``report``, ``synth``.

Exit codes: 0 success, 1 usage error, 2 input parse error, 3 constraint
violation.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from opinion_im.graph import IngestError, SocialGraph, dumps_graph, ingest, load_graph, score_edges
from opinion_im.influence import GainFormula, InfluenceMode, InfluenceView
from opinion_im.maximize import celf_select, greedy_select
from opinion_im.opinion import Lexicon, LexiconParseError
from opinion_im import report as reports
from opinion_im.synth import generate

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_CONSTRAINT = 0, 1, 2, 3

log = logging.getLogger("opinion_im")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    edges: Path | None = None
    log: Path | None = None
    lexicon: Path | None = None
    graph: Path | None = None
    k: int = 10
    mode: InfluenceMode = InfluenceMode.OPINION
    gain: GainFormula = GainFormula.EXACT
    out: Path | None = None
    seed: int = 42
    n: int = 50
    algorithm: str = "celf"
    workers: int | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _path(p):
    return None if p is None else Path(p)


def _require_file(path: Path | None, flag: str) -> Path:
    if path is None:
        raise CliError(f"{flag} is required", EXIT_USAGE)
    if not path.is_file():
        raise CliError(f"{flag}: no such file {path}", EXIT_PARSE)
    return path


def load_inputs(config: RunConfig) -> SocialGraph:
    """Scored graph from an export (``--graph``) or from raw files."""
    try:
        if config.graph is not None:
            return load_graph(_require_file(config.graph, "--graph"))
        edges = _require_file(config.edges, "--edges")
        log_path = _require_file(config.log, "--log")
        lexicon = Lexicon.load(_require_file(config.lexicon, "--lexicon")) if config.lexicon else None
        return score_edges(ingest(edges, log_path, lexicon))
    except (IngestError, LexiconParseError) as exc:
        raise CliError(str(exc), EXIT_PARSE) from None
    except UnicodeDecodeError as exc:
        raise CliError(f"input is not UTF-8: {exc}", EXIT_PARSE) from None


def _write(path: Path | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def cmd_ingest(config: RunConfig) -> str:
    text = dumps_graph(load_inputs(config))
    _write(config.out, text)
    return text


def run_maximize(config: RunConfig, g: SocialGraph) -> dict:
    if config.k < 1:
        raise CliError("--k must be at least 1", EXIT_USAGE)
    if config.k > g.n:
        raise CliError(f"--k {config.k} exceeds node count {g.n}", EXIT_CONSTRAINT)
    view = InfluenceView(g, config.mode)
    start = time.perf_counter()
    if config.algorithm == "greedy":
        selection = greedy_select(view, config.k, config.gain)
    else:
        selection = celf_select(view, config.k, config.gain, workers=config.workers)
    elapsed = time.perf_counter() - start
    return reports.seed_report(
        g, selection, config.mode.value, config.gain.value, config.algorithm, wall_time=elapsed
    )


def cmd_maximize(config: RunConfig) -> dict:
    report = run_maximize(config, load_inputs(config))
    table = reports.format_table(report)
    if config.out is not None:
        _write(config.out, reports.dumps_report(report))
        _write(config.out.with_suffix(".txt"), table)
    sys.stdout.write(table)
    return report


def cmd_report(files: Sequence[Path], out: Path | None, csv_path: Path | None) -> dict:
    docs = []
    for f in files:
        try:
            docs.append(reports.load_report(_require_file(f, "report")))
        except ValueError as exc:
            raise CliError(str(exc), EXIT_PARSE) from None
    try:
        comparison = reports.compare(docs)
    except reports.IncompatibleReports as exc:
        raise CliError(str(exc), EXIT_CONSTRAINT) from None
    text = reports.format_comparison(comparison)
    if out is not None:
        _write(out, reports.dumps_report(comparison))
        csv_path = csv_path or out.with_suffix(".csv")
    if csv_path is not None:
        _write(csv_path, reports.curves_csv(docs))
    sys.stdout.write(text)
    return comparison


def cmd_synth(config: RunConfig) -> dict[str, Path]:
    if config.n < 1:
        raise CliError("--n must be at least 1", EXIT_USAGE)
    if config.out is None:
        raise CliError("--out DIR is required", EXIT_USAGE)
    written = generate(config.n, config.seed).write(config.out)
    for name, path in written.items():
        log.info("wrote %s: %s", name, path)
    return written


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="opinion-im", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def inputs(p):
        p.add_argument("--edges", help="follow edges CSV (header follower,followee)")
        p.add_argument("--log", help="propagation log, JSON Lines")
        p.add_argument("--lexicon", help="sentiment lexicon TSV")
        p.add_argument("--graph", help="graph export JSON (instead of raw inputs)")

    p = sub.add_parser("ingest", help="score a dataset and write the graph export")
    inputs(p)
    p.add_argument("--out", help="output JSON (default stdout)")

    p = sub.add_parser("maximize", help="select k seeds with CELF")
    inputs(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=[m.value for m in InfluenceMode], default="opinion")
    p.add_argument("--gain", choices=[f.value for f in GainFormula], default="exact")
    p.add_argument("--algorithm", choices=["celf", "greedy"], default="celf")
    p.add_argument("--workers", type=int, default=None, help="threads for the first CELF pass")
    p.add_argument("--out", help="report JSON; a .txt table is written next to it")

    p = sub.add_parser("report", help="compare seed reports side by side")
    p.add_argument("reports", nargs="+")
    p.add_argument("--out", help="comparison JSON; curves CSV goes next to it")
    p.add_argument("--csv", help="cumulative criterion curves CSV")

    p = sub.add_parser("synth", help="generate a synthetic fixture directory")
    p.add_argument("--n", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--out", required=True, help="output directory")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        if args.command == "report":
            cmd_report([Path(f) for f in args.reports], _path(args.out), _path(args.csv))
            return EXIT_OK
        config = RunConfig(out=_path(args.out))
        if args.command in ("ingest", "maximize"):
            config.edges, config.log = _path(args.edges), _path(args.log)
            config.lexicon, config.graph = _path(args.lexicon), _path(args.graph)
            if config.graph is None and (config.edges is None or config.log is None):
                raise CliError("give --graph, or both --edges and --log", EXIT_USAGE)
        if args.command == "ingest":
            cmd_ingest(config)
        elif args.command == "maximize":
            config.k, config.mode, config.gain = args.k, InfluenceMode(args.mode), GainFormula(args.gain)
            config.algorithm, config.workers = args.algorithm, args.workers
            cmd_maximize(config)
        else:
            config.n, config.seed = args.n, args.seed
            cmd_synth(config)
    except CliError as exc:
        print(f"opinion-im: error: {exc}", file=sys.stderr)
        return exc.code
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
