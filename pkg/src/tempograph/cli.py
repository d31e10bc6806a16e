"""tempograph command line.

Exit status: 0 on success, 1 on usage errors, 2 on data errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import evalkit, graph, relmodel, synthcorpus
from .relmodel import TempographError
from .simmeasures import Denominator, parse_measures
from .timealg import TimeSource, WindowMode

log = logging.getLogger("tempograph")

DEFAULT_WINDOWS = "0,1,2,3,4,5,6,7,30,3650"
SOURCE_CHOICES = ("timex", "docdate", "both")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _nonneg_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _int_list(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals or any(v < 0 for v in vals):
        raise argparse.ArgumentTypeError("need one or more non-negative integers")
    return vals


def _recall_cap(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not 0 < v <= 1:
        raise argparse.ArgumentTypeError("recall cap must lie in (0, 1]")
    return v


def _csv_choice(choices):
    def parse(text):
        vals = [t.strip() for t in text.split(",") if t.strip()]
        bad = [v for v in vals if v not in choices]
        if not vals or bad:
            raise argparse.ArgumentTypeError(f"choose from {', '.join(choices)}")
        return vals
    return parse


def _measures(text):
    try:
        return parse_measures(text)
    except TempographError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _shared_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--time-source", choices=SOURCE_CHOICES, default="both",
                   help="time expressions only, document date only, or timex with doc-date back-off")
    p.add_argument("--window", type=_nonneg_int, default=4, help="days added to each side of every interval")
    p.add_argument("--window-mode", choices=[m.value for m in WindowMode], default="both",
                   help="extend both compared intervals (default) or only one")
    p.add_argument("--measures", type=_measures, default=None,
                   help="comma-separated measure ids, 'all' (29 defaults, the default) or 'registry' (all 30)")
    p.add_argument("--min-count", type=_nonneg_int, default=0, help="drop predicates seen fewer times")
    p.add_argument("--recall-cap", type=_recall_cap, default=0.75)
    p.add_argument("--temporal-denominator", choices=[d.value for d in Denominator], default="unfiltered")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: $TEMPOGRAPH_THREADS or all cores)")
    p.add_argument("--type-pair", default=None, help="type1#type2 to keep, e.g. organization#organization")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--strict", action="store_true", help="fail on malformed corpus lines")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_flags()
    parser = _Parser(prog="tempograph", description="Temporally filtered entailment graphs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen-corpus", parents=[shared], help="generate a synthetic league corpus")
    g.add_argument("--config", help="JSON file with league settings")
    g.add_argument("--teams", type=int)
    g.add_argument("--matchdays", type=int)
    g.add_argument("--timex-probability", type=float)
    g.add_argument("--out", required=True, help="corpus file (JSON lines)")
    g.add_argument("--truth", help="ground truth JSON (matches and gold pairs)")
    g.add_argument("--dataset", help="gold pairs TSV")
    g.add_argument("--clusters", help="paraphrase cluster TSV for the lexicon")

    b = sub.add_parser("build", parents=[shared], help="build an entailment graph file")
    b.add_argument("corpus")
    b.add_argument("--out", required=True)

    e = sub.add_parser("eval", parents=[shared], help="score a dataset against a graph file")
    e.add_argument("--graph", required=True)
    e.add_argument("--dataset", required=True)
    e.add_argument("--subsets", type=_csv_choice(tuple(evalkit.SUBSETS)), default=list(evalkit.SUBSETS))
    e.add_argument("--out", help="results CSV (default: stdout)")

    s = sub.add_parser("sweep", parents=[shared], help="AUC over a source x window x measure grid")
    s.add_argument("corpus")
    s.add_argument("--dataset", required=True)
    s.add_argument("--sources", type=_csv_choice(SOURCE_CHOICES), default=list(SOURCE_CHOICES))
    s.add_argument("--windows", type=_int_list, default=_int_list(DEFAULT_WINDOWS))
    s.add_argument("--subsets", type=_csv_choice(tuple(evalkit.SUBSETS)), default=list(evalkit.SUBSETS))
    s.add_argument("--out", help="results CSV (default: stdout)")

    d = sub.add_parser("gen-dataset", parents=[shared], help="expand paraphrase clusters into labelled pairs")
    d.add_argument("--clusters", required=True)
    d.add_argument("--out", required=True)

    st = sub.add_parser("stats", parents=[shared], help="print corpus statistics")
    st.add_argument("corpus")
    return parser


def _emit(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load(args):
    c = relmodel.load_corpus(args.corpus, args.type_pair, strict=args.strict)
    for w in c.warnings[:20]:
        print(f"warning: {w}", file=sys.stderr)
    return c


def _measures_arg(args):
    return parse_measures("all") if args.measures is None else args.measures


def cmd_gen_corpus(args):
    cfg = synthcorpus.LeagueConfig.load(args.config) if args.config else synthcorpus.LeagueConfig()
    if args.seed is not None:
        cfg.rng_seed = args.seed
    if args.teams is not None:
        cfg.num_teams = args.teams
    if args.matchdays is not None:
        cfg.num_matchdays = args.matchdays
    if args.timex_probability is not None:
        cfg.timex_probability = args.timex_probability
    corpus, truth = synthcorpus.generate(cfg)
    relmodel.write_corpus(corpus.instances, args.out)
    if args.truth:
        Path(args.truth).write_text(json.dumps(truth.to_dict(), indent=1) + "\n", encoding="utf-8")
    if args.dataset:
        evalkit.write_pairs(truth.pairs, args.dataset)
    if args.clusters:
        with open(args.clusters, "w", encoding="utf-8") as fh:
            for cls in evalkit.CLASSES:
                for pred in cfg.predicate_lexicon[cls]:
                    fh.write(f"{cls}\t{pred}\tnon-specific\n")
    log.info("wrote %d relations for %d matches", len(corpus), len(truth.matches))


def cmd_build(args):
    corpus = _load(args)
    tp = tuple(args.type_pair.split("#")) if args.type_pair else None
    g = graph.build_graph(corpus, TimeSource.parse(args.time_source), args.window, _measures_arg(args),
                          WindowMode(args.window_mode), Denominator(args.temporal_denominator),
                          args.min_count, tp, args.threads)
    graph.write_graph(g, args.out)
    log.info("graph: %d nodes, %d edges", len(g.nodes), len(g.edges))


def cmd_eval(args):
    g = graph.read_graph(args.graph)
    pairs = evalkit.load_pairs(args.dataset)
    if args.measures is None:
        measures = list(g.measures)
    else:
        measures = [m.id for m in args.measures]
        missing = [m for m in measures if m not in g.measures]
        if missing:
            raise TempographError(f"graph has no scores for {', '.join(missing)}")
    rows = evalkit.evaluate_graph(g, pairs, measures, args.subsets, args.recall_cap)
    _emit(evalkit.results_csv(rows), args.out)


def cmd_sweep(args):
    corpus = _load(args)
    if args.type_pair is None and len(corpus.type_pairs) > 1:
        raise TempographError("corpus holds several type pairs; pass --type-pair")
    pairs = evalkit.load_pairs(args.dataset)
    rows = evalkit.run_experiment(
        corpus, pairs, [TimeSource.parse(s) for s in args.sources], args.windows, _measures_arg(args),
        args.subsets, args.recall_cap, WindowMode(args.window_mode), Denominator(args.temporal_denominator),
        args.threads)
    _emit(evalkit.results_csv(rows), args.out)


def cmd_gen_dataset(args):
    pairs = evalkit.generate_pairs(evalkit.load_clusters(args.clusters))
    evalkit.write_pairs(pairs, args.out)
    log.info("wrote %d pairs", len(pairs))


def cmd_stats(args):
    stats = relmodel.corpus_stats(_load(args))
    for key, val in stats.as_dict().items():
        print(f"{key}\t{val:.4f}" if isinstance(val, float) else f"{key}\t{val}")


COMMANDS = {
    "gen-corpus": cmd_gen_corpus,
    "build": cmd_build,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "gen-dataset": cmd_gen_dataset,
    "stats": cmd_stats,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return 0 if exc.code in (0, None) else 1
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except TempographError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
