"""
dpca command line.

Usage:
    dpca train --corpus c.jsonl --k 4 --seed 7 --out m.json
    dpca evidence --corpus c.jsonl --k 1,2,4 --seed 7
    dpca topics --model m.json --top 10
    dpca rerank --model m.json --corpus c.jsonl --queries q.jsonl --out ranked.tsv

Every option can also come from a YAML file given with --config; flags win.
"""

import argparse
from collections.abc import Sequence
import sys

from pydantic import ValidationError

from dpca.errors import (
    CorpusSchemaError,
    DpcaError,
    IncompatibleCorpusError,
    MissingClassBagError,
    TreeSpecError,
)
from dpca.evidence import EvidenceMethod
from dpca.features import ComponentWeighting, FeatureMode, ScoreKind
from dpca.model import Variant
from dpca.utils import RunLog

from workflows.commands import COMMANDS, banner
from workflows.run_config import UsageError, resolve_config, write_manifest

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2

USAGE_ERRORS = (
    UsageError,
    ValidationError,
    IncompatibleCorpusError,
    TreeSpecError,
    MissingClassBagError,
    CorpusSchemaError,
)

HELP = {
    "train": "Fit a flat, gamma-poisson or hierarchical model with Gibbs sampling",
    "evidence": "Estimate log evidence for each candidate K and mark the best",
    "infer": "Posterior proportions summary per document (JSON Lines)",
    "query": "Score every document against each query by expected query likelihood",
    "classify": "Predict the class bag value of each document",
    "export-features": "Write word and/or component features in SVMlight format",
    "correlations": "Pairwise component correlations with bucket summaries",
    "topics": "Print the dominant tokens of each component or tree node",
    "rerank": "TF-IDF candidate retrieval re-ranked by the component model",
}


# ============================================================
# Parser
# ============================================================


def _add_io(parser: argparse.ArgumentParser, corpus=False, model=False, queries=False):
    if corpus:
        parser.add_argument("--corpus", help="Corpus file, one JSON document per line")
    if model:
        parser.add_argument("--model", help="Model file written by 'train'")
    if queries:
        parser.add_argument("--queries", help="Query file in the corpus line format")
    parser.add_argument("--out", help="Primary output file (stdout when omitted)")


def _add_run(parser: argparse.ArgumentParser):
    parser.add_argument("--config", dest="config_path", help="YAML run configuration")
    parser.add_argument("--seed", type=int, help="Master random seed (default 0)")
    parser.add_argument("--workers", type=int, help="Worker threads (default 1)")


def _add_corpus_options(parser: argparse.ArgumentParser):
    parser.add_argument("--bags", help="Comma-separated bag names (default: all bags in the file)")
    parser.add_argument("--min-total", type=int, help="Minimum occurrences of a kept token")
    parser.add_argument("--min-docs", type=int, help="Minimum documents containing a kept token")
    parser.add_argument("--stopwords", help="Stopword file, one token per line")


def _add_model_options(parser: argparse.ArgumentParser, many_k=False):
    parser.add_argument(
        "--k",
        help="Candidate component counts, comma-separated" if many_k else "Number of components",
    )
    parser.add_argument("--variant", choices=[v.value for v in Variant])
    parser.add_argument("--tree", help="Complete tree 'B,D' (branching factor, depth)")
    parser.add_argument("--alpha-total", type=float, help="Total Dirichlet concentration")
    parser.add_argument("--prior-strength", type=float, help="Pseudo-counts per component row")
    parser.add_argument("--burn-in", type=int, help="Discarded Gibbs cycles")
    parser.add_argument("--recording", type=int, help="Recorded Gibbs cycles")
    parser.add_argument("--progress-log", help="TSV progress log, one line per cycle")
    parser.add_argument(
        "--show-progress", action="store_true", default=None, help="Show tqdm progress bars"
    )


def _add_infer_options(parser: argparse.ArgumentParser, samples=False):
    parser.add_argument("--infer-burn-in", type=int, help="Discarded cycles per document")
    parser.add_argument("--infer-cycles", type=int, help="Recorded cycles per document")
    parser.add_argument("--max-precision", type=float, help="Cap on the moment-matched precision")
    if samples:
        parser.add_argument("--samples", type=int, help="Posterior samples per score")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpca", description="Discrete PCA component models for multi-bag count data"
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    train = sub.add_parser("train", help=HELP["train"], description=HELP["train"])
    _add_io(train, corpus=True)
    _add_run(train)
    _add_corpus_options(train)
    _add_model_options(train)

    evidence = sub.add_parser("evidence", help=HELP["evidence"], description=HELP["evidence"])
    _add_io(evidence, corpus=True)
    _add_run(evidence)
    _add_corpus_options(evidence)
    _add_model_options(evidence, many_k=True)
    evidence.add_argument(
        "--timings", action="store_true", default=None, help="Add a wall-clock seconds column"
    )
    evidence.add_argument(
        "--evidence-method",
        choices=[m.value for m in EvidenceMethod],
        help="Harmonic mean per document (default) or over whole-corpus likelihoods",
    )

    infer = sub.add_parser("infer", help=HELP["infer"], description=HELP["infer"])
    _add_io(infer, corpus=True, model=True)
    _add_run(infer)
    _add_infer_options(infer)

    query = sub.add_parser("query", help=HELP["query"], description=HELP["query"])
    _add_io(query, corpus=True, model=True, queries=True)
    _add_run(query)
    _add_infer_options(query, samples=True)

    classify = sub.add_parser("classify", help=HELP["classify"], description=HELP["classify"])
    _add_io(classify, corpus=True, model=True)
    _add_run(classify)
    _add_infer_options(classify, samples=True)
    classify.add_argument("--class-bag", help="Bag holding the class value (default 'class')")

    export = sub.add_parser(
        "export-features", help=HELP["export-features"], description=HELP["export-features"]
    )
    _add_io(export, corpus=True, model=True)
    _add_run(export)
    _add_infer_options(export)
    export.add_argument("--mode", choices=[m.value for m in FeatureMode])
    export.add_argument("--component-weighting", choices=[w.value for w in ComponentWeighting])
    export.add_argument("--class-bag", help="Bag excluded from word features (default 'class')")

    correlations = sub.add_parser(
        "correlations", help=HELP["correlations"], description=HELP["correlations"]
    )
    _add_io(correlations, corpus=True, model=True)
    _add_run(correlations)
    _add_infer_options(correlations)
    correlations.add_argument("--scores", choices=[s.value for s in ScoreKind])
    correlations.add_argument("--pairs", help="Write every pair to this TSV")
    correlations.add_argument("--plot", help="Write an SVG box plot of the buckets")

    topics = sub.add_parser("topics", help=HELP["topics"], description=HELP["topics"])
    _add_io(topics, model=True)
    topics.add_argument("--config", dest="config_path", help="YAML run configuration")
    topics.add_argument("--top", type=int, help="Tokens per component (default 10)")
    topics.add_argument("--class-bag", help="Bag skipped in multi-bag models (default 'class')")

    rerank = sub.add_parser("rerank", help=HELP["rerank"], description=HELP["rerank"])
    _add_io(rerank, corpus=True, model=True, queries=True)
    _add_run(rerank)
    _add_infer_options(rerank, samples=True)
    rerank.add_argument("--candidates", type=int, help="TF-IDF candidates per query")

    return parser


# ============================================================
# Dispatch
# ============================================================


def cli_dispatch(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand; returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return EXIT_USAGE if exit_.code else EXIT_OK

    flags = vars(args)
    command = flags.pop("command")
    config_path = flags.pop("config_path", None)

    log = RunLog()
    try:
        config = resolve_config(command, flags, config_path)
        with log.capture(command):
            outputs = COMMANDS[command](config)
        manifest = write_manifest(config, outputs)
    except USAGE_ERRORS as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (DpcaError, FileNotFoundError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_RUNTIME

    if manifest is not None:
        print(f"✓ Run manifest: {manifest}", file=sys.stderr)
    if log.has_issues():
        banner("RUN LOG")
        log.print_log()
    return EXIT_OK


def main():
    sys.exit(cli_dispatch())


if __name__ == "__main__":
    main()
