"""
Subcommand pipelines. Each takes a resolved RunConfig, writes its primary
output to `config.out` (stdout when unset) and returns the paths written.
"""

from collections.abc import Callable
import json
from pathlib import Path
import sys

import pandas as pd

from dpca.corpus import (
    Corpus,
    discover_bag_names,
    load_corpus,
    load_stopwords,
    save_vocabulary,
)
from dpca.errors import IncompatibleCorpusError
from dpca.evidence import SelectionConfig, select_K
from dpca.features import (
    build_feature_matrix,
    component_correlations,
    component_scores,
    export_svmlight,
    labels_path,
    plot_correlation_buckets,
)
from dpca.infer import InferConfig, classify, fit_corpus, load_queries, query_match
from dpca.model import (
    ComponentModel,
    TreeNavigator,
    init_model,
    load_model,
    node_word_average,
    parse_tree_spec,
    save_model,
)
from dpca.retrieval import RetrievalConfig, build_index, rerank, tfidf_rank
from dpca.sampler import TrainConfig, train
from dpca.utils import save_dataframe, write_jsonl
from dpca.utils.rng import QUERY_STREAM, substream

from workflows.run_config import RunConfig, UsageError


def banner(title: str):
    print("\n" + "=" * 60, file=sys.stderr)
    print(title, file=sys.stderr)
    print("=" * 60, file=sys.stderr)


def status(message: str):
    print(f"✓ {message}", file=sys.stderr)


def require(config: RunConfig, *names: str):
    missing = [f"--{name.replace('_', '-')}" for name in names if getattr(config, name) is None]
    if missing:
        raise UsageError(f"{config.command} requires {', '.join(missing)}")


def write_table(df: pd.DataFrame, config: RunConfig) -> list[Path]:
    if config.out is None:
        df.to_csv(sys.stdout, sep="\t", index=False)
        return []
    return [save_dataframe(df, config.out)]


def vocabulary_path(out: Path, bag: str) -> Path:
    return out.with_name(f"{out.name}.{bag}.vocab")


def write_text(text: str, config: RunConfig) -> list[Path]:
    if config.out is None:
        sys.stdout.write(text)
        return []
    config.out.write_text(text, encoding="utf-8")
    return [config.out]


# ============================================================
# Loading
# ============================================================


def load_training_corpus(config: RunConfig) -> Corpus:
    require(config, "corpus")
    bags = config.bags or discover_bag_names(config.corpus)
    stopwords = load_stopwords(config.stopwords) if config.stopwords else frozenset()
    corpus = load_corpus(
        config.corpus,
        bags,
        min_total=config.min_total,
        min_docs=config.min_docs,
        stopwords=stopwords,
    )
    status(f"Loaded {corpus.I} documents, bags {corpus.bag_specs}")
    return corpus


def load_model_and_corpus(config: RunConfig) -> tuple[ComponentModel, Corpus]:
    """Model plus a corpus mapped onto the model's vocabularies."""
    require(config, "model", "corpus")
    model = load_model(config.model)
    file_bags = set(discover_bag_names(config.corpus))
    unknown = file_bags - set(model.vocabularies)
    if unknown:
        raise IncompatibleCorpusError(
            f"Corpus bags {sorted(unknown)} are not in the model {sorted(model.vocabularies)}"
        )
    corpus = load_corpus(config.corpus, model.vocabularies, vocabularies=model.vocabularies)
    status(f"Loaded model K={model.K} ({model.variant.value}) and {corpus.I} documents")
    return model, corpus


def infer_config(config: RunConfig) -> InferConfig:
    return InferConfig(
        burn_in=config.infer_burn_in, cycles=config.infer_cycles, max_precision=config.max_precision
    )


def train_config(config: RunConfig) -> TrainConfig:
    return TrainConfig(
        burn_in=config.burn_in,
        recording=config.recording,
        seed=config.seed,
        workers=config.workers,
        progress_log=config.progress_log,
        show_progress=config.show_progress,
    )


# ============================================================
# Commands
# ============================================================


def run_train(config: RunConfig) -> list[Path]:
    require(config, "out")
    banner("TRAIN")
    corpus = load_training_corpus(config)
    tree_spec = parse_tree_spec(config.tree) if config.tree else None
    model = init_model(
        corpus,
        config.single_k,
        variant=config.variant,
        tree_spec=tree_spec,
        seed=config.seed,
        alpha_total=config.alpha_total,
        prior_strength=config.prior_strength,
    )
    result = train(corpus, model, train_config(config))
    path = save_model(result.model, config.out)
    status(f"Saved model to: {path}")
    outputs = [path]
    for bag, vocabulary in sorted(corpus.vocabularies.items()):
        outputs.append(save_vocabulary(vocabulary, vocabulary_path(path, bag)))
    if config.progress_log is not None:
        outputs.append(config.progress_log)
    return outputs


def run_evidence(config: RunConfig) -> list[Path]:
    banner(f"EVIDENCE: K in {config.k}")
    corpus = load_training_corpus(config)
    selection = select_K(
        corpus,
        config.k,
        SelectionConfig(
            train=train_config(config).model_copy(update={"progress_log": None}),
            variant=config.variant,
            alpha_total=config.alpha_total,
            prior_strength=config.prior_strength,
            method=config.evidence_method,
            jobs=config.workers,
        ),
    )
    table = selection.to_dataframe()
    if not config.timings:
        table = table.drop(columns=["seconds"])
    status(f"Best K = {selection.best_K}")
    return write_table(table, config)


def run_infer(config: RunConfig) -> list[Path]:
    banner("INFER")
    model, corpus = load_model_and_corpus(config)
    summaries = fit_corpus(model, corpus, infer_config(config), config.seed, config.workers)
    records = [summary.to_record() for summary in summaries]
    if config.out is None:
        for record in records:
            sys.stdout.write(json.dumps(record) + "\n")
        return []
    return [write_jsonl(records, config.out)]


def run_query(config: RunConfig) -> list[Path]:
    require(config, "queries")
    banner("QUERY")
    model, corpus = load_model_and_corpus(config)
    queries = load_queries(config.queries, model.vocabularies)
    rows = []
    for q, query in enumerate(queries):
        scored = []
        for i, doc in enumerate(corpus.documents):
            score = query_match(
                model, doc, query, substream(config.seed, QUERY_STREAM, q, i),
                n_samples=config.samples, burn_in=config.infer_burn_in,
            )
            scored.append((doc.id, score))
        scored.sort(key=lambda item: (-item[1], corpus.doc_index[item[0]]))
        rows.extend(
            {"query_id": query.id, "rank": rank, "doc_id": doc_id, "log_score": score}
            for rank, (doc_id, score) in enumerate(scored, 1)
        )
    status(f"Scored {len(queries)} queries against {corpus.I} documents")
    return write_table(pd.DataFrame(rows, columns=["query_id", "rank", "doc_id", "log_score"]), config)


def run_classify(config: RunConfig) -> list[Path]:
    banner("CLASSIFY")
    model, corpus = load_model_and_corpus(config)
    rows, correct, labelled = [], 0, 0
    for i, doc in enumerate(corpus.documents):
        prediction = classify(
            model, doc, substream(config.seed, QUERY_STREAM, i),
            class_bag=config.class_bag, n_samples=config.samples, burn_in=config.infer_burn_in,
        )
        rows.append(
            {
                "id": doc.id,
                "predicted": prediction.predicted,
                "tie": prediction.tie,
                **{f"score:{value}": score for value, score in prediction.scores.items()},
            }
        )
        if doc.label is not None:
            labelled += 1
            correct += prediction.predicted == doc.label
    if labelled:
        status(f"Accuracy {correct}/{labelled} = {correct / labelled:.4f}")
    return write_table(pd.DataFrame(rows), config)


def run_export_features(config: RunConfig) -> list[Path]:
    require(config, "out")
    banner(f"EXPORT FEATURES ({config.mode.value})")
    model, corpus = load_model_and_corpus(config)
    summaries = (
        fit_corpus(model, corpus, infer_config(config), config.seed, config.workers)
        if config.mode.value != "words"
        else []
    )
    bags = [bag for bag in corpus.bag_names if bag != config.class_bag]
    matrix = build_feature_matrix(
        corpus, model, summaries, config.mode, bags=bags,
        component_weighting=config.component_weighting,
    )
    path = export_svmlight(matrix, config.out)
    status(f"Wrote {len(matrix.rows)} rows x {matrix.width} features to: {path}")
    return [path, labels_path(path)]


def run_correlations(config: RunConfig) -> list[Path]:
    banner(f"CORRELATIONS ({config.scores.value})")
    model, corpus = load_model_and_corpus(config)
    summaries = fit_corpus(model, corpus, infer_config(config), config.seed, config.workers)
    scores = component_scores(summaries, [doc.length for doc in corpus.documents], config.scores)
    groups = TreeNavigator(model.tree).group_tags() if model.tree is not None else None
    result = component_correlations(scores, groups)
    status(f"{len(result.pairs)} component pairs")

    outputs = write_table(result.summary, config)
    if config.pairs is not None:
        outputs.append(save_dataframe(result.pairs, config.pairs))
    if config.plot is not None:
        outputs.append(plot_correlation_buckets(result, config.plot))
    return outputs


def run_topics(config: RunConfig) -> list[Path]:
    require(config, "model")
    model = load_model(config.model)
    lines = []
    for bag in model.vocabularies:
        if bag == config.class_bag and len(model.vocabularies) > 1:
            continue

        def describe(k: int, bag: str = bag) -> str:
            if model.tree is not None and model.mean_proportions is not None:
                row = node_word_average(model.tree, model.mean_proportions, model.omega[bag], k)
            else:
                row = model.omega[bag][k]
            return " ".join(token for token, _ in model.top_tokens(bag, row, config.top))

        lines.append(f"[{bag}]")
        if model.tree is not None:
            lines.append(TreeNavigator(model.tree).get_structure_summary(describe))
        else:
            lines.extend(f"component {k}: {describe(k)}" for k in range(model.K))
    return write_text("\n".join(lines) + "\n", config)


def run_rerank(config: RunConfig) -> list[Path]:
    require(config, "queries")
    banner("RERANK")
    model, corpus = load_model_and_corpus(config)
    index = build_index(corpus)
    retrieval = RetrievalConfig(
        candidates=config.candidates,
        samples=config.samples,
        burn_in=config.infer_burn_in,
        seed=config.seed,
        workers=config.workers,
    )
    rows = []
    for query in load_queries(config.queries, model.vocabularies):
        candidates = [hit.doc_id for hit in tfidf_rank(index, query, retrieval.candidates)]
        if not candidates:
            status(f"Query '{query.id}': no TF-IDF candidates")
            continue
        reranked = rerank(model, corpus, candidates, query, retrieval)
        rows.extend(
            {
                "query_id": query.id,
                "rank": rank,
                "doc_id": hit.doc_id,
                "log_score": hit.log_score,
                "tfidf_rank": hit.tfidf_rank,
            }
            for rank, hit in enumerate(reranked, 1)
        )
    columns = ["query_id", "rank", "doc_id", "log_score", "tfidf_rank"]
    return write_table(pd.DataFrame(rows, columns=columns), config)


COMMANDS: dict[str, Callable[[RunConfig], list[Path]]] = {
    "train": run_train,
    "evidence": run_evidence,
    "infer": run_infer,
    "query": run_query,
    "classify": run_classify,
    "export-features": run_export_features,
    "correlations": run_correlations,
    "topics": run_topics,
    "rerank": run_rerank,
}
