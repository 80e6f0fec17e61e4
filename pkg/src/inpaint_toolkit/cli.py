"""Command-line entry point.

Every command writes its artifacts to the given paths and prints a one-line JSON
summary to standard output; logging goes to standard error. Settings come from an
optional JSON config file (``--config``) and individual flags override it.

Exit codes: 0 success, 2 usage or configuration error, 3 data error, 4 backend,
synthesis or training failure.
"""

import argparse
import asyncio
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from .analytics import corpus_stats, qa_overlap_report, render_rouge_table, render_stats_table
from .core import RunConfig, StageConfig, document_from_text, load_dialogs, load_documents, save_dialogs, save_documents
from .core.models import Dialog, QuestionType, RubricKind
from .evaluation import (
    JudgmentStore,
    OpenAIJudge,
    ScriptedJudge,
    aggregate_majority,
    compare_systems,
    judge_corpus,
    load_human_judgments,
    tabulate,
    two_proportion_z_test,
)
from .evaluation.judgments import JudgmentKey
from .exceptions import (
    BackendError,
    ConfigError,
    CorpusError,
    EvaluationError,
    GenerationError,
    InpaintToolkitError,
    ParseError,
    RetrievalError,
)
from .prep import (
    CorpusIngestor,
    SourceFormat,
    build_training_set,
    filter_other_interesting,
    is_topic_shift_question,
    save_training_set,
)
from .retrieval import (
    HashingEncoder,
    OpenAIEncoder,
    dialogs_to_retrieval_examples,
    evaluate_retrieval,
    load_annotated_examples,
    load_embeddings,
    load_relevance,
    run_two_stage,
    summarize_runs,
)
from .synthesis import OpenAIGenerator, ScriptedGenerator, render_fills, synthesize_corpus
from .utils.json_handler import JSONHandler, read_jsonl, write_jsonl

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_BACKEND = 4


def _emit(summary: dict[str, Any]) -> None:
    sys.stdout.write(JSONHandler.serialize(summary) + "\n")
    sys.stdout.flush()


def _require_file(path: str | Path) -> Path:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"Input file does not exist: {path}")
    return path


def _write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text + "\n", encoding="utf-8")


def _write_json(path: str | Path, data: Any) -> None:
    _write_text(path, JSONHandler.serialize(data, indent=2))


def _labelled_paths(values: Sequence[str]) -> dict[str, Path]:
    """``label=path`` or bare ``path`` (labelled by file stem)."""
    labelled: dict[str, Path] = {}
    for value in values:
        label, sep, path = value.partition("=")
        if not sep:
            label, path = Path(value).stem, value
        if label in labelled:
            raise ConfigError(f"Duplicate corpus label: {label}")
        labelled[label] = _require_file(path)
    return labelled


def _load_config(args: argparse.Namespace) -> RunConfig:
    config = RunConfig.load(args.config)
    return config.model_copy(update={"backend": config.backend.from_env()})


def _backend_kind(args: argparse.Namespace, config: RunConfig) -> str:
    return getattr(args, "backend", None) or config.backend.kind


def _load_script(path: str | Path) -> list[Any]:
    script = JSONHandler.deserialize(_require_file(path).read_text(encoding="utf-8"))
    if not isinstance(script, list):
        raise ConfigError(f"Script file {path} must contain a JSON list")
    return script


# Commands


def cmd_ingest(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args).override("splitter", kind=args.splitter)
    ingestor = CorpusIngestor(args.format, config.splitter)
    dialogs = ingestor.ingest(_require_file(args.source))
    written = save_dialogs(dialogs, args.out)
    report = ingestor.report.model_dump() if ingestor.report else {}
    return {"command": "ingest", **report, "written": written, "splitter": config.splitter.kind}


def cmd_documents(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args).override("splitter", kind=args.splitter)
    path = _require_file(args.source)
    documents = []
    for line_number, record in read_jsonl(path):
        if not isinstance(record, dict) or not {"id", "text"} <= record.keys():
            raise ParseError(f"{path}:{line_number}: expected 'id' and 'text'", line_number, str(path))
        documents.append(
            document_from_text(str(record["id"]), record.get("title") or "", record["text"], config.splitter)
        )
    written = save_documents(documents, args.out)
    return {"command": "documents", "documents": written, "splitter": config.splitter.kind}


def cmd_filter(args: argparse.Namespace) -> dict[str, Any]:
    dialogs = load_dialogs(_require_file(args.dialogs))
    kept, report = filter_other_interesting(dialogs)
    save_dialogs(kept, args.out)
    if args.report:
        _write_json(args.report, report)
    return {"command": "filter", **report.model_dump()}


def cmd_stats(args: argparse.Namespace) -> dict[str, Any]:
    corpora = _labelled_paths(args.dialogs)
    stats = {label: corpus_stats(load_dialogs(path)) for label, path in corpora.items()}
    if args.report:
        _write_json(args.report, stats)
    if args.table:
        _write_text(args.table, render_stats_table(stats))
    if len(stats) == 1:
        return {"command": "stats", **next(iter(stats.values())).model_dump()}
    return {"command": "stats", "corpora": stats}


def cmd_rouge(args: argparse.Namespace) -> dict[str, Any]:
    corpora = _labelled_paths(args.dialogs)
    scores = {label: qa_overlap_report(load_dialogs(path)) for label, path in corpora.items()}
    if args.report:
        _write_json(args.report, scores)
    if args.table:
        _write_text(args.table, render_rouge_table(scores))
    if len(scores) == 1:
        return {"command": "rouge", **next(iter(scores.values())).model_dump()}
    return {"command": "rouge", "corpora": scores}


def cmd_build_train(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args).override(
        "prep",
        N=args.N,
        rng_seed=args.seed,
        title_keep_probability=args.title_keep_probability,
        question_type_policy=args.policy,
    )
    dialogs = load_dialogs(_require_file(args.dialogs))
    written = save_training_set(build_training_set(dialogs, config.prep), args.out)
    return {"command": "build-train", "examples": written, "dialogs": len(dialogs), **config.prep.model_dump()}


def cmd_synthesize(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args).override(
        "synthesis",
        N=args.N,
        question_type=args.question_type,
        include_title=False if args.no_title else None,
        max_retries_on_malformed=args.max_retries,
        fallback_to_single_sentence=True if args.fallback else None,
    )
    documents = load_documents(_require_file(args.documents))
    workers = args.workers
    if _backend_kind(args, config) == "stub":
        if not args.script:
            raise ConfigError("The stub backend needs --script")
        script = [item if isinstance(item, str) else render_fills(item) for item in _load_script(args.script)]
        backend: Any = ScriptedGenerator(script)
        # One shared script is consumed in call order.
        workers = 1
    else:
        backend = OpenAIGenerator(config.backend)

    result = asyncio.run(synthesize_corpus(documents, backend, config.synthesis, workers))
    save_dialogs(result.dialogs, args.out)
    if args.trace:
        write_jsonl(args.trace, result.traces)
    return {"command": "synthesize", **result.stats.model_dump()}


def _split_by_topic_shift(dialogs: Sequence[Dialog]) -> Callable[[JudgmentKey], str]:
    by_id = {dialog.id: dialog for dialog in dialogs}

    def split(key: JudgmentKey) -> str:
        dialog = by_id.get(key.dialog_id)
        if dialog is not None and is_topic_shift_question(dialog.turns[key.turn].question):
            return "topic shift"
        return "other"

    return split


def cmd_judge(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args)
    rubrics = tuple(RubricKind(rubric) for rubric in args.rubric) if args.rubric else config.evaluation.rubrics
    config = config.override("evaluation", rubrics=rubrics, raters=args.raters)
    dialogs = load_dialogs(_require_file(args.dialogs))
    if _backend_kind(args, config) == "stub":
        backend: Any = ScriptedJudge(_load_script(args.script)) if args.script else ScriptedJudge.first_option()
    else:
        backend = OpenAIJudge(config.backend)

    store = JudgmentStore(args.out)
    _, report = asyncio.run(
        judge_corpus(dialogs, backend, config.evaluation.rubrics, config.evaluation.raters, store, args.workers)
    )
    consensus = aggregate_majority(store.judgments())
    split = _split_by_topic_shift(dialogs) if args.split_topic_shift else None
    tables = [tabulate({args.system: consensus}, rubric, split) for rubric in config.evaluation.rubrics]
    if args.table:
        _write_text(args.table, "\n\n".join(table.render() for table in tables))
    percentages = {
        table.rubric.value: {name: row.percentages for name, row in table.rows.items()} for table in tables
    }
    return {"command": "judge", **report.model_dump(), "percentages": percentages}


def cmd_ztest(args: argparse.Namespace) -> dict[str, Any]:
    result = two_proportion_z_test(args.x1, args.n1, args.x2, args.n2)
    return {"command": "ztest", "z": result.z, "p_value": result.p_value}


def cmd_compare(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args)
    rubric = RubricKind(args.rubric)
    acceptable = args.acceptable or config.evaluation.acceptable[rubric]
    load = load_human_judgments if args.human else (lambda path: JudgmentStore(path).judgments())
    consensus_a = aggregate_majority(load(_require_file(args.a)))
    consensus_b = aggregate_majority(load(_require_file(args.b)))
    comparison = compare_systems(consensus_a, consensus_b, rubric, acceptable)
    return {"command": "compare", **comparison.model_dump()}


def cmd_retrieval_eval(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args).override("retrieval", k=args.k)
    passages = load_embeddings(_require_file(args.passages), "passage_id")
    relevance = load_relevance(_require_file(args.relevance))
    runs = [
        evaluate_retrieval(load_embeddings(_require_file(path), "query_id"), passages, relevance, config.retrieval.k)
        for path in args.queries
    ]
    if len(runs) == 1:
        return {"command": "retrieval-eval", **runs[0].model_dump()}
    mrr_at_k = summarize_runs([scores.mrr_at_k for scores in runs])
    mrr = summarize_runs([scores.mrr for scores in runs])
    logger.info(f"MRR@{runs[0].k} over {len(runs)} runs: {mrr_at_k}")
    return {
        "command": "retrieval-eval",
        "k": runs[0].k,
        "runs": [scores.model_dump() for scores in runs],
        "mrr_at_k": mrr_at_k.model_dump(),
        "mrr": mrr.model_dump(),
    }


def _with_iterations(stage: StageConfig, iterations: int | None) -> dict[str, Any] | None:
    return None if iterations is None else {**stage.model_dump(), "iterations": iterations}


def cmd_retrieval_train(args: argparse.Namespace) -> dict[str, Any]:
    config = _load_config(args)
    config = config.override(
        "retrieval",
        stage1=_with_iterations(config.retrieval.stage1, args.stage1_iterations),
        stage2=_with_iterations(config.retrieval.stage2, args.stage2_iterations),
    )
    stage1, stage2 = config.retrieval.stage1, config.retrieval.stage2
    if _backend_kind(args, config) == "stub":
        backend: Any = HashingEncoder(dim=args.dim)
    else:
        backend = OpenAIEncoder(config.backend)
    stage1_examples = dialogs_to_retrieval_examples(load_dialogs(_require_file(args.dialogs)))
    stage2_examples = load_annotated_examples(_require_file(args.annotated))
    report = asyncio.run(run_two_stage(stage1_examples, stage2_examples, backend, stage1, stage2))
    _write_json(args.out, report)
    return {
        "command": "retrieval-train",
        "stage1_examples": len(stage1_examples),
        "stage2_examples": len(stage2_examples),
        "stage1_final_loss": report.stage1.final_loss,
        "stage2_final_loss": report.stage2.final_loss,
    }


# Parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration file")
    common.add_argument(
        "--log-level", default="WARNING", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Logging level"
    )
    common.add_argument("--workers", type=int, default=1, help="Concurrent backend calls")

    parser = argparse.ArgumentParser(prog="inpaint-toolkit", description="Dialog inpainting pipeline")
    commands = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler: Any, help_text: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, parents=[common], help=help_text)
        sub.set_defaults(handler=handler)
        return sub

    splitter_choices = ["rule", "punkt"]
    backend_choices = ["stub", "openai"]

    sub = add("ingest", cmd_ingest, "Normalize a source ConvQA corpus into dialogs")
    sub.add_argument("--source", required=True)
    sub.add_argument("--format", required=True, choices=[fmt.value for fmt in SourceFormat])
    sub.add_argument("--out", required=True)
    sub.add_argument("--splitter", choices=splitter_choices)

    sub = add("documents", cmd_documents, "Split plain-text passages into documents")
    sub.add_argument("--source", required=True, help='JSONL with {"id", "title", "text"}')
    sub.add_argument("--out", required=True)
    sub.add_argument("--splitter", choices=splitter_choices)

    sub = add("filter", cmd_filter, "Remove 'other interesting' question/answer pairs")
    sub.add_argument("--dialogs", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--report")

    for name, handler, help_text in (
        ("stats", cmd_stats, "Corpus statistics"),
        ("rouge", cmd_rouge, "Question/answer ROUGE overlap"),
    ):
        sub = add(name, handler, help_text)
        sub.add_argument("--dialogs", required=True, nargs="+", help="Dialog files, optionally as label=path")
        sub.add_argument("--report", help="JSON report path")
        sub.add_argument("--table", help="Plain-text table path")

    sub = add("build-train", cmd_build_train, "Build masked training examples")
    sub.add_argument("--dialogs", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--seed", type=int)
    sub.add_argument("--N", type=int)
    sub.add_argument("--title-keep-probability", type=float)
    sub.add_argument("--policy", choices=["raw_only", "rewritten_only", "both_uniform"])

    sub = add("synthesize", cmd_synthesize, "Convert documents into dialogs")
    sub.add_argument("--documents", required=True)
    sub.add_argument("--out", required=True)
    sub.add_argument("--trace")
    sub.add_argument("--backend", choices=backend_choices)
    sub.add_argument("--script", help="Stub outputs: JSON list of completions or fill lists")
    sub.add_argument("--N", type=int)
    sub.add_argument("--question-type", choices=[QuestionType.RAW.value, QuestionType.REWRITTEN.value])
    sub.add_argument("--no-title", action="store_true")
    sub.add_argument("--max-retries", type=int)
    sub.add_argument("--fallback", action="store_true", help="Emit single-sentence turns for malformed windows")

    sub = add("judge", cmd_judge, "Judge dialog turns on quality rubrics")
    sub.add_argument("--dialogs", required=True)
    sub.add_argument("--out", required=True, help="Judgment store (JSONL, appended and resumed)")
    sub.add_argument("--backend", choices=backend_choices)
    sub.add_argument("--script", help="Stub responses: JSON list of strings")
    sub.add_argument("--rubric", action="append", choices=[kind.value for kind in RubricKind])
    sub.add_argument("--raters", type=int)
    sub.add_argument("--system", default="system", help="Row label in the tables")
    sub.add_argument("--split-topic-shift", action="store_true")
    sub.add_argument("--table")

    sub = add("ztest", cmd_ztest, "Two-proportion z-test")
    for flag in ("--x1", "--n1", "--x2", "--n2"):
        sub.add_argument(flag, type=int, required=True)

    sub = add("compare", cmd_compare, "Compare two systems' judgments on one rubric")
    sub.add_argument("--a", required=True)
    sub.add_argument("--b", required=True)
    sub.add_argument("--rubric", required=True, choices=[kind.value for kind in RubricKind])
    sub.add_argument("--acceptable")
    sub.add_argument("--human", action="store_true", help="Judgment files hold 3+ human raters per turn")

    sub = add("retrieval-eval", cmd_retrieval_eval, "MRR of precomputed embeddings")
    sub.add_argument("--queries", required=True, nargs="+", help="Query embeddings, one file per run")
    sub.add_argument("--passages", required=True)
    sub.add_argument("--relevance", required=True)
    sub.add_argument("--k", type=int)

    sub = add("retrieval-train", cmd_retrieval_train, "Two-stage dual-encoder training")
    sub.add_argument("--dialogs", required=True, help="Synthetic dialogs for the in-batch stage")
    sub.add_argument("--annotated", required=True, help="Annotated examples for the second stage")
    sub.add_argument("--out", required=True)
    sub.add_argument("--backend", choices=backend_choices)
    sub.add_argument("--dim", type=int, default=256)
    sub.add_argument("--stage1-iterations", type=int)
    sub.add_argument("--stage2-iterations", type=int)

    return parser


def _exit_code(error: InpaintToolkitError) -> int:
    if isinstance(error, ConfigError):
        return EXIT_USAGE
    if isinstance(error, CorpusError | EvaluationError):
        return EXIT_DATA
    if isinstance(error, GenerationError | BackendError | RetrievalError):
        return EXIT_BACKEND
    return 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=args.log_level, stream=sys.stderr, format="%(asctime)s %(levelname)s %(name)s: %(message)s"
    )
    try:
        summary = args.handler(args)
    except InpaintToolkitError as e:
        logger.error(f"{args.command} failed: {e}")
        sys.stderr.write(f"error: {e}\n")
        return _exit_code(e)
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_DATA
    _emit(summary)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
