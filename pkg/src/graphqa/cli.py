"""Operator command line.

Subcommands:

    gen-data   Generate a tower/sensor dataset file.
    ask        Answer one question (or run an interactive loop).
    eval       Run a benchmark corpus against one or more models and report.
    report     Rebuild report files from saved run records.

Every command is deterministic given its inputs (config, seed, replay
transcripts); report files in particular are byte-stable across reruns. Exit
codes distinguish failure classes: 2 config, 3 gateway, 4 corpus, 5 engine.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import tempfile

from . import evaluation
from .datafiles import data_path
from .errors import (
    CorpusError,
    DatasetFormatError,
    EngineError,
    GatewayError,
    GraphQAError,
    TemplateError,
    ValidationError,
)
from .graph import GeneratorConfig, generate_msa_fixture, load_dataset_file, serialize_dataset
from .llm import Gateway, LiveBackend, ReplayBackend, Transcript
from .pipeline import PipelineConfig, load_templates

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_GATEWAY = 3
EXIT_CORPUS = 4
EXIT_ENGINE = 5


class CliError(GraphQAError):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def sanitize_model_name(model: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]", "_", model)


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_graph(path: str):
    try:
        return load_dataset_file(path)
    except OSError as exc:
        raise CliError(f"cannot read dataset {path}: {exc}", EXIT_CONFIG) from exc
    except (DatasetFormatError, ValidationError) as exc:
        raise CliError(f"dataset {path}: {exc}", EXIT_ENGINE) from exc


def _load_templates(directory: str | None):
    try:
        return load_templates(directory)
    except (OSError, TemplateError) as exc:
        raise CliError(f"templates: {exc}", EXIT_CONFIG) from exc


def _make_gateway(args: argparse.Namespace, model: str) -> Gateway:
    if args.replay:
        path = args.replay
        if os.path.isdir(path):
            path = os.path.join(path, sanitize_model_name(model) + ".jsonl")
        try:
            transcript = Transcript.load(path)
        except OSError as exc:
            raise CliError(f"cannot read transcript {path}: {exc}", EXIT_CONFIG) from exc
        except GatewayError as exc:
            raise CliError(f"transcript {path}: {exc}", EXIT_GATEWAY) from exc
        return Gateway(ReplayBackend(transcript))
    endpoint = args.endpoint or os.environ.get("GRAPHQA_ENDPOINT")
    if not endpoint:
        raise CliError("either --replay or --endpoint (or GRAPHQA_ENDPOINT) is required", EXIT_CONFIG)
    return Gateway(LiveBackend(endpoint))


def _add_common_pipeline_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--data", default=data_path("msa_dataset.jsonl"), help="dataset file")
    parser.add_argument("--templates", default=None, help="prompt template directory")
    parser.add_argument("--endpoint", default=None, help="live completion endpoint base URL")
    parser.add_argument("--replay", default=None, help="replay transcript file or directory")
    parser.add_argument("--model-task1", default="llama3.1:8b", help="model for query generation")
    parser.add_argument("--model-task2", default=None, help="model for summarization (default: task-1 model)")


def cmd_gen_data(args: argparse.Namespace) -> int:
    config = GeneratorConfig()
    if args.config:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                config = GeneratorConfig.from_dict(json.load(fh))
        except OSError as exc:
            raise CliError(f"cannot read config {args.config}: {exc}", EXIT_CONFIG) from exc
        except (json.JSONDecodeError, ValidationError) as exc:
            raise CliError(f"config {args.config}: {exc}", EXIT_CONFIG) from exc
    if args.seed is not None:
        config.seed = args.seed
    if args.tower_count is not None:
        config.tower_count = args.tower_count
    try:
        dataset = generate_msa_fixture(config)
    except ValidationError as exc:
        raise CliError(f"generator: {exc}", EXIT_CONFIG) from exc
    _atomic_write(args.out, serialize_dataset(dataset))
    print(f"wrote {args.out}: {len(dataset.nodes)} nodes, {len(dataset.relationships)} relationships")
    return EXIT_OK


def _run_one_question(question: str, graph, gateway, config, show_query: bool) -> tuple[str, bool]:
    from .pipeline import answer_question

    run = answer_question(question, graph, gateway, config)
    lines = []
    if show_query:
        lines.append(f"query: {run.extracted_query or '(none)'}")
        lines.append(f"db output: {run.db_output}")
        lines.append(f"answer: {run.answer if run.answer is not None else '(no answer)'}")
    else:
        lines.append(run.answer if run.answer is not None else f"(no answer: {run.failure})")
    return "\n".join(lines), run.failure is None


def cmd_ask(args: argparse.Namespace) -> int:
    graph = _load_graph(args.data)
    templates = _load_templates(args.templates)
    config = PipelineConfig(
        model_task1=args.model_task1, model_task2=args.model_task2, templates=templates
    )
    gateway = _make_gateway(args, args.model_task1)

    if args.question is not None:
        text, ok = _run_one_question(args.question, graph, gateway, config, args.show_query)
        print(text)
        return EXIT_OK if ok else EXIT_GATEWAY

    # Interactive read-answer-print loop; each question is independent.
    for line in sys.stdin:
        question = line.strip()
        if not question:
            continue
        text, _ = _run_one_question(question, graph, gateway, config, args.show_query)
        print(text)
        sys.stdout.flush()
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    graph = _load_graph(args.data)
    templates = _load_templates(args.templates)
    try:
        specs = evaluation.load_corpus(args.corpus)
        evaluation.validate_corpus(graph, specs)
    except CorpusError as exc:
        raise CliError(str(exc), EXIT_CORPUS) from exc

    models = [m.strip() for m in args.models.split(",") if m.strip()]
    if not models:
        raise CliError("--models must name at least one model", EXIT_CONFIG)
    os.makedirs(args.out, exist_ok=True)

    all_rows = []
    for model in models:
        gateway = _make_gateway(args, model)
        config = PipelineConfig(model_task1=model, model_task2=args.model_task2, templates=templates)
        records = evaluation.evaluate_model(
            graph, specs, gateway, config, include_rephrasings=not args.originals_only
        )
        runs_path = os.path.join(args.out, sanitize_model_name(model) + ".runs.jsonl")
        evaluation.save_run_records(runs_path, model, records)
        all_rows.extend(evaluation.metric_rows(records, {s.id: s for s in specs}))
        print(f"{model}: {len(records)} runs -> {runs_path}")

    report = evaluation.compute_metrics(all_rows)
    _atomic_write(os.path.join(args.out, "report.txt"), evaluation.render_text_report(report))
    _atomic_write(os.path.join(args.out, "report.csv"), evaluation.render_csv_report(report))
    print(f"report -> {os.path.join(args.out, 'report.txt')}")
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    run_files = sorted(
        os.path.join(args.runs, name) for name in os.listdir(args.runs) if name.endswith(".runs.jsonl")
    )
    if not run_files:
        raise CliError(f"no .runs.jsonl files in {args.runs}", EXIT_CORPUS)
    rows = []
    for path in run_files:
        try:
            _, records = evaluation.load_run_records(path)
        except (CorpusError, json.JSONDecodeError, KeyError) as exc:
            raise CliError(f"{path}: {exc}", EXIT_CORPUS) from exc
        rows.extend(evaluation.metric_rows(records))
    report = evaluation.compute_metrics(rows)
    if args.format == "table-text":
        text = evaluation.render_text_report(report)
        default_name = "report.txt"
    else:
        text = evaluation.render_csv_report(report)
        default_name = "report.csv"
    out = args.out or os.path.join(args.runs, default_name)
    _atomic_write(out, text)
    print(f"report -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphqa", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a dataset file")
    p.add_argument("--out", required=True, help="output dataset path")
    p.add_argument("--config", default=None, help="generator config JSON file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--tower-count", type=int, default=None)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("ask", help="answer a question")
    p.add_argument("question", nargs="?", default=None, help="one-shot question (omit for stdin loop)")
    _add_common_pipeline_args(p)
    p.add_argument("--show-query", action="store_true", help="print query and db output too")
    p.set_defaults(func=cmd_ask)

    p = sub.add_parser("eval", help="evaluate models over a corpus")
    p.add_argument("--corpus", default=data_path("corpus.json"), help="corpus JSON file")
    p.add_argument("--models", required=True, help="comma-separated model names")
    p.add_argument("--out", required=True, help="output directory for runs and reports")
    p.add_argument("--originals-only", action="store_true", help="skip rephrased variants")
    _add_common_pipeline_args(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", help="rebuild reports from run records")
    p.add_argument("--runs", required=True, help="directory containing .runs.jsonl files")
    p.add_argument(
        "--format", choices=("table-text", "delimited-values"), default="table-text"
    )
    p.add_argument("--out", default=None, help="output file (default: into --runs)")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except GatewayError as exc:
        print(f"gateway error: {exc}", file=sys.stderr)
        return EXIT_GATEWAY
    except CorpusError as exc:
        print(f"corpus error: {exc}", file=sys.stderr)
        return EXIT_CORPUS
    except (EngineError, DatasetFormatError) as exc:
        print(f"engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
