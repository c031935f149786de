"""Two-stage question answering over the graph.

Stage 1 prompts a model to translate the user's question into a Cypher query
(the prompt carries the schema description and one example relationship);
the query is executed locally and its serialized output is classified into
one of four outcome cases. Stage 2 prompts a model to summarize the database
output (or the literal failure sentinel ``nan``) back into natural language.
Stage 2 always runs, even after a failed query, so the summarizer's handling
of empty and failed outputs can be graded. A run never raises for gateway or
query failures; every stage artifact is recorded on the run object.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Sequence

from .cypher import canonicalize_query, execute, parse_query, serialize_records
from .datafiles import data_path
from .errors import EngineError, GatewayError, TemplateError
from .graph.store import PropertyGraph, schema_description
from .llm import CompletionRequest, CypherCandidate, Gateway, extract_cypher
from .matching import all_values_occur

NAN_SENTINEL = "nan"
EMPTY_OUTPUT = "[]"

# The worked example shown in every stage-1 prompt (a sensor and the tower it
# is mounted on). Referencing a concrete tower number is a known source of
# model confusion and is part of what the evaluation measures.
DEFAULT_EXAMPLE_RELATIONSHIP = "(t:Tower {Tower: 8})-[:HAS_SENSOR]->(s:Sensor)"

_REQUIRED_PLACEHOLDERS = {
    "task1": ("question", "schema", "example"),
    "task2": ("question", "db_output"),
}


class OutcomeCase(enum.Enum):
    """Four-way classification of what the database returned."""

    CONTENT = "content"
    EMPTY_LIST = "empty-list"
    NAN = "nan"
    WRONG_CONTENT = "wrong-content"


@dataclass
class PromptTemplate:
    template_id: str  # 'task1' | 'task2'
    body: str
    version: str = "1"

    def __post_init__(self) -> None:
        if self.template_id not in _REQUIRED_PLACEHOLDERS:
            raise TemplateError(f"unknown template id {self.template_id!r}")
        for name in _REQUIRED_PLACEHOLDERS[self.template_id]:
            if f"{{{name}}}" not in self.body:
                raise TemplateError(f"template {self.template_id!r} missing placeholder {{{name}}}")

    def render(self, **values: str) -> str:
        """Substitute named placeholders; unknown or leftover markers fail.

        Substitution is textual (not str.format) so literal braces in the
        template body, e.g. Cypher property maps, pass through untouched.
        """
        required = _REQUIRED_PLACEHOLDERS[self.template_id]
        unknown = set(values) - set(required)
        if unknown:
            raise TemplateError(f"unknown placeholder value(s): {sorted(unknown)}")
        missing = set(required) - set(values)
        if missing:
            raise TemplateError(f"unbound placeholder(s): {sorted(missing)}")
        text = self.body
        for name, value in values.items():
            text = text.replace(f"{{{name}}}", value)
        for name in required:
            if f"{{{name}}}" in text:
                raise TemplateError(f"placeholder {{{name}}} still present after rendering")
        return text


def load_template_file(path: str, template_id: str) -> PromptTemplate:
    """Read a template; leading ``#`` lines are metadata (version), not prompt."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = fh.read()
    version = "1"
    lines = raw.splitlines()
    body_start = 0
    for line in lines:
        if not line.startswith("#"):
            break
        if "version=" in line:
            version = line.split("version=", 1)[1].strip()
        body_start += 1
    body = "\n".join(lines[body_start:]).strip("\n")
    return PromptTemplate(template_id=template_id, body=body, version=version)


def default_template_dir() -> str:
    return data_path("templates")


def load_templates(directory: str | None = None) -> dict[str, PromptTemplate]:
    base = directory or default_template_dir()
    return {
        "task1": load_template_file(f"{base}/task1.txt", "task1"),
        "task2": load_template_file(f"{base}/task2.txt", "task2"),
    }


@dataclass
class PipelineConfig:
    model_task1: str
    templates: dict[str, PromptTemplate]
    model_task2: str | None = None  # defaults to the stage-1 model
    example_relationship: str = DEFAULT_EXAMPLE_RELATIONSHIP
    temperature: float = 0.0
    max_tokens: int | None = None

    @property
    def task2_model(self) -> str:
        return self.model_task2 or self.model_task1


def build_task1_prompt(
    question: str,
    graph: PropertyGraph,
    template: PromptTemplate,
    example: str = DEFAULT_EXAMPLE_RELATIONSHIP,
) -> str:
    """Deterministic stage-1 prompt: question + schema + one example."""
    return template.render(question=question, schema=schema_description(graph), example=example)


def build_task2_prompt(question: str, db_output: str, template: PromptTemplate) -> str:
    """Deterministic stage-2 prompt embedding the database output verbatim."""
    return template.render(question=question, db_output=db_output)


def classify_db_outcome(db_output: str | None, expected_values: Sequence[str] | None) -> OutcomeCase:
    """Classify a stage-1 result; total over all inputs.

    ``None`` (or the literal sentinel) marks a failed query: a lex, parse,
    semantic or runtime error, or a failed extraction. An empty expected-value
    list (trick questions, or ad-hoc questions with no ground truth) makes any
    successful non-empty output count as CONTENT vacuously; for trick
    questions EMPTY_LIST is the desired outcome and is checked first.
    """
    if db_output is None or db_output == NAN_SENTINEL:
        return OutcomeCase.NAN
    if db_output == EMPTY_OUTPUT:
        return OutcomeCase.EMPTY_LIST
    if not expected_values or all_values_occur(list(expected_values), db_output):
        return OutcomeCase.CONTENT
    return OutcomeCase.WRONG_CONTENT


@dataclass
class PipelineRun:
    """Every artifact produced while answering one question."""

    question: str
    model_task1: str
    model_task2: str
    task1_prompt: str
    task1_response: str | None
    extracted_query: str | None
    extraction_method: str | None
    engine_error: str | None
    db_output: str  # serialized records, "[]", or the "nan" sentinel
    outcome: OutcomeCase
    task2_prompt: str
    answer: str | None
    failure: str | None = None  # "task1: ..." / "task2: ..." gateway marker
    durations: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        data = self.__dict__.copy()
        data["outcome"] = self.outcome.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "PipelineRun":
        payload = dict(data)
        payload["outcome"] = OutcomeCase(payload["outcome"])
        return cls(**payload)


def canonical_em_equal(predicted: str, ground_truth: str) -> bool:
    return canonicalize_query(predicted) == canonicalize_query(ground_truth)


def answer_question(
    question: str,
    graph: PropertyGraph,
    gateway: Gateway,
    config: PipelineConfig,
    expected_values: Sequence[str] | None = None,
) -> PipelineRun:
    """Run the full two-stage workflow for one question.

    Exactly two completion calls are attempted per question and the graph is
    never written to. Gateway failures are recorded as stage failure markers,
    never raised.
    """
    task1_template = config.templates["task1"]
    task2_template = config.templates["task2"]
    durations: dict[str, float] = {}
    failure: str | None = None

    prompt1 = build_task1_prompt(question, graph, task1_template, config.example_relationship)
    started = time.perf_counter()
    response1: str | None
    try:
        response1 = gateway.complete(
            CompletionRequest(
                model_name=config.model_task1,
                prompt=prompt1,
                temperature=config.temperature,
                max_tokens=config.max_tokens,
            )
        )
    except GatewayError as exc:
        response1 = None
        failure = f"task1: {exc}"
    durations["task1_s"] = time.perf_counter() - started

    candidate = extract_cypher(response1) if response1 is not None else CypherCandidate("", None, None)

    engine_error: str | None = None
    started = time.perf_counter()
    if candidate.ok:
        assert candidate.extracted_query is not None
        try:
            db_output = serialize_records(execute(graph, parse_query(candidate.extracted_query)))
        except EngineError as exc:
            engine_error = f"{exc.kind}: {exc}"
            db_output = NAN_SENTINEL
    else:
        if response1 is not None:
            engine_error = "extraction: no Cypher query found in model output"
        db_output = NAN_SENTINEL
    durations["execute_s"] = time.perf_counter() - started

    outcome = classify_db_outcome(None if db_output == NAN_SENTINEL else db_output, expected_values)

    prompt2 = build_task2_prompt(question, db_output, task2_template)
    started = time.perf_counter()
    answer: str | None
    try:
        answer = gateway.complete(
            CompletionRequest(
                model_name=config.task2_model,
                prompt=prompt2,
                temperature=config.temperature,
                max_tokens=config.max_tokens,
            )
        )
    except GatewayError as exc:
        answer = None
        failure = failure or f"task2: {exc}"
    durations["task2_s"] = time.perf_counter() - started

    return PipelineRun(
        question=question,
        model_task1=config.model_task1,
        model_task2=config.task2_model,
        task1_prompt=prompt1,
        task1_response=response1,
        extracted_query=candidate.extracted_query,
        extraction_method=candidate.extraction_method,
        engine_error=engine_error,
        db_output=db_output,
        outcome=outcome,
        task2_prompt=prompt2,
        answer=answer,
        failure=failure,
        durations=durations,
    )
