"""Benchmark corpus: questions with ground-truth queries and expected values.

A corpus file is JSON with a version marker:

    {"schema_version": "1", "questions": [{"id": ..., "question": ...,
     "ground_truth_query": ..., "expected_values": [...], "is_trick": false,
     "rephrasings": [...]}, ...]}

Expected values are canonical renderings (the record serializer's formats),
so content checks are stable against the serialized database output. Trick
questions (asking about entities that do not exist) carry an empty expected
list; their correct database outcome is the empty list.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from ..cypher import parse_query, execute, serialize_records
from ..errors import CorpusError, EngineError
from ..graph.store import PropertyGraph
from ..matching import all_values_occur

CORPUS_SCHEMA_VERSION = "1"


@dataclass
class QuestionSpec:
    id: str
    question: str
    ground_truth_query: str
    expected_values: list[str] = field(default_factory=list)
    is_trick: bool = False
    rephrasings: list[str] = field(default_factory=list)


def load_corpus(path: str) -> list[QuestionSpec]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise CorpusError(f"cannot read corpus {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CorpusError(f"corpus {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema_version") != CORPUS_SCHEMA_VERSION:
        raise CorpusError(f"corpus {path}: missing or unsupported schema_version")
    specs = []
    for idx, raw in enumerate(data.get("questions", [])):
        try:
            specs.append(QuestionSpec(**raw))
        except TypeError as exc:
            raise CorpusError(f"corpus {path}: question #{idx} malformed: {exc}") from exc
    if not specs:
        raise CorpusError(f"corpus {path}: no questions")
    return specs


def save_corpus(specs: list[QuestionSpec], path: str) -> None:
    payload = {"schema_version": CORPUS_SCHEMA_VERSION, "questions": [asdict(s) for s in specs]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def validate_corpus(graph: PropertyGraph, specs: list[QuestionSpec]) -> None:
    """Ground-truth gate: every reference query must answer its own question.

    Non-trick questions must have expected values and their ground-truth
    query's output must contain all of them; a trick question's query must
    yield the empty list.
    """
    for spec in specs:
        try:
            output = serialize_records(execute(graph, parse_query(spec.ground_truth_query)))
        except EngineError as exc:
            raise CorpusError(f"{spec.id}: ground-truth query failed: {exc}") from exc
        if spec.is_trick:
            if spec.expected_values:
                raise CorpusError(f"{spec.id}: trick questions must have no expected values")
            if output != "[]":
                raise CorpusError(f"{spec.id}: trick ground truth returned {output!r}, expected []")
        else:
            if not spec.expected_values:
                raise CorpusError(f"{spec.id}: non-trick question needs expected values")
            if not all_values_occur(spec.expected_values, output):
                raise CorpusError(f"{spec.id}: ground-truth output does not contain all expected values")


def corpus_instances(
    specs: list[QuestionSpec], include_rephrasings: bool = True
) -> list[tuple[QuestionSpec, int, str]]:
    """Flatten to (spec, variant, question) rows; variant 0 is the original."""
    instances = []
    for spec in specs:
        instances.append((spec, 0, spec.question))
        if include_rephrasings:
            for idx, text in enumerate(spec.rephrasings, start=1):
                instances.append((spec, idx, text))
    return instances
