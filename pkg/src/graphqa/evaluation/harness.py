"""Batch evaluation: run a corpus through the pipeline and grade every run.

Run records are JSON lines (one header, then one envelope per run) holding
every stage artifact plus grades, so reports can be rebuilt from disk without
re-running models.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from ..errors import CorpusError
from ..graph.store import PropertyGraph
from ..llm import Gateway
from ..pipeline import PipelineConfig, PipelineRun, answer_question
from .corpus import QuestionSpec, corpus_instances
from .scoring import GraderConfig, RunGrades, grade_run

RUNS_SCHEMA_VERSION = "1"


@dataclass
class RunRecord:
    question_id: str
    variant: int  # 0 = original question, 1..n = rephrasings
    is_trick: bool
    original_question: str
    run: PipelineRun
    grades: RunGrades
    reason: str

    def to_dict(self) -> dict:
        return {
            "question_id": self.question_id,
            "variant": self.variant,
            "is_trick": self.is_trick,
            "original_question": self.original_question,
            "run": self.run.to_dict(),
            "grades": self.grades.to_dict(),
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunRecord":
        return cls(
            question_id=data["question_id"],
            variant=data["variant"],
            is_trick=data["is_trick"],
            original_question=data["original_question"],
            run=PipelineRun.from_dict(data["run"]),
            grades=RunGrades(**data["grades"]),
            reason=data.get("reason", ""),
        )

    def spec_stub(self) -> QuestionSpec:
        """Enough of a QuestionSpec to aggregate and report from disk."""
        return QuestionSpec(
            id=self.question_id,
            question=self.original_question,
            ground_truth_query="",
            expected_values=[],
            is_trick=self.is_trick,
        )


def evaluate_model(
    graph: PropertyGraph,
    specs: list[QuestionSpec],
    gateway: Gateway,
    config: PipelineConfig,
    include_rephrasings: bool = True,
    grader: GraderConfig | None = None,
) -> list[RunRecord]:
    """Answer and grade every corpus instance with one model configuration."""
    records: list[RunRecord] = []
    for spec, variant, question in corpus_instances(specs, include_rephrasings):
        run = answer_question(question, graph, gateway, config, expected_values=spec.expected_values)
        grades, reason = grade_run(run, spec, grader)
        records.append(
            RunRecord(
                question_id=spec.id,
                variant=variant,
                is_trick=spec.is_trick,
                original_question=spec.question,
                run=run,
                grades=grades,
                reason=reason,
            )
        )
    return records


def metric_rows(
    records: list[RunRecord], specs_by_id: dict[str, QuestionSpec] | None = None
) -> list[tuple[PipelineRun, QuestionSpec, RunGrades]]:
    """Shape run records for ``compute_metrics``."""
    rows = []
    for record in records:
        spec = (specs_by_id or {}).get(record.question_id) or record.spec_stub()
        rows.append((record.run, spec, record.grades))
    return rows


def save_run_records(path: str, model: str, records: list[RunRecord]) -> None:
    lines = [json.dumps({"kind": "runs", "schema_version": RUNS_SCHEMA_VERSION, "model": model})]
    for record in records:
        lines.append(json.dumps(record.to_dict(), sort_keys=True))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_run_records(path: str) -> tuple[str, list[RunRecord]]:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise CorpusError(f"run record file {path} is empty")
    header = json.loads(lines[0])
    if header.get("kind") != "runs" or header.get("schema_version") != RUNS_SCHEMA_VERSION:
        raise CorpusError(f"run record file {path} has no valid header")
    records = [RunRecord.from_dict(json.loads(line)) for line in lines[1:] if line.strip()]
    return header.get("model", ""), records
