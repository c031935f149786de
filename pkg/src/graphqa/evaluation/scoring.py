"""Run grading and score aggregation.

Metrics per run:

- em: the predicted query equals the ground truth after canonicalization.
- content: the database output contains every expected value (trick
  questions: the output is exactly the empty list).
- content_length: character count of the serialized output, recorded only
  for content-correct runs.
- misinformation: the query executed but retrieved semantically wrong data
  (the WRONG_CONTENT outcome) - the dangerous failure mode, since a fluent
  summary of wrong rows reads like a real answer.
- output_correct: stage-2 answer quality *given its input*: with correct
  content the answer must contain every expected value (numbers compared
  within 1e-9 relative tolerance, units/degree marks tolerated, names
  case-insensitive); a trick question answered from an empty list must state
  nonexistence; with failed/empty/wrong input the answer must not assert
  wrong values as fact. The phrase lexicons are configuration and every
  decision carries a logged reason.
- absolute_correct: the user actually got the right answer end to end.

Aggregation reports percentages over all runs of a model, plus the stricter
"EM only" absolute score where only exact-match queries count as having
provided content.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..matching import (
    all_values_occur,
    find_numbers,
    find_output_text_values,
    is_numeric_text,
    numbers_match,
    value_occurs,
)
from ..errors import ValidationError
from ..pipeline import NAN_SENTINEL, OutcomeCase, PipelineRun, canonical_em_equal
from .corpus import QuestionSpec

DEFAULT_NONEXISTENCE_LEXICON = (
    "does not exist",
    "doesn't exist",
    "do not exist",
    "no such",
    "not found",
    "could not be found",
    "no tower",
    "no sensor",
    "is not present",
    "there is no",
    "there are no",
)

DEFAULT_NO_ASSERTION_LEXICON = (
    "could not",
    "couldn't",
    "cannot",
    "can't",
    "unable to",
    "no data",
    "not found",
    "no results",
    "no matching",
    "no records",
    "nothing was returned",
    "does not exist",
    "doesn't exist",
    "no such",
    "error",
    "failed",
    "empty",
    "not available",
    "unavailable",
    "rather than",
    "instead of",
    "not reliable",
    "not answer",
)


@dataclass
class GraderConfig:
    nonexistence_lexicon: tuple[str, ...] = DEFAULT_NONEXISTENCE_LEXICON
    no_assertion_lexicon: tuple[str, ...] = DEFAULT_NO_ASSERTION_LEXICON
    numeric_rel_tol: float = 1e-9


def score_em(predicted: str | None, ground_truth: str) -> int:
    """1 iff the canonicalized query texts are equal."""
    if predicted is None:
        return 0
    return 1 if canonical_em_equal(predicted, ground_truth) else 0


def score_content(db_output: str | None, expected_values: list[str], is_trick: bool = False) -> int:
    """1 iff the output carries what is needed to answer the question."""
    if db_output is None or db_output == NAN_SENTINEL:
        return 0
    if is_trick:
        return 1 if db_output == "[]" else 0
    if not expected_values:
        return 0
    return 1 if all_values_occur(expected_values, db_output) else 0


def content_length(db_output: str) -> int:
    """Character count of a (content-correct) serialized database response."""
    return len(db_output)


def _lexicon_hit(answer: str, lexicon: tuple[str, ...]) -> str | None:
    lowered = answer.lower()
    for phrase in lexicon:
        if phrase in lowered:
            return phrase
    return None


def _expected_in_answer(answer: str, expected: str, rel_tol: float) -> bool:
    if is_numeric_text(expected):
        target = float(expected)
        return any(numbers_match(found, target, rel_tol) for found in find_numbers(answer))
    return value_occurs(expected, answer)


def grade_answer(
    answer: str | None,
    spec: QuestionSpec,
    outcome: OutcomeCase,
    db_output: str | None = None,
    config: GraderConfig | None = None,
) -> tuple[int, str]:
    """Grade the stage-2 answer against the outcome it was given.

    Returns (0/1, reason); the reason string is logged with each run so the
    automatic decision can be audited.
    """
    cfg = config or GraderConfig()
    if answer is None:
        return 0, "no answer produced"

    if outcome is OutcomeCase.CONTENT:
        missing = [
            v for v in spec.expected_values if not _expected_in_answer(answer, v, cfg.numeric_rel_tol)
        ]
        if missing:
            return 0, f"answer missing expected value(s): {missing}"
        return 1, "all expected values present in answer"

    if outcome is OutcomeCase.EMPTY_LIST and spec.is_trick:
        phrase = _lexicon_hit(answer, cfg.nonexistence_lexicon)
        if phrase:
            return 1, f"nonexistence stated ({phrase!r})"
        return 0, "trick question: answer does not state nonexistence"

    # Failure outcomes: NAN, non-trick EMPTY_LIST, WRONG_CONTENT. Correct
    # behavior is not to assert wrong values as fact.
    phrase = _lexicon_hit(answer, cfg.no_assertion_lexicon)
    if phrase:
        return 1, f"failure acknowledged ({phrase!r})"
    expected_numbers = [float(v) for v in spec.expected_values if is_numeric_text(v)]
    for number in find_numbers(answer):
        if not any(numbers_match(number, e, cfg.numeric_rel_tol) for e in expected_numbers):
            return 0, f"asserts unexpected number {number:g} as fact"
    if db_output and db_output != NAN_SENTINEL:
        expected_texts = {v.lower() for v in spec.expected_values if not is_numeric_text(v)}
        for quoted in find_output_text_values(db_output):
            if quoted.lower() not in expected_texts and value_occurs(quoted, answer):
                return 0, f"asserts unexpected value {quoted!r} from the database output"
    return 1, "no wrong values asserted"


@dataclass
class RunGrades:
    em: int
    content: int
    content_length: int | None
    misinformation: int
    output_correct: int
    absolute_correct: int

    def validate(self) -> None:
        if self.em == 1 and self.content != 1:
            raise ValidationError("grade invariant violated: em=1 requires content=1")
        if self.content == 1 and self.misinformation != 0:
            raise ValidationError("grade invariant violated: content=1 requires misinformation=0")
        if self.absolute_correct == 1 and not (self.output_correct == 1 and self.content == 1):
            raise ValidationError("grade invariant violated: absolute requires output and content")

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def grade_run(
    run: PipelineRun, spec: QuestionSpec, config: GraderConfig | None = None
) -> tuple[RunGrades, str]:
    """Compute all per-run grades; returns (grades, output-grade reason)."""
    em = score_em(run.extracted_query, spec.ground_truth_query)
    db_output = None if run.db_output == NAN_SENTINEL else run.db_output
    content = score_content(db_output, spec.expected_values, spec.is_trick)
    length = content_length(db_output) if content == 1 and db_output is not None else None
    misinformation = 1 if run.outcome is OutcomeCase.WRONG_CONTENT else 0
    output_correct, reason = grade_answer(run.answer, spec, run.outcome, db_output, config)
    absolute = 1 if (output_correct == 1 and content == 1) else 0
    grades = RunGrades(
        em=em,
        content=content,
        content_length=length,
        misinformation=misinformation,
        output_correct=output_correct,
        absolute_correct=absolute,
    )
    grades.validate()
    return grades, reason


def score_misinformation(grades: list[RunGrades]) -> float:
    """Percentage of runs whose query fetched semantically wrong data."""
    if not grades:
        raise ValidationError("cannot score an empty run set")
    return 100.0 * sum(g.misinformation for g in grades) / len(grades)


@dataclass
class ModelScores:
    n: int
    em_score: float
    content_score: float
    output_score: float
    misinformation_score: float
    absolute_score: float
    absolute_em_only: float


@dataclass
class GradedRun:
    run: PipelineRun
    spec: QuestionSpec
    grades: RunGrades
    reason: str = ""


@dataclass
class MetricsReport:
    scores: dict[str, ModelScores]
    graded: dict[str, list[GradedRun]] = field(default_factory=dict, compare=False, repr=False)


def compute_metrics(runs: list[tuple[PipelineRun, QuestionSpec, RunGrades]]) -> MetricsReport:
    """Aggregate per-model percentage scores over a run set."""
    if not runs:
        raise ValidationError("cannot compute metrics over zero runs")
    by_model: dict[str, list[tuple[PipelineRun, QuestionSpec, RunGrades]]] = {}
    for run, spec, grades in runs:
        grades.validate()
        by_model.setdefault(run.model_task1, []).append((run, spec, grades))

    scores: dict[str, ModelScores] = {}
    graded: dict[str, list[GradedRun]] = {}
    for model, entries in by_model.items():
        n = len(entries)
        grade_list = [g for _, _, g in entries]
        scores[model] = ModelScores(
            n=n,
            em_score=100.0 * sum(g.em for g in grade_list) / n,
            content_score=100.0 * sum(g.content for g in grade_list) / n,
            output_score=100.0 * sum(g.output_correct for g in grade_list) / n,
            misinformation_score=score_misinformation(grade_list),
            absolute_score=100.0 * sum(g.absolute_correct for g in grade_list) / n,
            absolute_em_only=100.0 * sum(1 for g in grade_list if g.em == 1 and g.output_correct == 1) / n,
        )
        graded[model] = [GradedRun(run, spec, grades) for run, spec, grades in entries]
    return MetricsReport(scores=scores, graded=graded)
