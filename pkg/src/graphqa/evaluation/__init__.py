from .corpus import (
    CORPUS_SCHEMA_VERSION,
    QuestionSpec,
    corpus_instances,
    load_corpus,
    save_corpus,
    validate_corpus,
)
from .harness import (
    RunRecord,
    evaluate_model,
    load_run_records,
    metric_rows,
    save_run_records,
)
from .report import parse_csv_report, render_csv_report, render_text_report
from .rephrase import build_rephrase_prompt, rephrase_questions
from .scoring import (
    GradedRun,
    GraderConfig,
    MetricsReport,
    ModelScores,
    RunGrades,
    compute_metrics,
    content_length,
    grade_answer,
    grade_run,
    score_content,
    score_em,
    score_misinformation,
)

__all__ = [
    "CORPUS_SCHEMA_VERSION",
    "GradedRun",
    "GraderConfig",
    "MetricsReport",
    "ModelScores",
    "QuestionSpec",
    "RunGrades",
    "RunRecord",
    "build_rephrase_prompt",
    "evaluate_model",
    "load_run_records",
    "metric_rows",
    "save_run_records",
    "compute_metrics",
    "content_length",
    "corpus_instances",
    "grade_answer",
    "grade_run",
    "load_corpus",
    "parse_csv_report",
    "render_csv_report",
    "render_text_report",
    "rephrase_questions",
    "save_corpus",
    "score_content",
    "score_em",
    "score_misinformation",
    "validate_corpus",
]
