"""Report rendering: aligned text tables and a delimited (CSV) form.

The text form mirrors the benchmark write-up layout: one score table with
EM / Content / Output / Absolute columns, an absolute-score comparison table,
a misinformation table, and a content-length table for the original (not
rephrased) questions. Percentages are rendered to one decimal place. The CSV
form carries full-precision scores and reloads to an equal report.
"""

from __future__ import annotations

import csv
import io

from ..errors import ValidationError
from .scoring import MetricsReport, ModelScores

_CSV_COLUMNS = [
    "model",
    "n",
    "em_score",
    "content_score",
    "output_score",
    "misinformation_score",
    "absolute_score",
    "absolute_em_only",
]


def _pct(value: float) -> str:
    return f"{value:.1f}%"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for idx, cell in enumerate(row):
            widths[idx] = max(widths[idx], len(cell))
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def render_text_report(report: MetricsReport) -> str:
    if not report.scores:
        raise ValidationError("empty report")
    models = sorted(report.scores)
    sections: list[str] = []

    rows = [
        [m, str(s.n), _pct(s.em_score), _pct(s.content_score), _pct(s.output_score), _pct(s.absolute_score)]
        for m, s in ((m, report.scores[m]) for m in models)
    ]
    sections.append(
        "Scores per model\n"
        + _table(["Model", "N", "EM score", "Content score", "Output score", "Absolute score"], rows)
    )

    rows = [
        [m, _pct(report.scores[m].absolute_em_only), _pct(report.scores[m].absolute_score)]
        for m in models
    ]
    sections.append(
        "Absolute score: exact-match-only vs content-based\n"
        + _table(["Model", "Absolute (EM only)", "Absolute"], rows)
    )

    rows = [[m, _pct(report.scores[m].misinformation_score)] for m in models]
    sections.append("Misinformation\n" + _table(["Model", "Misinformation score"], rows))

    length_rows: list[list[str]] = []
    for model in models:
        for graded in report.graded.get(model, []):
            if graded.run.question == graded.spec.question:  # original phrasing only
                length = graded.grades.content_length
                length_rows.append([model, graded.spec.question, str(length) if length is not None else "-"])
    if length_rows:
        sections.append(
            "Content length of correct database responses (original questions)\n"
            + _table(["Model", "Question", "Content length"], length_rows)
        )

    return "\n\n".join(sections) + "\n"


def render_csv_report(report: MetricsReport) -> str:
    if not report.scores:
        raise ValidationError("empty report")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(_CSV_COLUMNS)
    for model in sorted(report.scores):
        s = report.scores[model]
        writer.writerow(
            [
                model,
                s.n,
                repr(s.em_score),
                repr(s.content_score),
                repr(s.output_score),
                repr(s.misinformation_score),
                repr(s.absolute_score),
                repr(s.absolute_em_only),
            ]
        )
    return buffer.getvalue()


def parse_csv_report(text: str) -> MetricsReport:
    """Reload a delimited report; per-run details are not part of the CSV."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows or rows[0] != _CSV_COLUMNS:
        raise ValidationError("not a graphqa report CSV")
    scores: dict[str, ModelScores] = {}
    for row in rows[1:]:
        if not row:
            continue
        model, n, *values = row
        em, content, output, misinfo, absolute, em_only = (float(v) for v in values)
        scores[model] = ModelScores(
            n=int(n),
            em_score=em,
            content_score=content,
            output_score=output,
            misinformation_score=misinfo,
            absolute_score=absolute,
            absolute_em_only=em_only,
        )
    if not scores:
        raise ValidationError("report CSV has no rows")
    return MetricsReport(scores=scores)
