"""Result sets and driver-style record serialization.

``serialize_records`` reproduces the flat text format of Neo4j Python driver
output: ``[<Record col1=v1 col2=v2>, ...]`` with an empty result rendered as
``[]``. Floats use their shortest round-trip representation, text values are
rendered with Python ``repr`` (single-quoted in the common case), and nulls
render as ``None``. This exact format is a contract consumed by the pipeline
and the evaluation harness, so change it only with care.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..graph.store import Node, Relationship


@dataclass(frozen=True)
class Point:
    """Geographic point produced by the ``point()`` query function."""

    latitude: float
    longitude: float


CellValue = int | float | str | bool | None | Node | Relationship | Point


@dataclass
class ResultSet:
    """Executed query output: ordered columns and per-row cell tuples."""

    columns: list[str]
    rows: list[tuple[CellValue, ...]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)


def render_value(value: CellValue) -> str:
    """Render one cell the way it appears inside a serialized record."""
    if value is None:
        return "None"
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return repr(value)
    if isinstance(value, Node):
        labels = "frozenset({" + ", ".join(repr(x) for x in sorted(value.labels)) + "})"
        return f"<Node id={value.id} labels={labels} properties={_render_map(value.properties)}>"
    if isinstance(value, Relationship):
        return (
            f"<Relationship id={value.id} type={value.rel_type!r} "
            f"start={value.src} end={value.dst} properties={_render_map(value.properties)}>"
        )
    if isinstance(value, Point):
        return f"point({{latitude: {value.latitude!r}, longitude: {value.longitude!r}}})"
    raise TypeError(f"cannot render value of type {type(value).__name__}")


def _render_map(properties: dict) -> str:
    return "{" + ", ".join(f"{key!r}: {render_value(val)}" for key, val in properties.items()) + "}"


def serialize_records(result: ResultSet) -> str:
    """Serialize a result set to the exact record-list text format."""
    if not result.rows:
        return "[]"
    records = []
    for row in result.rows:
        fields = " ".join(f"{col}={render_value(cell)}" for col, cell in zip(result.columns, row))
        records.append(f"<Record {fields}>")
    return "[" + ", ".join(records) + "]"


def canonical_value_text(value: CellValue) -> str:
    """Canonical rendering used for expected-value matching.

    Identical to the record cell rendering except that text values are kept
    bare (no quotes), so they can be searched for inside serialized output.
    """
    if isinstance(value, str):
        return value
    return render_value(value)


def canonicalize_query(query_text: str) -> str:
    """Normalize a query for exact-match comparison.

    Collapses whitespace runs to single spaces, trims the ends, and strips
    trailing semicolons. Case is preserved everywhere because identifiers,
    labels, and property keys are case-sensitive. Idempotent.
    """
    collapsed = " ".join(query_text.split())
    while collapsed.endswith(";"):
        collapsed = collapsed[:-1].rstrip()
    return collapsed
