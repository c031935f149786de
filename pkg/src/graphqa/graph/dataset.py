"""Line-delimited dataset file format, schema version 1.

Each line is a standalone JSON object so files stay human-diffable:

    {"kind": "header", "schema_version": "1"}
    {"kind": "node", "labels": ["Tower"], "properties": {"Tower": 0, ...}}
    {"kind": "rel", "src": 0, "rel_type": "HAS_SENSOR", "dst": 13, "properties": {}}

``src``/``dst`` are 0-based indices into the file's node lines, in order of
appearance. JSON keeps integer vs float property kinds distinct and floats
are written with their shortest round-trip representation, so a load -> save
-> load cycle reproduces the graph exactly.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

from ..errors import DatasetFormatError, ValidationError
from .store import PropertyGraph, PropertyMap

SCHEMA_VERSION = "1"


@dataclass
class NodeEntry:
    labels: list[str]
    properties: PropertyMap


@dataclass
class RelationshipEntry:
    src_index: int
    rel_type: str
    dst_index: int
    properties: PropertyMap = field(default_factory=dict)


@dataclass
class DatasetFile:
    schema_version: str = SCHEMA_VERSION
    nodes: list[NodeEntry] = field(default_factory=list)
    relationships: list[RelationshipEntry] = field(default_factory=list)


def _check_value(key: str, value: object, line: int) -> None:
    if isinstance(value, bool) or isinstance(value, (int, str)):
        return
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DatasetFormatError(f"property {key!r} must be a finite number", line)
        return
    raise DatasetFormatError(f"property {key!r} has unsupported type {type(value).__name__}", line)


def parse_dataset(source: str | bytes | io.IOBase) -> DatasetFile:
    """Parse a dataset document into its file-level representation."""
    if isinstance(source, io.IOBase):
        raw = source.read()
    else:
        raw = source
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8")

    dataset = DatasetFile()
    saw_header = False
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"invalid JSON: {exc.msg}", lineno) from exc
        if not isinstance(obj, dict) or "kind" not in obj:
            raise DatasetFormatError("each line must be an object with a 'kind' field", lineno)
        kind = obj["kind"]
        if kind == "header":
            version = obj.get("schema_version")
            if version != SCHEMA_VERSION:
                raise DatasetFormatError(f"unsupported schema_version {version!r}", lineno)
            saw_header = True
        elif kind == "node":
            labels = obj.get("labels")
            props = obj.get("properties", {})
            if not isinstance(labels, list) or not labels or not all(isinstance(x, str) for x in labels):
                raise DatasetFormatError("node 'labels' must be a non-empty list of strings", lineno)
            if not isinstance(props, dict):
                raise DatasetFormatError("node 'properties' must be an object", lineno)
            for key, value in props.items():
                _check_value(key, value, lineno)
            dataset.nodes.append(NodeEntry(list(labels), dict(props)))
        elif kind == "rel":
            try:
                src = obj["src"]
                dst = obj["dst"]
                rel_type = obj["rel_type"]
            except KeyError as exc:
                raise DatasetFormatError(f"relationship line missing field {exc.args[0]!r}", lineno) from exc
            props = obj.get("properties", {})
            if not isinstance(src, int) or not isinstance(dst, int) or isinstance(src, bool) or isinstance(dst, bool):
                raise DatasetFormatError("relationship 'src'/'dst' must be integers", lineno)
            if not isinstance(rel_type, str) or not rel_type:
                raise DatasetFormatError("relationship 'rel_type' must be a non-empty string", lineno)
            if not isinstance(props, dict):
                raise DatasetFormatError("relationship 'properties' must be an object", lineno)
            for key, value in props.items():
                _check_value(key, value, lineno)
            dataset.relationships.append(RelationshipEntry(src, rel_type, dst, dict(props)))
        else:
            raise DatasetFormatError(f"unknown line kind {kind!r}", lineno)

    if not saw_header:
        raise DatasetFormatError("missing header line", 1)
    return dataset


def serialize_dataset(dataset: DatasetFile) -> str:
    """Render a dataset document; property keys are sorted for stable bytes."""
    lines = [json.dumps({"kind": "header", "schema_version": dataset.schema_version}, sort_keys=True)]
    for node in dataset.nodes:
        lines.append(
            json.dumps(
                {"kind": "node", "labels": list(node.labels), "properties": node.properties},
                sort_keys=True,
            )
        )
    for rel in dataset.relationships:
        lines.append(
            json.dumps(
                {
                    "kind": "rel",
                    "src": rel.src_index,
                    "rel_type": rel.rel_type,
                    "dst": rel.dst_index,
                    "properties": rel.properties,
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"


def dataset_to_graph(dataset: DatasetFile) -> PropertyGraph:
    """Materialize a graph; node ids are assigned in file order starting at 0."""
    graph = PropertyGraph()
    for node in dataset.nodes:
        graph.add_node(set(node.labels), node.properties)
    node_count = len(dataset.nodes)
    for rel in dataset.relationships:
        for endpoint in (rel.src_index, rel.dst_index):
            if not 0 <= endpoint < node_count:
                raise ValidationError(
                    f"relationship endpoint index {endpoint} out of range (0..{node_count - 1})"
                )
        graph.add_relationship(rel.src_index, rel.rel_type, rel.dst_index, rel.properties)
    return graph


def graph_to_dataset(graph: PropertyGraph) -> DatasetFile:
    """Project a graph back to the file representation (sorted labels/keys)."""
    nodes = graph.nodes()
    index_of = {node.id: idx for idx, node in enumerate(nodes)}
    dataset = DatasetFile()
    for node in nodes:
        dataset.nodes.append(NodeEntry(sorted(node.labels), dict(sorted(node.properties.items()))))
    for rel in graph.relationships():
        dataset.relationships.append(
            RelationshipEntry(
                index_of[rel.src], rel.rel_type, index_of[rel.dst], dict(sorted(rel.properties.items()))
            )
        )
    return dataset


def load_dataset(source: str | bytes | io.IOBase) -> PropertyGraph:
    """Parse and materialize in one step."""
    return dataset_to_graph(parse_dataset(source))


def load_dataset_file(path: str) -> PropertyGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return load_dataset(fh.read())
