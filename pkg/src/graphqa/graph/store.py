"""In-memory property graph.

Nodes carry a non-empty set of labels and a property map; relationships are
directed, typed edges between existing nodes. Property values are restricted
to 64-bit integers, finite floats, text, and booleans, and the value kind is
preserved exactly from load through query execution to serialization.

The store is intentionally minimal: a label -> node-id map is the only index.
Mutation is single-writer (build/load phase); query execution treats the
graph as immutable, so concurrent readers are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ValidationError

PropertyValue = int | float | str | bool
PropertyMap = dict[str, PropertyValue]

_INT64_MIN = -(2**63)
_INT64_MAX = 2**63 - 1


def validate_property_map(properties: PropertyMap) -> None:
    """Reject non-string keys, out-of-range integers, and non-finite floats."""
    for key, value in properties.items():
        if not isinstance(key, str) or not key:
            raise ValidationError(f"property key must be a non-empty string, got {key!r}")
        if isinstance(value, bool):
            continue
        if isinstance(value, int):
            if not (_INT64_MIN <= value <= _INT64_MAX):
                raise ValidationError(f"integer property {key}={value} outside 64-bit range")
        elif isinstance(value, float):
            if not math.isfinite(value):
                raise ValidationError(f"float property {key}={value!r} must be finite")
        elif not isinstance(value, str):
            raise ValidationError(f"unsupported property value for {key}: {type(value).__name__}")


class Node:
    """Graph node with a unique integer id."""

    __slots__ = ("id", "labels", "properties")

    def __init__(self, node_id: int, labels: frozenset[str], properties: PropertyMap):
        self.id = node_id
        self.labels = labels
        self.properties = properties

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Node) and other.id == self.id

    def __hash__(self) -> int:
        return hash(("node", self.id))

    def __repr__(self) -> str:
        return f"Node(id={self.id}, labels={sorted(self.labels)}, properties={self.properties})"


class Relationship:
    """Directed, typed edge between two node ids."""

    __slots__ = ("id", "src", "dst", "rel_type", "properties")

    def __init__(self, rel_id: int, src: int, dst: int, rel_type: str, properties: PropertyMap):
        self.id = rel_id
        self.src = src
        self.dst = dst
        self.rel_type = rel_type
        self.properties = properties

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Relationship) and other.id == self.id

    def __hash__(self) -> int:
        return hash(("rel", self.id))

    def __repr__(self) -> str:
        return (
            f"Relationship(id={self.id}, src={self.src}, dst={self.dst}, "
            f"rel_type={self.rel_type!r}, properties={self.properties})"
        )


@dataclass
class GraphStats:
    node_count: int
    relationship_count: int
    property_key_count: int
    label_counts: dict[str, int] = field(default_factory=dict)


class PropertyGraph:
    """Embedded property graph with integer node/relationship handles."""

    def __init__(self) -> None:
        self._nodes: dict[int, Node] = {}
        self._rels: dict[int, Relationship] = {}
        self._nodes_by_label: dict[str, set[int]] = {}
        self._next_node_id = 0
        self._next_rel_id = 0

    def add_node(self, labels: set[str] | frozenset[str], properties: PropertyMap) -> int:
        """Insert a node and return its id. Labels must be non-empty."""
        if not labels:
            raise ValidationError("node must have at least one label")
        for label in labels:
            if not isinstance(label, str) or not label:
                raise ValidationError(f"label must be a non-empty string, got {label!r}")
        validate_property_map(properties)
        node_id = self._next_node_id
        self._next_node_id += 1
        node = Node(node_id, frozenset(labels), dict(properties))
        self._nodes[node_id] = node
        for label in node.labels:
            self._nodes_by_label.setdefault(label, set()).add(node_id)
        return node_id

    def add_relationship(
        self, src: int, rel_type: str, dst: int, properties: PropertyMap | None = None
    ) -> int:
        """Insert a directed relationship and return its id."""
        if src not in self._nodes:
            raise ValidationError(f"relationship source node {src} does not exist")
        if dst not in self._nodes:
            raise ValidationError(f"relationship target node {dst} does not exist")
        if not isinstance(rel_type, str) or not rel_type:
            raise ValidationError("relationship type must be a non-empty string")
        props = dict(properties or {})
        validate_property_map(props)
        rel_id = self._next_rel_id
        self._next_rel_id += 1
        self._rels[rel_id] = Relationship(rel_id, src, dst, rel_type, props)
        return rel_id

    def node(self, node_id: int) -> Node:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise ValidationError(f"no node with id {node_id}") from None

    def relationship(self, rel_id: int) -> Relationship:
        try:
            return self._rels[rel_id]
        except KeyError:
            raise ValidationError(f"no relationship with id {rel_id}") from None

    def nodes(self) -> list[Node]:
        return [self._nodes[i] for i in sorted(self._nodes)]

    def relationships(self) -> list[Relationship]:
        return [self._rels[i] for i in sorted(self._rels)]

    def nodes_with_label(self, label: str) -> list[Node]:
        return [self._nodes[i] for i in sorted(self._nodes_by_label.get(label, ()))]

    def stats(self) -> GraphStats:
        keys: set[str] = set()
        label_counts: dict[str, int] = {}
        for node in self._nodes.values():
            keys.update(node.properties)
            for label in node.labels:
                label_counts[label] = label_counts.get(label, 0) + 1
        for rel in self._rels.values():
            keys.update(rel.properties)
        return GraphStats(
            node_count=len(self._nodes),
            relationship_count=len(self._rels),
            property_key_count=len(keys),
            label_counts=dict(sorted(label_counts.items())),
        )


def schema_description(graph: PropertyGraph) -> str:
    """Render a stable, human-readable schema summary for prompt building.

    Output is fully ordered (alphabetical) so identical graphs always produce
    identical text. Adding a node with a new label adds exactly one line.
    """
    if not graph.nodes():
        return "The graph is empty: no labels and no relationship types."

    keys_by_label: dict[str, set[str]] = {}
    for node in graph.nodes():
        for label in node.labels:
            keys_by_label.setdefault(label, set()).update(node.properties)

    lines = ["Node labels and their property keys:"]
    for label in sorted(keys_by_label):
        keys = ", ".join(sorted(keys_by_label[label])) or "(no properties)"
        lines.append(f"  {label}: {keys}")

    triples: set[tuple[str, str, str]] = set()
    for rel in graph.relationships():
        src_labels = sorted(graph.node(rel.src).labels) or [""]
        dst_labels = sorted(graph.node(rel.dst).labels) or [""]
        for src_label in src_labels:
            for dst_label in dst_labels:
                triples.add((src_label, rel.rel_type, dst_label))
    if triples:
        lines.append("Relationship types:")
        for src_label, rel_type, dst_label in sorted(triples):
            lines.append(f"  (:{src_label})-[:{rel_type}]->(:{dst_label})")
    return "\n".join(lines)
