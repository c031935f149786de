import math
import random

import pytest

from graphqa.errors import ValidationError
from graphqa.graph import PropertyGraph, schema_description


def test_add_node_returns_sequential_ids():
    graph = PropertyGraph()
    assert graph.add_node({"Sensor"}, {}) == 0
    assert graph.stats().node_count == 1
    nid = graph.add_node({"Tower"}, {"Tower": 4, "Lat": 32.58088351, "Long": -106.7533307})
    node = graph.node(nid)
    assert node.properties["Tower"] == 4
    assert isinstance(node.properties["Lat"], float)


def test_add_node_rejects_empty_labels():
    graph = PropertyGraph()
    with pytest.raises(ValidationError):
        graph.add_node(set(), {})


def test_property_kinds_validated():
    graph = PropertyGraph()
    with pytest.raises(ValidationError):
        graph.add_node({"A"}, {"x": float("nan")})
    with pytest.raises(ValidationError):
        graph.add_node({"A"}, {"x": math.inf})
    with pytest.raises(ValidationError):
        graph.add_node({"A"}, {"x": 2**63})
    with pytest.raises(ValidationError):
        graph.add_node({"A"}, {"x": [1, 2]})


def test_add_relationship_and_dangling_endpoints():
    graph = PropertyGraph()
    a = graph.add_node({"Tower"}, {})
    b = graph.add_node({"Sensor"}, {})
    rel_id = graph.add_relationship(a, "HAS_SENSOR", b)
    rel = graph.relationship(rel_id)
    assert (rel.src, rel.dst, rel.rel_type) == (a, b, "HAS_SENSOR")
    assert graph.stats().relationship_count == 1
    with pytest.raises(ValidationError):
        graph.add_relationship(999, "HAS_SENSOR", b)
    with pytest.raises(ValidationError):
        graph.add_relationship(a, "HAS_SENSOR", 999)


def test_stats_counts_distinct_property_keys():
    graph = PropertyGraph()
    a = graph.add_node({"A"}, {"x": 1, "y": "s"})
    b = graph.add_node({"B"}, {"x": 2.5})
    graph.add_relationship(a, "R", b, {"z": True})
    stats = graph.stats()
    assert stats.node_count == 2
    assert stats.relationship_count == 1
    assert stats.property_key_count == 3
    assert stats.label_counts == {"A": 1, "B": 1}


def test_stats_empty_graph():
    stats = PropertyGraph().stats()
    assert (stats.node_count, stats.relationship_count, stats.property_key_count) == (0, 0, 0)


def test_stats_match_independent_recount_on_random_graphs():
    rng = random.Random(7)
    for _ in range(25):
        graph = PropertyGraph()
        ids = []
        for _ in range(rng.randint(1, 60)):
            labels = {rng.choice("ABCDE") for _ in range(rng.randint(1, 2))}
            props = {k: rng.randint(0, 5) for k in rng.sample("pqrstuv", rng.randint(0, 4))}
            ids.append(graph.add_node(labels, props))
        for _ in range(rng.randint(0, 80)):
            graph.add_relationship(rng.choice(ids), rng.choice("RS"), rng.choice(ids))
        stats = graph.stats()
        # Recount from primitives, not via the stats() implementation.
        nodes = graph.nodes()
        rels = graph.relationships()
        keys = set()
        label_counts: dict = {}
        for node in nodes:
            keys.update(node.properties)
            for label in node.labels:
                label_counts[label] = label_counts.get(label, 0) + 1
        for rel in rels:
            keys.update(rel.properties)
        assert stats.node_count == len(nodes)
        assert stats.relationship_count == len(rels)
        assert stats.property_key_count == len(keys)
        assert stats.label_counts == label_counts


def test_schema_description_empty_graph_sentinel():
    assert "no labels" in schema_description(PropertyGraph())


def test_schema_description_lists_labels_keys_and_relationships(fixture_graph):
    text = schema_description(fixture_graph)
    assert "Tower:" in text and "Sensor:" in text
    assert "(:Tower)-[:HAS_SENSOR]->(:Sensor)" in text
    # Alphabetical and stable.
    assert text == schema_description(fixture_graph)


def test_schema_description_new_label_changes_exactly_one_line(fixture_graph, dataset_text):
    from graphqa.graph import load_dataset

    before = schema_description(fixture_graph).splitlines()
    modified = load_dataset(dataset_text)
    modified.add_node({"Gateway"}, {"Name": "GW-1"})
    after = schema_description(modified).splitlines()
    added = [line for line in after if line not in before]
    removed = [line for line in before if line not in after]
    assert len(added) == 1 and "Gateway" in added[0]
    assert not removed
