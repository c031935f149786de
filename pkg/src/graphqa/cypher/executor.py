"""Query execution over an immutable property graph.

Matching semantics (shared contract with the brute-force oracle used in the
test suite):

- A pattern node with no label matches every node; labels must all be present
  on the matched node; inline property maps are equality filters.
- Directed pattern edges follow the arrow; undirected edges match either
  direction, and a self-loop matches an undirected edge once.
- Within one MATCH clause, matched relationships are pairwise distinct
  (relationship uniqueness); across MATCH clauses there is no such constraint.
- Repeating a node variable constrains it to the same node everywhere;
  anonymous pattern parts still multiply rows once per distinct assignment.
- Comparisons and arithmetic over null or mismatched types yield unknown,
  and unknown collapses to false when filtering (no full three-valued logic).
- count() groups implicitly by all non-aggregated return items; ORDER BY and
  LIMIT apply after projection; null sorts as the largest value.
- Division by zero is a runtime error; reading a missing property is not an
  error and yields null.

All functions here are pure with respect to the graph, so independent
queries may safely execute concurrently.
"""

from __future__ import annotations

import functools
from typing import Iterator

from ..errors import RuntimeQueryError, SemanticError, ValidationError
from ..graph.store import Node, PropertyGraph, Relationship
from .ast import (
    Binary,
    EdgePattern,
    Expr,
    FunctionCall,
    Literal,
    MapLiteral,
    MatchClause,
    NodePattern,
    PathPattern,
    PropertyAccess,
    Query,
    Unary,
    Variable,
    contains_aggregate,
)
from .geo import haversine_distance
from .records import CellValue, Point, ResultSet

Binding = dict[str, Node | Relationship]


# --- value semantics ---------------------------------------------------------


def is_numeric(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def value_equals(a: CellValue, b: CellValue) -> bool | None:
    """Three-valued equality; ``None`` means unknown."""
    if a is None or b is None:
        return None
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b if isinstance(a, bool) and isinstance(b, bool) else None
    if is_numeric(a) and is_numeric(b):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, Node) and isinstance(b, Node):
        return a.id == b.id
    if isinstance(a, Relationship) and isinstance(b, Relationship):
        return a.id == b.id
    if isinstance(a, Point) and isinstance(b, Point):
        return a == b
    return None


def value_less_than(a: CellValue, b: CellValue) -> bool | None:
    if a is None or b is None:
        return None
    if isinstance(a, bool) and isinstance(b, bool):
        return a < b
    if isinstance(a, bool) or isinstance(b, bool):
        return None
    if is_numeric(a) and is_numeric(b):
        return a < b
    if isinstance(a, str) and isinstance(b, str):
        return a < b
    return None


def compare_values(op: str, a: CellValue, b: CellValue) -> bool | None:
    eq = value_equals(a, b)
    if op == "=":
        return eq
    if op == "<>":
        return None if eq is None else not eq
    lt = value_less_than(a, b)
    if op == "<":
        return lt
    if op == ">":
        return value_less_than(b, a)
    if op == "<=":
        if eq is True or lt is True:
            return True
        return None if (eq is None or lt is None) else False
    if op == ">=":
        gt = value_less_than(b, a)
        if eq is True or gt is True:
            return True
        return None if (eq is None or gt is None) else False
    raise RuntimeQueryError(f"unknown comparison operator {op!r}")


def group_key(value: CellValue):
    """Hashable key with the same equivalence as value_equals."""
    if value is None:
        return ("null",)
    if isinstance(value, bool):
        return ("bool", value)
    if is_numeric(value):
        return ("num", value)
    if isinstance(value, str):
        return ("str", value)
    if isinstance(value, Node):
        return ("node", value.id)
    if isinstance(value, Relationship):
        return ("rel", value.id)
    if isinstance(value, Point):
        return ("point", value.latitude, value.longitude)
    raise TypeError(f"ungroupable value {value!r}")


_SORT_RANK = {"num": 0, "str": 1, "bool": 2, "point": 3, "node": 4, "rel": 5, "null": 9}


def sort_compare(a: CellValue, b: CellValue) -> int:
    """Total order used by ORDER BY; null is the largest value."""
    ka, kb = group_key(a), group_key(b)
    ra, rb = _SORT_RANK[ka[0]], _SORT_RANK[kb[0]]
    if ra != rb:
        return -1 if ra < rb else 1
    if ka[1:] == kb[1:]:
        return 0
    return -1 if ka[1:] < kb[1:] else 1


# --- expression evaluation ----------------------------------------------------


def _kleene_not(v: bool | None) -> bool | None:
    return None if v is None else not v


def _as_bool(value: CellValue) -> bool | None:
    return value if isinstance(value, bool) or value is None else None


def _numeric_binary(op: str, a: CellValue, b: CellValue) -> CellValue:
    if a is None or b is None:
        return None
    if not (is_numeric(a) and is_numeric(b)):
        return None
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise RuntimeQueryError("division by zero")
        if isinstance(a, int) and isinstance(b, int):
            quotient = abs(a) // abs(b)
            return quotient if (a >= 0) == (b >= 0) else -quotient
        return a / b
    raise RuntimeQueryError(f"unknown arithmetic operator {op!r}")


def evaluate(expr: Expr, binding: Binding, env: dict[str, CellValue] | None = None) -> CellValue:
    """Evaluate a non-aggregate expression under a binding.

    ``env`` optionally maps projected column names to values so that ORDER BY
    can reference aliases; it shadows nothing (pattern variables win).
    """
    if isinstance(expr, Literal):
        return expr.value
    if isinstance(expr, Variable):
        if expr.name in binding:
            return binding[expr.name]
        if env is not None and expr.name in env:
            return env[expr.name]
        raise SemanticError(f"variable {expr.name!r} is not bound")
    if isinstance(expr, PropertyAccess):
        target = binding.get(expr.variable)
        if target is None:
            if env is not None:
                target = env.get(expr.variable)
            if target is None:
                return None
        if isinstance(target, (Node, Relationship)):
            return target.properties.get(expr.key)
        return None
    if isinstance(expr, Unary):
        if expr.op == "NOT":
            return _kleene_not(_as_bool(evaluate(expr.operand, binding, env)))
        value = evaluate(expr.operand, binding, env)
        return -value if is_numeric(value) else None
    if isinstance(expr, Binary):
        if expr.op == "AND":
            left = _as_bool(evaluate(expr.left, binding, env))
            if left is False:
                return False
            right = _as_bool(evaluate(expr.right, binding, env))
            if right is False:
                return False
            return None if left is None or right is None else True
        if expr.op == "OR":
            left = _as_bool(evaluate(expr.left, binding, env))
            if left is True:
                return True
            right = _as_bool(evaluate(expr.right, binding, env))
            if right is True:
                return True
            return None if left is None or right is None else False
        if expr.op in ("=", "<>", "<", "<=", ">", ">="):
            return compare_values(expr.op, evaluate(expr.left, binding, env), evaluate(expr.right, binding, env))
        return _numeric_binary(expr.op, evaluate(expr.left, binding, env), evaluate(expr.right, binding, env))
    if isinstance(expr, MapLiteral):
        return {key: evaluate(value, binding, env) for key, value in expr.entries}  # type: ignore[return-value]
    if isinstance(expr, FunctionCall):
        return _evaluate_function(expr, binding, env)
    raise RuntimeQueryError(f"cannot evaluate expression {expr!r}")


def _evaluate_function(call: FunctionCall, binding: Binding, env) -> CellValue:
    if call.name == "count":
        raise SemanticError("count() outside of a RETURN item")
    if call.name == "point":
        arg = evaluate(call.args[0], binding, env)
        if not isinstance(arg, dict):
            return None
        extra = set(arg) - {"latitude", "longitude"}
        if extra or set(arg) != {"latitude", "longitude"}:
            raise RuntimeQueryError("point() requires exactly latitude and longitude")
        lat, lon = arg["latitude"], arg["longitude"]
        if lat is None or lon is None:
            return None
        if not (is_numeric(lat) and is_numeric(lon)):
            return None
        return Point(float(lat), float(lon))
    if call.name == "point.distance":
        a = evaluate(call.args[0], binding, env)
        b = evaluate(call.args[1], binding, env)
        if a is None or b is None:
            return None
        if not (isinstance(a, Point) and isinstance(b, Point)):
            return None
        try:
            return haversine_distance((a.latitude, a.longitude), (b.latitude, b.longitude))
        except ValidationError as exc:
            raise RuntimeQueryError(str(exc)) from exc
    raise SemanticError(f"unknown function {call.name}()")


# --- pattern matching ----------------------------------------------------------


def _node_matches(node: Node, pattern: NodePattern) -> bool:
    for label in pattern.labels:
        if label not in node.labels:
            return False
    for key, literal in pattern.properties:
        if value_equals(node.properties.get(key), literal.value) is not True:
            return False
    return True


def _edge_matches(rel: Relationship, pattern: EdgePattern) -> bool:
    if pattern.rel_type is not None and rel.rel_type != pattern.rel_type:
        return False
    for key, literal in pattern.properties:
        if value_equals(rel.properties.get(key), literal.value) is not True:
            return False
    return True


def _node_candidates(graph: PropertyGraph, pattern: NodePattern, binding: Binding) -> Iterator[Node]:
    if pattern.variable and pattern.variable in binding:
        bound = binding[pattern.variable]
        if isinstance(bound, Node) and _node_matches(bound, pattern):
            yield bound
        return
    pool = graph.nodes_with_label(pattern.labels[0]) if pattern.labels else graph.nodes()
    for node in pool:
        if _node_matches(node, pattern):
            yield node


def _match_path(
    graph: PropertyGraph, path: PathPattern, binding: Binding, used: set[int]
) -> Iterator[tuple[Binding, set[int]]]:
    def walk(position: int, current: Node, bound: Binding, used_edges: set[int]):
        if position == len(path.edges):
            yield bound, used_edges
            return
        edge_pat = path.edges[position]
        next_pat = path.nodes[position + 1]
        for rel in graph.relationships():
            if rel.id in used_edges or not _edge_matches(rel, edge_pat):
                continue
            others: list[int] = []
            if edge_pat.direction in ("right", "any") and rel.src == current.id:
                others.append(rel.dst)
            if edge_pat.direction in ("left", "any") and rel.dst == current.id:
                # An undirected self-loop matches once, not once per direction.
                if not (edge_pat.direction == "any" and rel.src == rel.dst):
                    others.append(rel.src)
            for other_id in others:
                other = graph.node(other_id)
                if not _node_matches(other, next_pat):
                    continue
                new_bound = bound
                if next_pat.variable:
                    existing = bound.get(next_pat.variable)
                    if existing is not None:
                        if not (isinstance(existing, Node) and existing.id == other.id):
                            continue
                    else:
                        new_bound = dict(bound)
                        new_bound[next_pat.variable] = other
                if edge_pat.variable:
                    if new_bound is bound:
                        new_bound = dict(bound)
                    new_bound[edge_pat.variable] = rel
                yield from walk(position + 1, other, new_bound, used_edges | {rel.id})

    first = path.nodes[0]
    for start in _node_candidates(graph, first, binding):
        bound = binding
        if first.variable and first.variable not in binding:
            bound = dict(binding)
            bound[first.variable] = start
        yield from walk(0, start, bound, used)


def _match_clause(graph: PropertyGraph, clause: MatchClause, seed: Binding) -> Iterator[Binding]:
    def extend(path_index: int, binding: Binding, used: set[int]) -> Iterator[Binding]:
        if path_index == len(clause.paths):
            yield binding
            return
        for next_binding, next_used in _match_path(graph, clause.paths[path_index], binding, used):
            yield from extend(path_index + 1, next_binding, next_used)

    yield from extend(0, seed, set())


def enumerate_bindings(graph: PropertyGraph, query: Query) -> list[Binding]:
    """All variable bindings satisfying the MATCH clauses and WHERE predicate."""
    bindings: list[Binding] = [{}]
    for clause in query.matches:
        bindings = [extended for base in bindings for extended in _match_clause(graph, clause, base)]
    if query.where is not None:
        bindings = [b for b in bindings if _as_bool(evaluate(query.where, b)) is True]
    return bindings


# --- projection -----------------------------------------------------------------


def _project(query: Query, bindings: list[Binding]) -> tuple[list[str], list[tuple], list[Binding | None]]:
    columns = [item.column_name() for item in query.items]
    has_aggregate = any(contains_aggregate(item.expr) for item in query.items)

    if not has_aggregate:
        rows = [tuple(evaluate(item.expr, b) for item in query.items) for b in bindings]
        return columns, rows, list(bindings)

    plain_indices = [i for i, item in enumerate(query.items) if not contains_aggregate(item.expr)]
    groups: dict[tuple, dict] = {}
    for b in bindings:
        plain_values = {i: evaluate(query.items[i].expr, b) for i in plain_indices}
        key = tuple(group_key(plain_values[i]) for i in plain_indices)
        bucket = groups.setdefault(key, {"values": plain_values, "bindings": []})
        bucket["bindings"].append(b)
    if not plain_indices and not groups:
        groups[()] = {"values": {}, "bindings": []}

    rows: list[tuple] = []
    for bucket in groups.values():
        row: list[CellValue] = []
        for i, item in enumerate(query.items):
            if i in plain_indices:
                row.append(bucket["values"][i])
            else:
                call = item.expr
                assert isinstance(call, FunctionCall) and call.name == "count"
                if call.star:
                    row.append(len(bucket["bindings"]))
                else:
                    row.append(
                        sum(1 for b in bucket["bindings"] if evaluate(call.args[0], b) is not None)
                    )
        rows.append(tuple(row))
    return columns, rows, [None] * len(rows)


def _order_rows(
    query: Query,
    columns: list[str],
    rows: list[tuple],
    row_bindings: list[Binding | None],
) -> list[tuple]:
    if not query.order_by:
        return rows

    def order_cells(row: tuple, binding: Binding | None) -> list[CellValue]:
        env = dict(zip(columns, row))
        cells = []
        for entry in query.order_by:
            if binding is None:
                # Aggregated/distinct rows: the sort key must be a projected
                # column (by alias or by identical expression text).
                if isinstance(entry.expr, Variable) and entry.expr.name in env:
                    cells.append(env[entry.expr.name])
                    continue
                text = entry.source_text
                if text and text in env:
                    cells.append(env[text])
                    continue
                raise SemanticError("ORDER BY over aggregated or DISTINCT rows must reference a returned column")
            cells.append(evaluate(entry.expr, binding, env))
        return cells

    decorated = [
        (order_cells(row, binding), idx, row)
        for idx, (row, binding) in enumerate(zip(rows, row_bindings))
    ]
    directions = [entry.ascending for entry in query.order_by]

    def compare(a, b) -> int:
        for cell_a, cell_b, ascending in zip(a[0], b[0], directions):
            result = sort_compare(cell_a, cell_b)
            if result:
                return result if ascending else -result
        return -1 if a[1] < b[1] else (1 if a[1] > b[1] else 0)

    decorated.sort(key=functools.cmp_to_key(compare))
    return [row for _, _, row in decorated]


def execute(graph: PropertyGraph, query: Query) -> ResultSet:
    """Execute a parsed query and return its result set."""
    bindings = enumerate_bindings(graph, query)
    columns, rows, row_bindings = _project(query, bindings)

    if query.distinct:
        seen: set[tuple] = set()
        deduped: list[tuple] = []
        deduped_bindings: list[Binding | None] = []
        for row, binding in zip(rows, row_bindings):
            key = tuple(group_key(cell) for cell in row)
            if key not in seen:
                seen.add(key)
                deduped.append(row)
                deduped_bindings.append(None)  # sort keys must come from columns
        rows, row_bindings = deduped, deduped_bindings

    rows = _order_rows(query, columns, rows, row_bindings)
    if query.limit is not None:
        rows = rows[: query.limit]
    return ResultSet(columns=columns, rows=rows)
