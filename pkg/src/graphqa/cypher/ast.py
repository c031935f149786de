"""AST for the supported Cypher subset, plus a canonical pretty-printer.

``source_text`` fields carry the exact query slice an expression came from
(used for result column naming, as the reference database does); they are
excluded from structural equality so a pretty-printed and reparsed query
compares equal to the original AST.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tokens import escape_string

# --- expressions -----------------------------------------------------------


class Expr:
    pass


@dataclass(frozen=True)
class Literal(Expr):
    value: int | float | str | bool | None


@dataclass(frozen=True)
class Variable(Expr):
    name: str


@dataclass(frozen=True)
class PropertyAccess(Expr):
    variable: str
    key: str


@dataclass(frozen=True)
class Unary(Expr):
    op: str  # '-' or 'NOT'
    operand: Expr


@dataclass(frozen=True)
class Binary(Expr):
    op: str  # + - * / = <> < <= > >= AND OR
    left: Expr
    right: Expr


@dataclass(frozen=True)
class MapLiteral(Expr):
    entries: tuple[tuple[str, Expr], ...]


@dataclass(frozen=True)
class FunctionCall(Expr):
    name: str  # normalized lowercase, e.g. 'count', 'point', 'point.distance'
    args: tuple[Expr, ...]
    star: bool = False  # count(*)


# --- patterns ---------------------------------------------------------------


@dataclass(frozen=True)
class NodePattern:
    variable: str | None
    labels: tuple[str, ...]
    properties: tuple[tuple[str, "Literal"], ...] = ()


@dataclass(frozen=True)
class EdgePattern:
    variable: str | None
    rel_type: str | None
    direction: str  # 'right' | 'left' | 'any'
    properties: tuple[tuple[str, "Literal"], ...] = ()


@dataclass(frozen=True)
class PathPattern:
    nodes: tuple[NodePattern, ...]
    edges: tuple[EdgePattern, ...]  # len(edges) == len(nodes) - 1


@dataclass(frozen=True)
class MatchClause:
    paths: tuple[PathPattern, ...]


# --- query ------------------------------------------------------------------


@dataclass(frozen=True)
class ReturnItem:
    expr: Expr
    alias: str | None
    source_text: str = field(default="", compare=False)

    def column_name(self) -> str:
        return self.alias if self.alias is not None else (self.source_text or print_expr(self.expr))


@dataclass(frozen=True)
class OrderItem:
    expr: Expr
    ascending: bool = True
    source_text: str = field(default="", compare=False)


@dataclass(frozen=True)
class Query:
    matches: tuple[MatchClause, ...]
    where: Expr | None
    distinct: bool
    items: tuple[ReturnItem, ...]
    order_by: tuple[OrderItem, ...] = ()
    limit: int | None = None


def pattern_variables(query: Query) -> tuple[set[str], set[str]]:
    """Return (node variables, edge variables) bound by the query's patterns."""
    node_vars: set[str] = set()
    edge_vars: set[str] = set()
    for clause in query.matches:
        for path in clause.paths:
            for node in path.nodes:
                if node.variable:
                    node_vars.add(node.variable)
            for edge in path.edges:
                if edge.variable:
                    edge_vars.add(edge.variable)
    return node_vars, edge_vars


def expr_variables(expr: Expr) -> set[str]:
    if isinstance(expr, Variable):
        return {expr.name}
    if isinstance(expr, PropertyAccess):
        return {expr.variable}
    if isinstance(expr, Unary):
        return expr_variables(expr.operand)
    if isinstance(expr, Binary):
        return expr_variables(expr.left) | expr_variables(expr.right)
    if isinstance(expr, FunctionCall):
        out: set[str] = set()
        for arg in expr.args:
            out |= expr_variables(arg)
        return out
    if isinstance(expr, MapLiteral):
        out = set()
        for _, value in expr.entries:
            out |= expr_variables(value)
        return out
    return set()


def contains_aggregate(expr: Expr) -> bool:
    if isinstance(expr, FunctionCall):
        if expr.name == "count":
            return True
        return any(contains_aggregate(a) for a in expr.args)
    if isinstance(expr, Unary):
        return contains_aggregate(expr.operand)
    if isinstance(expr, Binary):
        return contains_aggregate(expr.left) or contains_aggregate(expr.right)
    if isinstance(expr, MapLiteral):
        return any(contains_aggregate(v) for _, v in expr.entries)
    return False


# --- pretty printer ---------------------------------------------------------


def _print_literal(value: int | float | str | bool | None) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return escape_string(value)
    return repr(value)


def print_expr(expr: Expr) -> str:
    """Canonical text for an expression; binaries are fully parenthesized."""
    if isinstance(expr, Literal):
        return _print_literal(expr.value)
    if isinstance(expr, Variable):
        return expr.name
    if isinstance(expr, PropertyAccess):
        return f"{expr.variable}.{expr.key}"
    if isinstance(expr, Unary):
        if expr.op == "NOT":
            return f"(NOT {print_expr(expr.operand)})"
        return f"(-{print_expr(expr.operand)})"
    if isinstance(expr, Binary):
        return f"({print_expr(expr.left)} {expr.op} {print_expr(expr.right)})"
    if isinstance(expr, MapLiteral):
        inner = ", ".join(f"{key}: {print_expr(value)}" for key, value in expr.entries)
        return "{" + inner + "}"
    if isinstance(expr, FunctionCall):
        if expr.star:
            return f"{expr.name}(*)"
        return f"{expr.name}({', '.join(print_expr(a) for a in expr.args)})"
    raise TypeError(f"unknown expression node {expr!r}")


def _print_properties(props: tuple[tuple[str, Literal], ...]) -> str:
    if not props:
        return ""
    return " {" + ", ".join(f"{key}: {_print_literal(lit.value)}" for key, lit in props) + "}"


def _print_node(node: NodePattern) -> str:
    parts = node.variable or ""
    for label in node.labels:
        parts += f":{label}"
    return f"({parts}{_print_properties(node.properties)})"


def _print_edge(edge: EdgePattern) -> str:
    body = edge.variable or ""
    if edge.rel_type is not None:
        body += f":{edge.rel_type}"
    body += _print_properties(edge.properties)
    middle = f"[{body}]" if (body or edge.properties) else ""
    if edge.direction == "right":
        return f"-{middle}->"
    if edge.direction == "left":
        return f"<-{middle}-"
    return f"-{middle}-"


def print_query(query: Query) -> str:
    """Render a query in canonical form; reparsing yields an equal AST."""
    parts: list[str] = []
    for clause in query.matches:
        rendered_paths = []
        for path in clause.paths:
            text = _print_node(path.nodes[0])
            for edge, node in zip(path.edges, path.nodes[1:]):
                text += _print_edge(edge) + _print_node(node)
            rendered_paths.append(text)
        parts.append("MATCH " + ", ".join(rendered_paths))
    if query.where is not None:
        parts.append("WHERE " + print_expr(query.where))
    items = []
    for item in query.items:
        text = print_expr(item.expr)
        if item.alias is not None:
            text += f" AS {item.alias}"
        items.append(text)
    parts.append(("RETURN DISTINCT " if query.distinct else "RETURN ") + ", ".join(items))
    if query.order_by:
        rendered = [
            print_expr(entry.expr) + ("" if entry.ascending else " DESC") for entry in query.order_by
        ]
        parts.append("ORDER BY " + ", ".join(rendered))
    if query.limit is not None:
        parts.append(f"LIMIT {query.limit}")
    return " ".join(parts)
