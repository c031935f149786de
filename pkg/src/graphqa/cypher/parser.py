"""Recursive-descent parser for the supported Cypher subset.

Grammar (read-only queries):

    query   := match+ RETURN [DISTINCT] item (',' item)*
               [ORDER BY sort (',' sort)*] [LIMIT int] [';']
             | RETURN ...                      (constant queries)
    match   := MATCH path (',' path)* [WHERE expr]
    path    := node (edge node)*
    node    := '(' [var] (':' label)* [props] ')'
    edge    := ['<'] '-' ['[' [var] [':' type] [props] ']'] '-' ['>']
    props   := '{' key ':' literal (',' key ':' literal)* '}'

Expressions support property access, variables, literals, arithmetic
(+ - * /), comparisons (= <> < <= > >=), AND/OR/NOT, and the functions
count(*), count(expr), point({latitude, longitude}) and point.distance(a, b).
Write clauses and other unsupported constructs fail with a parse error that
names the construct; WHERE may follow each MATCH and all WHERE predicates are
conjoined into the single query-level predicate.
"""

from __future__ import annotations

from ..errors import ParseError, SemanticError
from .ast import (
    Binary,
    EdgePattern,
    Expr,
    FunctionCall,
    Literal,
    MapLiteral,
    MatchClause,
    NodePattern,
    OrderItem,
    PathPattern,
    PropertyAccess,
    Query,
    ReturnItem,
    Unary,
    Variable,
    contains_aggregate,
    expr_variables,
    pattern_variables,
)
from .tokens import UNSUPPORTED_KEYWORDS, Token, tokenize, unescape_string

KNOWN_FUNCTIONS = {"count", "point", "point.distance"}

_COMPARISON_OPS = {"=", "<>", "<", "<=", ">", ">="}


class _Parser:
    def __init__(self, tokens: list[Token], source: str | None):
        self.tokens = tokens
        self.source = source
        self.pos = 0

    # -- token helpers ---------------------------------------------------

    def peek(self, ahead: int = 0) -> Token | None:
        idx = self.pos + ahead
        return self.tokens[idx] if idx < len(self.tokens) else None

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of query")
        self.pos += 1
        return tok

    def expect_symbol(self, text: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "symbol" or tok.text != text:
            found = tok.text if tok else "end of query"
            raise ParseError(f"expected {text!r}, found {found!r}", tok.offset if tok else None)
        return self.advance()

    def match_symbol(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "symbol" and tok.text == text:
            self.pos += 1
            return True
        return False

    def match_keyword(self, word: str) -> bool:
        tok = self.peek()
        if tok is not None and tok.kind == "keyword" and tok.upper() == word:
            self.pos += 1
            return True
        return False

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "keyword" or tok.upper() != word:
            found = tok.text if tok else "end of query"
            raise ParseError(f"expected {word}, found {found!r}", tok.offset if tok else None)
        return self.advance()

    def expect_identifier(self, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != "identifier":
            found = tok.text if tok else "end of query"
            raise ParseError(f"expected {what}, found {found!r}", tok.offset if tok else None)
        return self.advance()

    def _reject_unsupported(self) -> None:
        tok = self.peek()
        if tok is not None and tok.kind == "keyword" and tok.upper() in UNSUPPORTED_KEYWORDS:
            raise ParseError(f"unsupported construct {tok.upper()}", tok.offset)

    def _slice(self, start_idx: int, end_idx: int) -> str:
        """Exact source text spanning tokens [start_idx, end_idx)."""
        if self.source is None or start_idx >= end_idx:
            return ""
        first = self.tokens[start_idx]
        last = self.tokens[end_idx - 1]
        return self.source[first.offset : last.offset + len(last.text)].strip()

    # -- query structure ---------------------------------------------------

    def parse_query(self) -> Query:
        matches: list[MatchClause] = []
        wheres: list[Expr] = []
        self._reject_unsupported()
        while self.match_keyword("MATCH"):
            paths = [self.parse_path()]
            while self.match_symbol(","):
                paths.append(self.parse_path())
            matches.append(MatchClause(tuple(paths)))
            if self.match_keyword("WHERE"):
                wheres.append(self.parse_expr())
            self._reject_unsupported()

        self.expect_keyword("RETURN")
        distinct = self.match_keyword("DISTINCT")
        items = [self.parse_return_item()]
        while self.match_symbol(","):
            items.append(self.parse_return_item())

        order_by: list[OrderItem] = []
        if self.match_keyword("ORDER"):
            self.expect_keyword("BY")
            order_by.append(self.parse_order_item())
            while self.match_symbol(","):
                order_by.append(self.parse_order_item())

        limit: int | None = None
        if self.match_keyword("LIMIT"):
            tok = self.peek()
            if tok is None or tok.kind != "integer":
                found = tok.text if tok else "end of query"
                raise ParseError(f"LIMIT requires an integer, found {found!r}", tok.offset if tok else None)
            self.advance()
            limit = int(tok.text)

        self.match_symbol(";")
        if not self.at_end():
            tok = self.peek()
            assert tok is not None
            self._reject_unsupported()
            raise ParseError(f"unexpected token {tok.text!r} after query", tok.offset)

        where = None
        for predicate in wheres:
            where = predicate if where is None else Binary("AND", where, predicate)
        query = Query(
            matches=tuple(matches),
            where=where,
            distinct=distinct,
            items=tuple(items),
            order_by=tuple(order_by),
            limit=limit,
        )
        _validate(query)
        return query

    def parse_return_item(self) -> ReturnItem:
        start = self.pos
        expr = self.parse_expr()
        text = self._slice(start, self.pos)
        alias = None
        if self.match_keyword("AS"):
            alias = self.expect_identifier("alias name").text
        return ReturnItem(expr=expr, alias=alias, source_text=text)

    def parse_order_item(self) -> OrderItem:
        start = self.pos
        expr = self.parse_expr()
        text = self._slice(start, self.pos)
        ascending = True
        tok = self.peek()
        if tok is not None and tok.kind == "keyword":
            word = tok.upper()
            if word in ("ASC", "ASCENDING"):
                self.advance()
            elif word in ("DESC", "DESCENDING"):
                self.advance()
                ascending = False
        return OrderItem(expr=expr, ascending=ascending, source_text=text)

    # -- patterns ----------------------------------------------------------

    def parse_path(self) -> PathPattern:
        nodes = [self.parse_node_pattern()]
        edges: list[EdgePattern] = []
        while True:
            tok = self.peek()
            if tok is None or tok.kind != "symbol" or tok.text not in ("-", "<"):
                break
            edges.append(self.parse_edge_pattern())
            nodes.append(self.parse_node_pattern())
        return PathPattern(tuple(nodes), tuple(edges))

    def parse_node_pattern(self) -> NodePattern:
        self.expect_symbol("(")
        variable = None
        tok = self.peek()
        if tok is not None and tok.kind == "identifier":
            variable = self.advance().text
        labels: list[str] = []
        while self.match_symbol(":"):
            labels.append(self.expect_identifier("label").text)
        properties = self.parse_property_map() if (tok := self.peek()) and tok.text == "{" else ()
        self.expect_symbol(")")
        return NodePattern(variable, tuple(labels), properties)

    def parse_edge_pattern(self) -> EdgePattern:
        left_arrow = self.match_symbol("<")
        self.expect_symbol("-")
        variable = None
        rel_type = None
        properties: tuple = ()
        if self.match_symbol("["):
            tok = self.peek()
            if tok is not None and tok.kind == "identifier":
                variable = self.advance().text
            if self.match_symbol(":"):
                rel_type = self.expect_identifier("relationship type").text
            tok = self.peek()
            if tok is not None and tok.text == "*":
                raise ParseError("unsupported construct: variable-length relationship", tok.offset)
            if tok is not None and tok.text == "{":
                properties = self.parse_property_map()
            self.expect_symbol("]")
        self.expect_symbol("-")
        right_arrow = self.match_symbol(">")
        if left_arrow and right_arrow:
            raise ParseError("relationship cannot point both ways")
        direction = "left" if left_arrow else "right" if right_arrow else "any"
        return EdgePattern(variable, rel_type, direction, properties)

    def parse_property_map(self) -> tuple[tuple[str, Literal], ...]:
        self.expect_symbol("{")
        entries: list[tuple[str, Literal]] = []
        if not self.match_symbol("}"):
            while True:
                key = self.expect_identifier("property key").text
                self.expect_symbol(":")
                entries.append((key, self.parse_pattern_literal()))
                if self.match_symbol("}"):
                    break
                self.expect_symbol(",")
        return tuple(entries)

    def parse_pattern_literal(self) -> Literal:
        negative = self.match_symbol("-")
        tok = self.peek()
        value = self._literal_value(tok)
        if value is NotImplemented:
            found = tok.text if tok else "end of query"
            raise ParseError(f"expected literal value, found {found!r}", tok.offset if tok else None)
        self.advance()
        if negative:
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ParseError("'-' applies to numbers only in property maps", tok.offset if tok else None)
            value = -value
        return Literal(value)

    def _literal_value(self, tok: Token | None):
        if tok is None:
            return NotImplemented
        if tok.kind == "integer":
            return int(tok.text)
        if tok.kind == "float":
            return float(tok.text)
        if tok.kind == "string":
            return unescape_string(tok.text)
        if tok.kind == "keyword":
            word = tok.upper()
            if word == "TRUE":
                return True
            if word == "FALSE":
                return False
            if word == "NULL":
                return None
        return NotImplemented

    # -- expressions ---------------------------------------------------------

    def parse_expr(self) -> Expr:
        return self.parse_or()

    def parse_or(self) -> Expr:
        expr = self.parse_and()
        while self.match_keyword("OR"):
            expr = Binary("OR", expr, self.parse_and())
        return expr

    def parse_and(self) -> Expr:
        expr = self.parse_not()
        while self.match_keyword("AND"):
            expr = Binary("AND", expr, self.parse_not())
        return expr

    def parse_not(self) -> Expr:
        if self.match_keyword("NOT"):
            return Unary("NOT", self.parse_not())
        return self.parse_comparison()

    def parse_comparison(self) -> Expr:
        left = self.parse_additive()
        tok = self.peek()
        if tok is not None and tok.kind == "symbol" and tok.text in _COMPARISON_OPS:
            self.advance()
            right = self.parse_additive()
            follow = self.peek()
            if follow is not None and follow.kind == "symbol" and follow.text in _COMPARISON_OPS:
                raise ParseError("chained comparisons are not supported", follow.offset)
            return Binary(tok.text, left, right)
        return left

    def parse_additive(self) -> Expr:
        expr = self.parse_multiplicative()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "symbol" and tok.text in ("+", "-"):
                self.advance()
                expr = Binary(tok.text, expr, self.parse_multiplicative())
            else:
                return expr

    def parse_multiplicative(self) -> Expr:
        expr = self.parse_unary()
        while True:
            tok = self.peek()
            if tok is not None and tok.kind == "symbol" and tok.text in ("*", "/"):
                self.advance()
                expr = Binary(tok.text, expr, self.parse_unary())
            else:
                return expr

    def parse_unary(self) -> Expr:
        if self.match_symbol("-"):
            operand = self.parse_unary()
            is_number = isinstance(operand, Literal) and isinstance(operand.value, (int, float))
            if is_number and not isinstance(operand.value, bool):
                return Literal(-operand.value)
            return Unary("-", operand)
        return self.parse_primary()

    def parse_primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of query")
        self._reject_unsupported()

        value = self._literal_value(tok)
        if value is not NotImplemented:
            self.advance()
            return Literal(value)

        if tok.kind == "symbol" and tok.text == "(":
            self.advance()
            expr = self.parse_expr()
            self.expect_symbol(")")
            return expr

        if tok.kind == "symbol" and tok.text == "{":
            return self.parse_map_literal()

        if tok.kind == "identifier":
            name = self.advance().text
            nxt = self.peek()
            # Namespaced function, e.g. point.distance(a, b).
            if (
                nxt is not None
                and nxt.text == "."
                and (after := self.peek(1)) is not None
                and after.kind == "identifier"
                and (paren := self.peek(2)) is not None
                and paren.text == "("
            ):
                self.advance()
                member = self.advance().text
                return self.parse_call(f"{name}.{member}".lower(), tok.offset)
            if nxt is not None and nxt.text == "(":
                return self.parse_call(name.lower(), tok.offset)
            if nxt is not None and nxt.text == ".":
                self.advance()
                key = self.expect_identifier("property name").text
                return PropertyAccess(name, key)
            return Variable(name)

        raise ParseError(f"unexpected token {tok.text!r}", tok.offset)

    def parse_map_literal(self) -> MapLiteral:
        self.expect_symbol("{")
        entries: list[tuple[str, Expr]] = []
        if not self.match_symbol("}"):
            while True:
                key = self.expect_identifier("map key").text
                self.expect_symbol(":")
                entries.append((key, self.parse_expr()))
                if self.match_symbol("}"):
                    break
                self.expect_symbol(",")
        return MapLiteral(tuple(entries))

    def parse_call(self, name: str, offset: int) -> FunctionCall:
        if name not in KNOWN_FUNCTIONS:
            raise SemanticError(f"unknown function {name}()", offset)
        self.expect_symbol("(")
        if name == "count" and self.match_symbol("*"):
            self.expect_symbol(")")
            return FunctionCall("count", (), star=True)
        args: list[Expr] = []
        if not self.match_symbol(")"):
            while True:
                args.append(self.parse_expr())
                if self.match_symbol(")"):
                    break
                self.expect_symbol(",")
        arity = {"count": 1, "point": 1, "point.distance": 2}[name]
        if len(args) != arity:
            raise SemanticError(f"{name}() takes {arity} argument(s), got {len(args)}", offset)
        return FunctionCall(name, tuple(args))


def _validate(query: Query) -> None:
    node_vars, edge_vars = pattern_variables(query)
    shared = node_vars & edge_vars
    if shared:
        raise SemanticError(f"name used for both a node and a relationship: {sorted(shared)[0]}")
    seen_edge_vars: set[str] = set()
    for clause in query.matches:
        for path in clause.paths:
            for edge in path.edges:
                if edge.variable:
                    if edge.variable in seen_edge_vars:
                        raise SemanticError(
                            f"relationship variable {edge.variable!r} is bound more than once"
                        )
                    seen_edge_vars.add(edge.variable)
    bound = node_vars | edge_vars

    def check_bound(expr: Expr, context: str) -> None:
        unbound = expr_variables(expr) - bound
        if unbound:
            raise SemanticError(f"variable {sorted(unbound)[0]!r} in {context} is not bound by a MATCH pattern")

    if query.where is not None:
        check_bound(query.where, "WHERE")
        if contains_aggregate(query.where):
            raise SemanticError("aggregation is not allowed in WHERE")
    if not query.items:
        raise SemanticError("RETURN requires at least one item")
    for item in query.items:
        check_bound(item.expr, "RETURN")
        if contains_aggregate(item.expr) and not (
            isinstance(item.expr, FunctionCall) and item.expr.name == "count"
        ):
            raise SemanticError("count() must be a top-level RETURN item")
    for entry in query.order_by:
        if contains_aggregate(entry.expr):
            raise SemanticError("aggregation is not allowed in ORDER BY")
    if query.limit is not None and query.limit < 0:
        raise SemanticError("LIMIT must be non-negative")


def parse(tokens: list[Token], source: str | None = None) -> Query:
    """Parse a token stream into a query AST."""
    return _Parser(tokens, source).parse_query()


def parse_query(query_text: str) -> Query:
    """Tokenize and parse in one step."""
    return parse(tokenize(query_text), query_text)
