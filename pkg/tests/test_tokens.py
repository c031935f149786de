import pytest

from graphqa.cypher import tokenize
from graphqa.errors import LexError

REFERENCE_QUERY = "MATCH (t:Tower {Tower: 4}) RETURN t.Lat AS Lat, t.Long AS Long"


def test_trivial_return_one():
    tokens = tokenize("RETURN 1")
    assert [(t.kind, t.text) for t in tokens] == [("keyword", "RETURN"), ("integer", "1")]


def test_tower_query_token_sequence_hand_derived():
    # Hand-tokenized expectation for the reference tower-4 query.
    expected = [
        ("keyword", "MATCH"),
        ("symbol", "("),
        ("identifier", "t"),
        ("symbol", ":"),
        ("identifier", "Tower"),
        ("symbol", "{"),
        ("identifier", "Tower"),
        ("symbol", ":"),
        ("integer", "4"),
        ("symbol", "}"),
        ("symbol", ")"),
        ("keyword", "RETURN"),
        ("identifier", "t"),
        ("symbol", "."),
        ("identifier", "Lat"),
        ("keyword", "AS"),
        ("identifier", "Lat"),
        ("symbol", ","),
        ("identifier", "t"),
        ("symbol", "."),
        ("identifier", "Long"),
        ("keyword", "AS"),
        ("identifier", "Long"),
    ]
    tokens = tokenize(REFERENCE_QUERY)
    assert [(t.kind, t.text) for t in tokens] == expected
    assert tokens[0].kind == "keyword" and tokens[0].text == "MATCH"
    assert len(tokens) == 23


def test_tokens_are_lossless_source_slices():
    queries = [
        REFERENCE_QUERY,
        "MATCH (a)-[:R]->(b) WHERE a.p <= -3.5e2 RETURN DISTINCT a.p AS x ORDER BY x DESC LIMIT 2;",
        "RETURN 'a  b', \"it's\", 1.5, true // trailing comment",
    ]
    for query in queries:
        rebuilt = list(query)
        for token in tokenize(query):
            # Each token's text must be exactly the source at its offset.
            assert query[token.offset : token.offset + len(token.text)] == token.text
            for idx in range(token.offset, token.offset + len(token.text)):
                rebuilt[idx] = None
        # Whatever tokens did not cover must be whitespace or comments.
        rest = "".join(ch for ch in rebuilt if ch is not None)
        assert all(ch.isspace() or ch == "/" for ch in rest) or "//" in query


def test_keywords_recognized_case_insensitively():
    tokens = tokenize("match (n) return n")
    assert tokens[0].kind == "keyword" and tokens[0].upper() == "MATCH"


def test_numbers_and_floats():
    kinds = [(t.kind, t.text) for t in tokenize("1 2.5 3e2 4.5e-1")]
    assert kinds == [("integer", "1"), ("float", "2.5"), ("float", "3e2"), ("float", "4.5e-1")]


def test_two_char_symbols():
    kinds = [(t.kind, t.text) for t in tokenize("a <= b >= c <> d < e > f")]
    symbols = [text for kind, text in kinds if kind == "symbol"]
    assert symbols == ["<=", ">=", "<>", "<", ">"]


def test_string_escapes():
    from graphqa.cypher.tokens import unescape_string

    (token,) = tokenize(r"'it\'s'")
    assert token.kind == "string"
    assert unescape_string(token.text) == "it's"


def test_unterminated_string_is_lex_error_with_offset():
    with pytest.raises(LexError) as excinfo:
        tokenize("MATCH (n) RETURN 'oops")
    assert excinfo.value.offset == 17


def test_illegal_character_is_lex_error():
    with pytest.raises(LexError) as excinfo:
        tokenize("MATCH (n) RETURN n ^ 2")
    assert excinfo.value.kind == "lex"
