import pytest
from hypothesis import given, strategies as st

from soliscope.errors import LexicalError
from soliscope.frontend.lexer import Token, TokenKind, tokenize

from conftest import read_fixture


def kinds(tokens: list[Token]) -> list[str]:
    return [t.kind.value for t in tokens if t.kind is not TokenKind.EOF]


def texts(tokens: list[Token]) -> list[str]:
    return [t.text for t in tokens if t.kind is not TokenKind.EOF]


def test_simple_declaration():
    tokens = tokenize("uint x = 3;")
    assert kinds(tokens) == [
        "keyword", "identifier", "operator", "number-literal", "punctuation",
    ]
    assert texts(tokens) == ["uint", "x", "=", "3", ";"]


def test_empty_input():
    tokens = tokenize("")
    assert len(tokens) == 1
    assert tokens[0].kind is TokenKind.EOF


def test_fig3_member_chain():
    source = read_fixture("figures", "fig3.sol")
    stream = texts(tokenize(source))
    joined = " ".join(stream)
    assert "msg . sender . call . value" in joined
    assert "balances [ msg . sender ]" in joined


def test_spans_order_and_coverage():
    source = "contract C { uint x; } // tail\n"
    tokens = tokenize(source)
    last_end = 0
    for token in tokens[:-1]:
        assert token.span.offset >= last_end
        last_end = token.span.end
        assert source[token.span.offset : token.span.end] == token.text


def assert_round_trip(source: str) -> None:
    """Tokens plus skipped trivia must reconstruct the input exactly."""
    tokens = tokenize(source)
    rebuilt = []
    pos = 0
    for token in tokens:
        if token.kind is TokenKind.EOF:
            break
        rebuilt.append(source[pos : token.span.offset])  # trivia
        rebuilt.append(token.text)
        pos = token.span.end
    rebuilt.append(source[pos:])
    assert "".join(rebuilt) == source
    # trivia really is only whitespace or comments
    tokens_covered = sorted((t.span.offset, t.span.end) for t in tokens[:-1])
    cursor = 0
    for start, end in tokens_covered:
        gap = source[cursor:start]
        assert gap.strip() == "" or "//" in gap or "/*" in gap
        cursor = end


def test_round_trip_fixture_corpus():
    for name in ("fig3.sol", "fig4.sol", "fig6.sol"):
        assert_round_trip(read_fixture("figures", name))


@given(st.text(alphabet=st.sampled_from(list("abz_ 019+-*/=<>!;(){}[].,\n\t")), max_size=80))
def test_round_trip_generated(source):
    try:
        assert_round_trip(source)
    except LexicalError:
        pass  # rejecting is fine; accepting must round-trip


@pytest.mark.parametrize("source,message", [
    ('"never closed', "unterminated string"),
    ("/* never closed", "unterminated comment"),
    ("uint § x;", "illegal character"),
])
def test_lexical_errors_carry_spans(source, message):
    with pytest.raises(LexicalError) as err:
        tokenize(source)
    assert message in str(err.value)
    assert err.value.span is not None


def test_number_forms():
    tokens = tokenize("0x1F 42 007")
    assert texts(tokens) == ["0x1F", "42", "007"]
    assert all(k == "number-literal" for k in kinds(tokens))


def test_sized_elementary_types_are_keywords():
    tokens = tokenize("uint256 bytes32 int8 customName")
    assert kinds(tokens) == ["keyword", "keyword", "keyword", "identifier"]
