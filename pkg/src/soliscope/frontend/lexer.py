"""Tokenizer for the supported Solidity subset.

Tokens carry exact byte spans; concatenating token texts with the skipped
trivia (whitespace and comments) reconstructs the input byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from soliscope.errors import LexicalError
from soliscope.sourcemap import SourceFile, Span


class TokenKind(Enum):
    KEYWORD = "keyword"
    IDENTIFIER = "identifier"
    NUMBER = "number-literal"
    STRING = "string-literal"
    PUNCTUATION = "punctuation"
    OPERATOR = "operator"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span

    def __repr__(self) -> str:
        return f"Token({self.kind.value}, {self.text!r})"


KEYWORDS = frozenset(
    """
    contract interface library is struct event modifier function constructor
    public external internal private payable view pure constant
    storage memory calldata mapping returns return if else while for
    emit throw using pragma import new delete true false indexed
    """.split()
)

# Elementary type names are keywords too; uintN/intN/bytesN matched by shape.
ELEMENTARY_KEYWORDS = frozenset("address bool string bytes byte uint int".split())

PUNCTUATION = frozenset("(){}[];,")

# Longest match first.
OPERATORS = [
    "<<=", ">>=", "**",
    "++", "--", "&&", "||", "==", "!=", "<=", ">=", "<<", ">>",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "=>",
    "+", "-", "*", "/", "%", "&", "|", "^", "~", "!", "<", ">", "=", ".", "?", ":",
]

_IDENT_START = frozenset("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


def _is_sized_elementary(word: str) -> bool:
    for prefix in ("uint", "int", "bytes"):
        if word.startswith(prefix) and word[len(prefix) :].isdigit():
            return True
    return False


def tokenize(source: str, filename: str = "<input>") -> list[Token]:
    """Lex the source into tokens; raises LexicalError with a span."""
    sf = SourceFile(filename, source)
    tokens: list[Token] = []
    pos = 0
    n = len(source)

    def span(start: int, end: int) -> Span:
        return sf.span(start, end - start)

    while pos < n:
        ch = source[pos]

        if ch in " \t\r\n":
            pos += 1
            continue

        if ch == "/" and pos + 1 < n and source[pos + 1] == "/":
            while pos < n and source[pos] != "\n":
                pos += 1
            continue

        if ch == "/" and pos + 1 < n and source[pos + 1] == "*":
            end = source.find("*/", pos + 2)
            if end < 0:
                raise LexicalError("unterminated comment", span(pos, n))
            pos = end + 2
            continue

        start = pos

        if ch in "\"'":
            pos += 1
            while pos < n and source[pos] != ch:
                if source[pos] == "\n":
                    raise LexicalError("unterminated string", span(start, pos))
                if source[pos] == "\\":
                    pos += 1
                pos += 1
            if pos >= n:
                raise LexicalError("unterminated string", span(start, n))
            pos += 1
            tokens.append(Token(TokenKind.STRING, source[start:pos], span(start, pos)))
            continue

        if ch.isdigit():
            if ch == "0" and pos + 1 < n and source[pos + 1] in "xX":
                pos += 2
                while pos < n and source[pos] in _HEX_DIGITS:
                    pos += 1
            else:
                while pos < n and source[pos].isdigit():
                    pos += 1
            tokens.append(Token(TokenKind.NUMBER, source[start:pos], span(start, pos)))
            continue

        if ch in _IDENT_START:
            while pos < n and source[pos] in _IDENT_CONT:
                pos += 1
            word = source[start:pos]
            if word in KEYWORDS or word in ELEMENTARY_KEYWORDS or _is_sized_elementary(word):
                kind = TokenKind.KEYWORD
            else:
                kind = TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, span(start, pos)))
            continue

        if ch in PUNCTUATION:
            pos += 1
            tokens.append(Token(TokenKind.PUNCTUATION, ch, span(start, pos)))
            continue

        for op in OPERATORS:
            if source.startswith(op, pos):
                pos += len(op)
                tokens.append(Token(TokenKind.OPERATOR, op, span(start, pos)))
                break
        else:
            raise LexicalError(f"illegal character {ch!r}", span(pos, pos + 1))

    tokens.append(Token(TokenKind.EOF, "", sf.span(n, 0)))
    return tokens
