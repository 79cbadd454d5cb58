"""Frontend: lexer, parser, inheritance and name resolution."""

from soliscope.frontend.lexer import Token, TokenKind, tokenize
from soliscope.frontend.parser import parse, parse_source
from soliscope.frontend.inheritance import resolve_inheritance
from soliscope.frontend.names import resolve_names, resolve_unit, SymbolTable

__all__ = [
    "Token",
    "TokenKind",
    "tokenize",
    "parse",
    "parse_source",
    "resolve_inheritance",
    "resolve_names",
    "resolve_unit",
    "SymbolTable",
]
