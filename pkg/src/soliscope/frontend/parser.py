"""Recursive-descent parser for the supported Solidity subset.

Anything outside the subset is a parse error, never a silent acceptance.
Binary expressions use precedence climbing over the published Solidity
operator table; compound assignments are kept intact (desugared later,
during IR lowering).
"""

from __future__ import annotations

from typing import Optional

from soliscope.errors import ParseError
from soliscope.frontend.astnodes import (
    Assignment,
    BinaryOp,
    Block,
    BoolLiteral,
    CallExpr,
    ContractDef,
    ContractKind,
    DataLocation,
    EmitStatement,
    EventDef,
    Expression,
    ExprStatement,
    ForStatement,
    FunctionDef,
    Identifier,
    IfStatement,
    IndexAccess,
    MemberAccess,
    ModifierDef,
    ModifierInvocation,
    NewExpr,
    NumberLiteral,
    PlaceholderStatement,
    ReturnStatement,
    SourceUnit,
    Statement,
    StringLiteral,
    StructDef,
    ThrowStatement,
    TupleExpr,
    TypeExpression,
    TypeKind,
    TypeName,
    UnaryOp,
    UsingDirective,
    VarDeclStatement,
    VariableDecl,
    VarScope,
    WhileStatement,
)
from soliscope.frontend.lexer import Token, TokenKind, tokenize

ELEMENTARY_NAMES = frozenset("address bool string bytes byte uint int".split())

# Binary operator groups in increasing precedence; assignment and unary
# operators are handled outside this table.
_BINARY_LEVELS = [
    ["||"],
    ["&&"],
    ["==", "!="],
    ["<", ">", "<=", ">="],
    ["|"],
    ["^"],
    ["&"],
    ["<<", ">>"],
    ["+", "-"],
    ["*", "/", "%"],
    ["**"],
]
_RIGHT_ASSOC = {"**"}
_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}

_MUTABILITY = {"payable", "view", "pure", "constant"}
_VISIBILITY = {"public", "external", "internal", "private"}


def _is_elementary_word(text: str) -> bool:
    if text in ELEMENTARY_NAMES:
        return True
    for prefix in ("uint", "int", "bytes"):
        if text.startswith(prefix) and text[len(prefix) :].isdigit():
            return True
    return False


class Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token helpers ------------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        i = min(self.pos + offset, len(self.tokens) - 1)
        return self.tokens[i]

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind is not TokenKind.EOF

    def at_kind(self, kind: TokenKind) -> bool:
        return self.peek().kind is kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not TokenKind.EOF:
            self.pos += 1
        return tok

    def accept(self, text: str) -> Optional[Token]:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str) -> Token:
        if self.at(text):
            return self.advance()
        return self._fail(f"expected '{text}'")

    def expect_identifier(self, what: str = "identifier") -> Token:
        if self.at_kind(TokenKind.IDENTIFIER):
            return self.advance()
        return self._fail(f"expected {what}")

    def _fail(self, expected: str):
        tok = self.peek()
        found = repr(tok.text) if tok.kind is not TokenKind.EOF else "end of input"
        raise ParseError(f"{expected}, found {found}", tok.span)

    def _prev_span(self):
        return self.tokens[max(0, self.pos - 1)].span

    # -- source unit --------------------------------------------------------

    def parse_unit(self) -> SourceUnit:
        start = self.peek().span
        pragmas: list[str] = []
        usings: list[UsingDirective] = []
        contracts: list[ContractDef] = []
        while not self.at_kind(TokenKind.EOF):
            if self.at("pragma"):
                pragmas.append(self._parse_pragma())
            elif self.at("import"):
                self._fail("import directives are not supported; expected contract")
            elif self.at("using"):
                usings.append(self._parse_using())
            elif self.at("contract") or self.at("interface") or self.at("library"):
                contracts.append(self._parse_contract())
            else:
                self._fail("expected contract, interface, or library")
        names = [c.name for c in contracts]
        for name in names:
            if names.count(name) > 1:
                raise ParseError(f"duplicate contract name '{name}'", start)
        return SourceUnit(start.cover(self._prev_span()), pragmas, usings, contracts)

    def _parse_pragma(self) -> str:
        self.expect("pragma")
        parts: list[str] = []
        prev_end = None
        while not self.at(";") and not self.at_kind(TokenKind.EOF):
            tok = self.advance()
            if prev_end is not None and tok.span.offset > prev_end:
                parts.append(" ")
            parts.append(tok.text)
            prev_end = tok.span.end
        self.expect(";")
        return "".join(parts)

    def _parse_using(self) -> UsingDirective:
        start = self.expect("using").span
        lib = self.expect_identifier("library name").text
        self.expect("for")
        target: Optional[TypeName]
        if self.accept("*"):
            target = None
        else:
            target = self._parse_type()
        self.expect(";")
        return UsingDirective(start.cover(self._prev_span()), lib, target)

    # -- contracts ----------------------------------------------------------

    def _parse_contract(self) -> ContractDef:
        start = self.peek().span
        kind = ContractKind(self.advance().text)
        name = self.expect_identifier("contract name").text
        bases: list[str] = []
        base_args: dict[str, list[Expression]] = {}
        if self.accept("is"):
            while True:
                base = self.expect_identifier("base contract name").text
                bases.append(base)
                if self.accept("("):
                    base_args[base] = self._parse_call_args()
                if not self.accept(","):
                    break
        self.expect("{")
        contract = ContractDef(start, name, kind, bases, base_args)
        while not self.at("}"):
            self._parse_contract_part(contract)
        self.expect("}")
        contract.span = start.cover(self._prev_span())
        for fn in contract.functions:
            if fn.name == name and not fn.is_constructor:
                fn.is_constructor = True  # pre-0.5 constructor style
        return contract

    def _parse_contract_part(self, contract: ContractDef) -> None:
        if self.at("function"):
            # Usually a definition; `function (uint) internal f;` declares a
            # function-typed state variable instead, so backtrack on failure.
            saved = self.pos
            try:
                contract.functions.append(self._parse_function(contract))
                return
            except ParseError:
                self.pos = saved
            contract.state_variables.append(self._parse_state_variable())
        elif self.at("constructor"):
            contract.functions.append(self._parse_function(contract))
        elif self.at("modifier"):
            contract.modifiers.append(self._parse_modifier(contract))
        elif self.at("struct"):
            contract.structs.append(self._parse_struct())
        elif self.at("event"):
            contract.events.append(self._parse_event())
        elif self.at("using"):
            contract.usings.append(self._parse_using())
        else:
            contract.state_variables.append(self._parse_state_variable())

    def _parse_state_variable(self) -> VariableDecl:
        start = self.peek().span
        vtype = self._parse_type()
        visibility = "internal"
        constant = False
        while True:
            if self.peek().text in _VISIBILITY:
                visibility = self.advance().text
            elif self.at("constant"):
                self.advance()
                constant = True
            else:
                break
        name = self.expect_identifier("state variable name").text
        init = None
        if self.accept("="):
            init = self.parse_expression()
        self.expect(";")
        if constant and init is None:
            raise ParseError(f"constant '{name}' lacks an initializer", start)
        return VariableDecl(
            start.cover(self._prev_span()),
            name,
            vtype,
            VarScope.STATE,
            visibility=visibility,
            is_constant=constant,
            initializer=init,
        )

    def _parse_struct(self) -> StructDef:
        start = self.expect("struct").span
        name = self.expect_identifier("struct name").text
        self.expect("{")
        fields = []
        while not self.at("}"):
            fstart = self.peek().span
            ftype = self._parse_type()
            fname = self.expect_identifier("field name").text
            self.expect(";")
            fields.append(
                VariableDecl(fstart.cover(self._prev_span()), fname, ftype, VarScope.LOCAL)
            )
        self.expect("}")
        return StructDef(start.cover(self._prev_span()), name, fields)

    def _parse_event(self) -> EventDef:
        start = self.expect("event").span
        name = self.expect_identifier("event name").text
        self.expect("(")
        params = []
        while not self.at(")"):
            pstart = self.peek().span
            ptype = self._parse_type()
            self.accept("indexed")
            pname = ""
            if self.at_kind(TokenKind.IDENTIFIER):
                pname = self.advance().text
            params.append(
                VariableDecl(pstart.cover(self._prev_span()), pname, ptype, VarScope.PARAMETER)
            )
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        self.expect(";")
        return EventDef(start.cover(self._prev_span()), name, params)

    def _parse_modifier(self, contract: ContractDef) -> ModifierDef:
        start = self.expect("modifier").span
        name = self.expect_identifier("modifier name").text
        params: list[VariableDecl] = []
        if self.at("("):
            params = self._parse_parameter_list(VarScope.PARAMETER)
        body = self._parse_block()
        mod = ModifierDef(start.cover(self._prev_span()), name, params, body)
        mod.contract = contract
        return mod

    def _parse_function(self, contract: ContractDef) -> FunctionDef:
        start = self.peek().span
        is_constructor = bool(self.accept("constructor"))
        name = ""
        if not is_constructor:
            self.expect("function")
            if self.at_kind(TokenKind.IDENTIFIER):
                name = self.advance().text
            else:
                name = "fallback"  # pre-0.5 unnamed fallback function
        params = self._parse_parameter_list(VarScope.PARAMETER)

        visibility = "public"
        payable = view = pure = False
        modifiers: list[ModifierInvocation] = []
        returns: list[VariableDecl] = []
        while True:
            tok = self.peek()
            if tok.text in _VISIBILITY:
                visibility = self.advance().text
            elif tok.text in _MUTABILITY:
                self.advance()
                if tok.text == "payable":
                    payable = True
                elif tok.text == "pure":
                    pure = True
                else:
                    view = True  # `constant` is the pre-0.5 spelling of view
            elif tok.text == "returns":
                self.advance()
                returns = self._parse_parameter_list(VarScope.RETURN)
            elif tok.kind is TokenKind.IDENTIFIER:
                mstart = self.advance()
                margs: list[Expression] = []
                if self.accept("("):
                    margs = self._parse_call_args()
                modifiers.append(
                    ModifierInvocation(mstart.span.cover(self._prev_span()), mstart.text, margs)
                )
            else:
                break

        body = None
        if not self.accept(";"):
            body = self._parse_block()
        if is_constructor and returns:
            raise ParseError("constructor cannot declare return values", start)
        if name == "fallback" and (params or returns or modifiers):
            # Unnamed with a signature: actually a function-typed state
            # variable; reject so the caller can re-parse it as one.
            raise ParseError("fallback function cannot take parameters", start)
        fn = FunctionDef(
            start.cover(self._prev_span()),
            "constructor" if is_constructor else name,
            params,
            returns,
            visibility=visibility,
            is_payable=payable,
            is_view=view,
            is_pure=pure,
            is_constructor=is_constructor,
            modifiers=modifiers,
            body=body,
        )
        fn.contract = contract
        return fn

    def _parse_parameter_list(self, scope: VarScope) -> list[VariableDecl]:
        self.expect("(")
        params: list[VariableDecl] = []
        while not self.at(")"):
            pstart = self.peek().span
            ptype = self._parse_type()
            location = DataLocation.DEFAULT
            if self.at("storage") or self.at("memory") or self.at("calldata"):
                word = self.advance().text
                location = DataLocation.STORAGE if word == "storage" else DataLocation.MEMORY
            pname = ""
            if self.at_kind(TokenKind.IDENTIFIER):
                pname = self.advance().text
            params.append(
                VariableDecl(
                    pstart.cover(self._prev_span()), pname, ptype, scope, location=location
                )
            )
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return params

    # -- types --------------------------------------------------------------

    def _at_type_start(self) -> bool:
        tok = self.peek()
        if tok.kind is TokenKind.KEYWORD:
            return _is_elementary_word(tok.text) or tok.text in ("mapping", "function")
        return tok.kind is TokenKind.IDENTIFIER

    def _parse_type(self) -> TypeName:
        tok = self.peek()
        if tok.text == "mapping":
            self.advance()
            self.expect("(")
            key = self._parse_type()
            if key.kind is not TypeKind.ELEMENTARY:
                raise ParseError("mapping keys must be elementary types", tok.span)
            self.expect("=>")
            value = self._parse_type()
            self.expect(")")
            base = TypeName(TypeKind.MAPPING, key=key, value=value)
        elif tok.text == "function":
            self.advance()
            self.expect("(")
            params = []
            while not self.at(")"):
                params.append(self._parse_type())
                if not self.at(")"):
                    self.expect(",")
            self.expect(")")
            while self.peek().text in _VISIBILITY or self.peek().text in _MUTABILITY:
                self.advance()
            rets = []
            if self.accept("returns"):
                self.expect("(")
                while not self.at(")"):
                    rets.append(self._parse_type())
                    if not self.at(")"):
                        self.expect(",")
                self.expect(")")
            base = TypeName(TypeKind.FUNCTION, params=params, returns=rets)
        elif tok.kind is TokenKind.KEYWORD and _is_elementary_word(tok.text):
            self.advance()
            base = TypeName.elementary(tok.text)
        elif tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            # Struct or contract reference; disambiguated during resolution.
            base = TypeName(TypeKind.STRUCT, tok.text)
        else:
            return self._fail("expected type name")

        while self.at("[") :
            self.advance()
            length = None
            if self.at_kind(TokenKind.NUMBER):
                length = int(self.advance().text, 0)
            self.expect("]")
            base = TypeName(TypeKind.ARRAY, value=base, length=length)
        return base

    # -- statements ----------------------------------------------------------

    def _parse_block(self) -> Block:
        start = self.expect("{").span
        statements = []
        while not self.at("}"):
            statements.append(self._parse_statement())
        self.expect("}")
        return Block(start.cover(self._prev_span()), statements)

    def _parse_statement(self) -> Statement:
        tok = self.peek()
        if tok.text == "{":
            return self._parse_block()
        if tok.text == "if":
            return self._parse_if()
        if tok.text == "while":
            return self._parse_while()
        if tok.text == "for":
            return self._parse_for()
        if tok.text == "return":
            return self._parse_return()
        if tok.text == "emit":
            return self._parse_emit()
        if tok.text == "throw":
            start = self.advance().span
            self.expect(";")
            return ThrowStatement(start.cover(self._prev_span()))
        if tok.text == "_" and self.peek(1).text == ";":
            start = self.advance().span
            self.expect(";")
            return PlaceholderStatement(start.cover(self._prev_span()))
        if tok.text in ("break", "continue", "delete", "assembly", "try", "do"):
            self._fail(f"'{tok.text}' is outside the supported subset; expected statement")
        return self._parse_decl_or_expr_statement()

    def _parse_decl_or_expr_statement(self) -> Statement:
        saved = self.pos
        if self._at_type_start() or self.at("("):
            try:
                return self._parse_var_decl_statement()
            except ParseError:
                self.pos = saved
        start = self.peek().span
        expr = self.parse_expression()
        self.expect(";")
        return ExprStatement(start.cover(self._prev_span()), expr)

    def _parse_var_decl_statement(self) -> VarDeclStatement:
        start = self.peek().span
        if self.at("("):
            # Tuple declaration: (uint a, uint b) = f();
            self.advance()
            decls = []
            while not self.at(")"):
                decls.append(self._parse_local_decl())
                if not self.at(")"):
                    self.expect(",")
            self.expect(")")
            self.expect("=")
            init = self.parse_expression()
            self.expect(";")
            if not decls:
                raise ParseError("empty tuple declaration", start)
            return VarDeclStatement(start.cover(self._prev_span()), decls, init)

        decl = self._parse_local_decl()
        init = None
        if self.accept("="):
            init = self.parse_expression()
        self.expect(";")
        decl.initializer = init
        if decl.location is DataLocation.STORAGE:
            ref_kinds = (TypeKind.STRUCT, TypeKind.ARRAY, TypeKind.MAPPING)
            if decl.type.kind not in ref_kinds:
                raise ParseError("'storage' location requires a reference type", decl.span)
        return VarDeclStatement(start.cover(self._prev_span()), [decl], init)

    def _parse_local_decl(self) -> VariableDecl:
        start = self.peek().span
        vtype = self._parse_type()
        location = DataLocation.DEFAULT
        if self.at("storage") or self.at("memory"):
            location = DataLocation(self.advance().text)
        name = self.expect_identifier("variable name").text
        return VariableDecl(
            start.cover(self._prev_span()), name, vtype, VarScope.LOCAL, location=location
        )

    def _parse_if(self) -> IfStatement:
        start = self.expect("if").span
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        then_branch = self._parse_statement()
        else_branch = None
        if self.accept("else"):
            else_branch = self._parse_statement()
        return IfStatement(start.cover(self._prev_span()), cond, then_branch, else_branch)

    def _parse_while(self) -> WhileStatement:
        start = self.expect("while").span
        self.expect("(")
        cond = self.parse_expression()
        self.expect(")")
        body = self._parse_statement()
        return WhileStatement(start.cover(self._prev_span()), cond, body)

    def _parse_for(self) -> ForStatement:
        start = self.expect("for").span
        self.expect("(")
        init: Optional[Statement] = None
        if not self.accept(";"):
            init = self._parse_decl_or_expr_statement()
        cond = None
        if not self.at(";"):
            cond = self.parse_expression()
        self.expect(";")
        post = None
        if not self.at(")"):
            post = self.parse_expression()
        self.expect(")")
        body = self._parse_statement()
        return ForStatement(start.cover(self._prev_span()), init, cond, post, body)

    def _parse_return(self) -> ReturnStatement:
        start = self.expect("return").span
        values: list[Expression] = []
        if not self.at(";"):
            expr = self.parse_expression()
            if isinstance(expr, TupleExpr) and all(i is not None for i in expr.items):
                values = list(expr.items)  # type: ignore[arg-type]
            else:
                values = [expr]
        self.expect(";")
        return ReturnStatement(start.cover(self._prev_span()), values)

    def _parse_emit(self) -> EmitStatement:
        start = self.expect("emit").span
        expr = self.parse_expression()
        if not isinstance(expr, CallExpr):
            raise ParseError("emit requires an event call", start)
        self.expect(";")
        return EmitStatement(start.cover(self._prev_span()), expr)

    # -- expressions ----------------------------------------------------------

    def parse_expression(self) -> Expression:
        left = self._parse_binary(0)
        tok = self.peek()
        if tok.text in _ASSIGN_OPS and tok.kind is TokenKind.OPERATOR:
            if not isinstance(left, (Identifier, IndexAccess, MemberAccess, TupleExpr)):
                raise ParseError("assignment target is not an lvalue", tok.span)
            self.advance()
            value = self.parse_expression()  # right-associative
            return Assignment(left.span.cover(value.span), tok.text, left, value)
        return left

    def _parse_binary(self, level: int) -> Expression:
        if level >= len(_BINARY_LEVELS):
            return self._parse_unary()
        ops = _BINARY_LEVELS[level]
        left = self._parse_binary(level + 1)
        while self.peek().text in ops and self.peek().kind is TokenKind.OPERATOR:
            op = self.advance().text
            if op in _RIGHT_ASSOC:
                right = self._parse_binary(level)
            else:
                right = self._parse_binary(level + 1)
            left = BinaryOp(left.span.cover(right.span), op, left, right)
            if op in _RIGHT_ASSOC:
                break
        return left

    def _parse_unary(self) -> Expression:
        tok = self.peek()
        if tok.text in ("!", "~", "-") and tok.kind is TokenKind.OPERATOR:
            self.advance()
            operand = self._parse_unary()
            return UnaryOp(tok.span.cover(operand.span), tok.text, operand)
        if tok.text in ("++", "--"):
            self._fail("increment/decrement is outside the supported subset; expected expression")
        return self._parse_postfix()

    def _parse_postfix(self) -> Expression:
        expr = self._parse_primary()
        while True:
            if self.at("("):
                self.advance()
                args = self._parse_call_args()
                expr = CallExpr(expr.span.cover(self._prev_span()), expr, args)
            elif self.at("["):
                self.advance()
                index = self.parse_expression()
                self.expect("]")
                expr = IndexAccess(expr.span.cover(self._prev_span()), expr, index)
            elif self.at(".") and self.peek().kind is TokenKind.OPERATOR:
                self.advance()
                member = self.advance()
                if member.kind not in (TokenKind.IDENTIFIER, TokenKind.KEYWORD):
                    raise ParseError("expected member name", member.span)
                expr = MemberAccess(expr.span.cover(member.span), expr, member.text)
            else:
                return expr

    def _parse_call_args(self) -> list[Expression]:
        """Arguments after an already-consumed '('."""
        args = []
        while not self.at(")"):
            args.append(self.parse_expression())
            if not self.at(")"):
                self.expect(",")
        self.expect(")")
        return args

    def _parse_primary(self) -> Expression:
        tok = self.peek()
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return NumberLiteral(tok.span, int(tok.text, 0))
        if tok.kind is TokenKind.STRING:
            self.advance()
            return StringLiteral(tok.span, tok.text[1:-1])
        if tok.text in ("true", "false"):
            self.advance()
            return BoolLiteral(tok.span, tok.text == "true")
        if tok.text == "new":
            self.advance()
            ntype = self._parse_type()
            self.expect("(")
            args = self._parse_call_args()
            return NewExpr(tok.span.cover(self._prev_span()), ntype, args)
        if tok.kind is TokenKind.KEYWORD and _is_elementary_word(tok.text):
            self.advance()
            return TypeExpression(tok.span, TypeName.elementary(tok.text))
        if tok.kind is TokenKind.IDENTIFIER:
            self.advance()
            return Identifier(tok.span, tok.text)
        if tok.text == "(":
            self.advance()
            items: list[Optional[Expression]] = []
            expect_item = True
            while not self.at(")"):
                if self.at(","):
                    self.advance()
                    if expect_item:
                        items.append(None)
                    expect_item = True
                    continue
                items.append(self.parse_expression())
                expect_item = False
            self.expect(")")
            if len(items) == 1 and items[0] is not None:
                items[0].span = tok.span.cover(self._prev_span())
                return items[0]
            return TupleExpr(tok.span.cover(self._prev_span()), items)
        if tok.text == "?":
            self._fail("ternary operator is outside the supported subset; expected expression")
        return self._fail("expected expression")


def parse(tokens: list[Token]) -> SourceUnit:
    """Parse a token stream (from tokenize) into a SourceUnit."""
    return Parser(tokens).parse_unit()


def parse_source(source: str, filename: str = "<input>") -> SourceUnit:
    return parse(tokenize(source, filename))
