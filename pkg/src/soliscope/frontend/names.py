"""Name resolution: scopes, builtins, shadow pairs, per-contract symbol tables.

Variables bind lexically in the defining contract's view; internal call
targets are re-resolved per analysis contract during lowering so overrides
dispatch virtually.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from soliscope.errors import ResolutionError
from soliscope.frontend.astnodes import (
    Assignment,
    BinaryOp,
    Block,
    CallExpr,
    ContractDef,
    ContractKind,
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
    NewExpr,
    NumberLiteral,
    ReturnStatement,
    SourceUnit,
    Statement,
    StructDef,
    TupleExpr,
    TypeKind,
    TypeName,
    UnaryOp,
    VarDeclStatement,
    VariableDecl,
    WhileStatement,
)
from soliscope.frontend.inheritance import (
    effective_functions,
    effective_modifiers,
    inherited_state_variables,
)


@dataclass(frozen=True)
class Builtin:
    """Marker binding for msg/tx/block/this and inbuilt functions."""

    name: str

    def __repr__(self) -> str:
        return f"Builtin({self.name})"


BUILTIN_VARIABLES = {name: Builtin(name) for name in ("msg", "tx", "block", "this", "super")}
BUILTIN_FUNCTIONS = {
    name: Builtin(name)
    for name in (
        "require",
        "assert",
        "revert",
        "selfdestruct",
        "keccak256",
        "sha256",
        "sha3",
        "ecrecover",
        "addmod",
        "mulmod",
    )
}
# Names whose reuse as a declaration is worth reporting.
SHADOWABLE_BUILTINS = frozenset(
    list(BUILTIN_VARIABLES) + list(BUILTIN_FUNCTIONS) + ["transfer", "send", "call"]
)

BUILTIN_MEMBERS = {
    ("msg", "sender"): TypeName.elementary("address"),
    ("msg", "value"): TypeName.elementary("uint256"),
    ("msg", "data"): TypeName.elementary("bytes"),
    ("tx", "origin"): TypeName.elementary("address"),
    ("block", "timestamp"): TypeName.elementary("uint256"),
    ("block", "number"): TypeName.elementary("uint256"),
}

Binding = Union[VariableDecl, FunctionDef, StructDef, EventDef, ContractDef, Builtin]


@dataclass
class ShadowPair:
    inner: object
    outer: object
    kind: str  # state-over-state | local-over-state | builtin

    def names(self) -> tuple[str, str]:
        inner = getattr(self.inner, "name", str(self.inner))
        outer = getattr(self.outer, "name", str(self.outer))
        return inner, outer


class _Scope:
    def __init__(self, parent: Optional["_Scope"] = None):
        self.parent = parent
        self.defs: dict[str, Binding] = {}

    def lookup(self, name: str) -> Optional[Binding]:
        scope: Optional[_Scope] = self
        while scope is not None:
            if name in scope.defs:
                return scope.defs[name]
            scope = scope.parent
        return None

    def define(self, name: str, binding: Binding) -> Optional[Binding]:
        previous = self.lookup(name)
        self.defs[name] = binding
        return previous


@dataclass
class SymbolTable:
    """Resolved view of one contract: lookups for lowering plus shadow pairs."""

    contract: ContractDef
    unit: SourceUnit
    state_variables: list[VariableDecl] = field(default_factory=list)
    functions: list[FunctionDef] = field(default_factory=list)
    modifiers: dict[str, ModifierDef] = field(default_factory=dict)
    structs: dict[str, StructDef] = field(default_factory=dict)
    events: dict[str, EventDef] = field(default_factory=dict)
    usings: list[tuple[str, Optional[TypeName]]] = field(default_factory=list)
    shadow_pairs: list[ShadowPair] = field(default_factory=list)

    def function_by_name(self, name: str) -> Optional[FunctionDef]:
        for fn in self.functions:
            if fn.name == name and not fn.is_constructor:
                return fn
        return None

    def state_by_name(self, name: str) -> Optional[VariableDecl]:
        # Most-derived declaration wins on name clashes.
        for var in reversed(self.state_variables):
            if var.name == name:
                return var
        return None

    def library(self, name: str) -> Optional[ContractDef]:
        c = self.unit.contract(name)
        if c is not None and c.kind is ContractKind.LIBRARY:
            return c
        return None

    def libraries_for(self, target: TypeName) -> list[ContractDef]:
        """Libraries attached to the type via using-for (specific before *)."""
        out = []
        for lib_name, bound in self.usings:
            if bound is None or bound == target:
                lib = self.library(lib_name)
                if lib is not None and lib not in out:
                    out.append(lib)
        return out


class _Resolver:
    def __init__(self, table: SymbolTable):
        self.table = table

    def resolve_contract(self) -> None:
        contract = self.table.contract
        top = self._contract_scope()

        for var in self.table.state_variables:
            self._resolve_type(var.type)
        for struct in self.table.structs.values():
            for field_decl in struct.fields:
                self._resolve_type(field_decl.type)
        for var in contract.state_variables:
            if var.initializer is not None:
                self._expr(var.initializer, top)

        for fn in contract.functions:
            self._function(fn, top)
        for mod in contract.modifiers:
            if mod.body is not None:
                scope = _Scope(top)
                self._define_params(mod.parameters, scope)
                self._block(mod.body, scope)

    def _contract_scope(self) -> _Scope:
        table = self.table
        root = _Scope()
        for name, builtin in {**BUILTIN_VARIABLES, **BUILTIN_FUNCTIONS}.items():
            root.defs[name] = builtin
        unit_scope = _Scope(root)
        for c in table.unit.contracts:
            unit_scope.defs[c.name] = c
        scope = _Scope(unit_scope)
        # Base-most first so derived redeclarations surface as shadow pairs.
        for c in reversed(table.contract.linearization):
            for struct in c.structs:
                scope.defs[struct.name] = struct
            for event in c.events:
                scope.defs[event.name] = event
            for fn in c.functions:
                if not fn.is_constructor:
                    scope.defs.setdefault(fn.name, fn)
        for var in table.state_variables:
            previous = scope.define(var.name, var)
            if isinstance(previous, VariableDecl):
                self.table.shadow_pairs.append(ShadowPair(var, previous, "state-over-state"))
        return scope

    def _function(self, fn: FunctionDef, contract_scope: _Scope) -> None:
        scope = _Scope(contract_scope)
        self._define_params(fn.parameters, scope)
        self._define_params(fn.returns, scope)
        for inv in fn.modifiers:
            for arg in inv.args:
                self._expr(arg, scope)
        if fn.body is not None:
            self._block(fn.body, scope)

    def _define_params(self, params: list[VariableDecl], scope: _Scope) -> None:
        for p in params:
            self._resolve_type(p.type)
            if not p.name:
                continue
            self._note_shadow(p, scope.define(p.name, p))

    def _note_shadow(self, decl: VariableDecl, previous: Optional[Binding]) -> None:
        if decl.name in SHADOWABLE_BUILTINS:
            self.table.shadow_pairs.append(
                ShadowPair(decl, Builtin(decl.name), "builtin")
            )
            return
        if isinstance(previous, VariableDecl):
            kind = "local-over-state" if previous.scope.value == "state" else "local-over-local"
            self.table.shadow_pairs.append(ShadowPair(decl, previous, kind))

    def _block(self, block: Block, parent: _Scope) -> None:
        scope = _Scope(parent)
        for stmt in block.statements:
            self._statement(stmt, scope)

    def _statement(self, stmt: Statement, scope: _Scope) -> None:
        if isinstance(stmt, Block):
            self._block(stmt, scope)
        elif isinstance(stmt, VarDeclStatement):
            if stmt.initializer is not None:
                self._expr(stmt.initializer, scope)
            for decl in stmt.declarations:
                self._resolve_type(decl.type)
                self._note_shadow(decl, scope.define(decl.name, decl))
        elif isinstance(stmt, ExprStatement):
            self._expr(stmt.expression, scope)
        elif isinstance(stmt, IfStatement):
            self._expr(stmt.condition, scope)
            self._statement(stmt.then_branch, _Scope(scope))
            if stmt.else_branch is not None:
                self._statement(stmt.else_branch, _Scope(scope))
        elif isinstance(stmt, WhileStatement):
            self._expr(stmt.condition, scope)
            self._statement(stmt.body, _Scope(scope))
        elif isinstance(stmt, ForStatement):
            inner = _Scope(scope)
            if stmt.init is not None:
                self._statement(stmt.init, inner)
            if stmt.condition is not None:
                self._expr(stmt.condition, inner)
            if stmt.post is not None:
                self._expr(stmt.post, inner)
            self._statement(stmt.body, _Scope(inner))
        elif isinstance(stmt, ReturnStatement):
            for value in stmt.values:
                self._expr(value, scope)
        elif isinstance(stmt, EmitStatement):
            self._expr(stmt.call, scope)

    def _expr(self, expr: Expression, scope: _Scope) -> None:
        if isinstance(expr, Identifier):
            binding = scope.lookup(expr.name)
            if binding is None:
                raise ResolutionError(f"unresolved identifier '{expr.name}'", expr.span)
            expr.binding = binding
        elif isinstance(expr, (BinaryOp,)):
            self._expr(expr.left, scope)
            self._expr(expr.right, scope)
        elif isinstance(expr, UnaryOp):
            self._expr(expr.operand, scope)
        elif isinstance(expr, Assignment):
            self._expr(expr.target, scope)
            self._expr(expr.value, scope)
        elif isinstance(expr, IndexAccess):
            self._expr(expr.base, scope)
            self._expr(expr.index, scope)
        elif isinstance(expr, MemberAccess):
            self._expr(expr.base, scope)
        elif isinstance(expr, CallExpr):
            self._expr(expr.callee, scope)
            for arg in expr.args:
                self._expr(arg, scope)
        elif isinstance(expr, TupleExpr):
            for item in expr.items:
                if item is not None:
                    self._expr(item, scope)
        elif isinstance(expr, NewExpr):
            self._resolve_type(expr.type)
            for arg in expr.args:
                self._expr(arg, scope)
        # literals and type expressions have nothing to resolve

    def _resolve_type(self, t: TypeName) -> None:
        """Fix user-type kinds: struct reference or contract reference."""
        if t.kind is TypeKind.STRUCT:
            name = t.name
            if name in self.table.structs:
                return
            c = self.table.unit.contract(name)
            if c is not None:
                t.kind = TypeKind.CONTRACT
                return
            raise ResolutionError(f"unknown type name '{name}'")
        for child in (t.key, t.value):
            if child is not None:
                self._resolve_type(child)


def resolve_names(contract: ContractDef, unit: SourceUnit) -> SymbolTable:
    """Build the contract's symbol table and bind its own identifiers."""
    table = SymbolTable(contract, unit)
    table.state_variables = inherited_state_variables(contract)
    table.functions = effective_functions(contract)
    table.modifiers = effective_modifiers(contract)
    for c in reversed(contract.linearization):
        for struct in c.structs:
            table.structs.setdefault(struct.name, struct)
        for event in c.events:
            table.events.setdefault(event.name, event)
        for using in c.usings:
            table.usings.append((using.library, using.target))
    for using in unit.usings:
        table.usings.append((using.library, using.target))
    _Resolver(table).resolve_contract()
    return table


def resolve_unit(unit: SourceUnit) -> dict[str, SymbolTable]:
    """Resolve every contract; inheritance must already be linearized."""
    return {c.name: resolve_names(c, unit) for c in unit.contracts}
