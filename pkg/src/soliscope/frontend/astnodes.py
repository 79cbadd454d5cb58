"""Typed syntax tree for the supported Solidity subset.

Every node carries a span; child spans lie inside their parent's span.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from soliscope.sourcemap import Span


# ---------------------------------------------------------------------------
# Types


class TypeKind(Enum):
    ELEMENTARY = "elementary"
    MAPPING = "mapping"
    ARRAY = "array"
    STRUCT = "struct"
    CONTRACT = "contract"
    FUNCTION = "function"


_CANONICAL = {"uint": "uint256", "int": "int256", "byte": "bytes1"}


@dataclass
class TypeName:
    kind: TypeKind
    name: str = ""                      # canonical elementary name or user-type name
    key: Optional["TypeName"] = None    # mapping key
    value: Optional["TypeName"] = None  # mapping value / array element
    length: Optional[int] = None        # static array length; None = dynamic
    params: list["TypeName"] = field(default_factory=list)   # function type
    returns: list["TypeName"] = field(default_factory=list)  # function type

    @staticmethod
    def elementary(name: str) -> "TypeName":
        return TypeName(TypeKind.ELEMENTARY, _CANONICAL.get(name, name))

    def __str__(self) -> str:
        if self.kind is TypeKind.MAPPING:
            return f"mapping({self.key} => {self.value})"
        if self.kind is TypeKind.ARRAY:
            length = "" if self.length is None else str(self.length)
            return f"{self.value}[{length}]"
        if self.kind is TypeKind.FUNCTION:
            params = ",".join(str(p) for p in self.params)
            if self.returns:
                rets = ",".join(str(r) for r in self.returns)
                return f"function({params}) returns({rets})"
            return f"function({params})"
        return self.name

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TypeName) and str(self) == str(other)

    def __hash__(self) -> int:
        return hash(str(self))


# ---------------------------------------------------------------------------
# Expressions


@dataclass
class Expression:
    span: Span


@dataclass
class Identifier(Expression):
    name: str
    binding: object = None  # filled by name resolution


@dataclass
class NumberLiteral(Expression):
    value: int


@dataclass
class StringLiteral(Expression):
    value: str


@dataclass
class BoolLiteral(Expression):
    value: bool


@dataclass
class TypeExpression(Expression):
    """An elementary type used in expression position, e.g. address(0)."""

    type: TypeName


@dataclass
class BinaryOp(Expression):
    op: str
    left: Expression
    right: Expression


@dataclass
class UnaryOp(Expression):
    op: str
    operand: Expression


@dataclass
class Assignment(Expression):
    op: str  # "=", "+=", "-=", ...
    target: Expression
    value: Expression


@dataclass
class IndexAccess(Expression):
    base: Expression
    index: Expression


@dataclass
class MemberAccess(Expression):
    base: Expression
    member: str


@dataclass
class CallExpr(Expression):
    callee: Expression
    args: list[Expression]


@dataclass
class TupleExpr(Expression):
    items: list[Optional[Expression]]  # None for skipped slots


@dataclass
class NewExpr(Expression):
    type: TypeName
    args: list[Expression]


# ---------------------------------------------------------------------------
# Statements


@dataclass
class Statement:
    span: Span


@dataclass
class Block(Statement):
    statements: list[Statement]


@dataclass
class VarDeclStatement(Statement):
    declarations: list["VariableDecl"]  # >1 for tuple declarations
    initializer: Optional[Expression]


@dataclass
class ExprStatement(Statement):
    expression: Expression


@dataclass
class IfStatement(Statement):
    condition: Expression
    then_branch: Statement
    else_branch: Optional[Statement]


@dataclass
class WhileStatement(Statement):
    condition: Expression
    body: Statement


@dataclass
class ForStatement(Statement):
    init: Optional[Statement]
    condition: Optional[Expression]
    post: Optional[Expression]
    body: Statement


@dataclass
class ReturnStatement(Statement):
    values: list[Expression]


@dataclass
class EmitStatement(Statement):
    call: CallExpr


@dataclass
class ThrowStatement(Statement):
    pass


@dataclass
class PlaceholderStatement(Statement):
    """The `_;` marker inside a modifier body."""


# ---------------------------------------------------------------------------
# Declarations


class VarScope(Enum):
    STATE = "state"
    LOCAL = "local"
    PARAMETER = "parameter"
    RETURN = "return"


class DataLocation(Enum):
    DEFAULT = "default"
    STORAGE = "storage"
    MEMORY = "memory"


@dataclass
class VariableDecl:
    span: Span
    name: str
    type: TypeName
    scope: VarScope
    visibility: str = "internal"
    is_constant: bool = False
    location: DataLocation = DataLocation.DEFAULT
    initializer: Optional[Expression] = None

    def __repr__(self) -> str:
        return f"VariableDecl({self.name}: {self.type})"

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other

    @property
    def is_storage_reference(self) -> bool:
        return self.scope is not VarScope.STATE and self.location is DataLocation.STORAGE


@dataclass
class StructDef:
    span: Span
    name: str
    fields: list[VariableDecl]

    def field_type(self, member: str) -> Optional[TypeName]:
        for f in self.fields:
            if f.name == member:
                return f.type
        return None


@dataclass
class EventDef:
    span: Span
    name: str
    parameters: list[VariableDecl]


@dataclass
class ModifierInvocation:
    span: Span
    name: str
    args: list[Expression]


@dataclass
class FunctionDef:
    span: Span
    name: str
    parameters: list[VariableDecl]
    returns: list[VariableDecl]
    visibility: str = "public"
    is_payable: bool = False
    is_view: bool = False
    is_pure: bool = False
    is_constructor: bool = False
    modifiers: list[ModifierInvocation] = field(default_factory=list)
    body: Optional[Block] = None
    contract: Optional["ContractDef"] = None  # defining contract

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other

    @property
    def signature(self) -> str:
        params = ",".join(str(p.type) for p in self.parameters)
        return f"{self.name}({params})"

    @property
    def is_implemented(self) -> bool:
        return self.body is not None

    def __repr__(self) -> str:
        owner = self.contract.name if self.contract else "?"
        return f"FunctionDef({owner}.{self.signature})"


@dataclass
class ModifierDef:
    span: Span
    name: str
    parameters: list[VariableDecl]
    body: Optional[Block]
    contract: Optional["ContractDef"] = None

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other


@dataclass
class UsingDirective:
    span: Span
    library: str
    target: Optional[TypeName]  # None means `*`


class ContractKind(Enum):
    CONTRACT = "contract"
    INTERFACE = "interface"
    LIBRARY = "library"


@dataclass
class ContractDef:
    span: Span
    name: str
    kind: ContractKind
    bases: list[str]                      # source order, most-base-like first
    base_args: dict[str, list[Expression]] = field(default_factory=dict)
    state_variables: list[VariableDecl] = field(default_factory=list)
    functions: list[FunctionDef] = field(default_factory=list)
    modifiers: list[ModifierDef] = field(default_factory=list)
    structs: list[StructDef] = field(default_factory=list)
    events: list[EventDef] = field(default_factory=list)
    usings: list[UsingDirective] = field(default_factory=list)
    linearization: list["ContractDef"] = field(default_factory=list)

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other

    def __repr__(self) -> str:
        return f"ContractDef({self.name})"

    @property
    def is_library(self) -> bool:
        return self.kind is ContractKind.LIBRARY


@dataclass
class SourceUnit:
    span: Span
    pragmas: list[str]
    usings: list[UsingDirective]
    contracts: list[ContractDef]

    def contract(self, name: str) -> Optional[ContractDef]:
        for c in self.contracts:
            if c.name == name:
                return c
        return None


AnyExpr = Union[Expression]
