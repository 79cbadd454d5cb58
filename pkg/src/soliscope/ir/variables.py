"""Operand model for the IR: declared variables, temporaries, references.

REF variables are produced only by Index/Member instructions; TMP and REF
indices are unique per function, assigned densely in lowering order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from soliscope.frontend.astnodes import TypeName, VariableDecl, VarScope


class IrVariable:
    """Base class; concrete kinds below."""

    type: Optional[TypeName]

    @property
    def name(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class DeclaredVar(IrVariable):
    """State variable, local, parameter, or named return value."""

    decl: VariableDecl

    @property
    def name(self) -> str:
        return self.decl.name

    @property
    def type(self) -> TypeName:
        return self.decl.type

    @property
    def is_state(self) -> bool:
        return self.decl.scope is VarScope.STATE

    @property
    def is_parameter(self) -> bool:
        return self.decl.scope in (VarScope.PARAMETER, VarScope.RETURN)

    def __str__(self) -> str:
        return self.decl.name

    def __repr__(self) -> str:
        return f"DeclaredVar({self.decl.name})"


@dataclass(frozen=True)
class TemporaryVar(IrVariable):
    index: int
    type: Optional[TypeName] = None

    @property
    def name(self) -> str:
        return f"TMP_{self.index}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ReferenceVar(IrVariable):
    index: int
    type: Optional[TypeName] = None

    @property
    def name(self) -> str:
        return f"REF_{self.index}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TupleVar(IrVariable):
    index: int
    types: tuple[TypeName, ...] = ()

    @property
    def name(self) -> str:
        return f"TUPLE_{self.index}"

    @property
    def type(self) -> Optional[TypeName]:
        return None

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant(IrVariable):
    value: object  # int | str | bool
    type: Optional[TypeName] = None

    @property
    def name(self) -> str:
        return str(self.value)

    def __str__(self) -> str:
        if isinstance(self.value, bool):
            return "true" if self.value else "false"
        if isinstance(self.value, str):
            return repr(self.value)
        if isinstance(self.value, VariableDecl):
            return self.value.name
        name = getattr(self.value, "name", None)
        if name is not None and not isinstance(self.value, (int, float)):
            contract = getattr(self.value, "contract", None)
            return f"{contract.name}.{name}" if contract is not None else str(name)
        return str(self.value)


@dataclass(frozen=True)
class BuiltinVar(IrVariable):
    """msg.sender, msg.value, tx.origin, this, and friends."""

    composed: str
    type: Optional[TypeName] = None

    @property
    def name(self) -> str:
        return self.composed

    def __str__(self) -> str:
        return self.composed


MSG_SENDER = BuiltinVar("msg.sender", TypeName.elementary("address"))
MSG_VALUE = BuiltinVar("msg.value", TypeName.elementary("uint256"))
MSG_DATA = BuiltinVar("msg.data", TypeName.elementary("bytes"))
TX_ORIGIN = BuiltinVar("tx.origin", TypeName.elementary("address"))
BLOCK_TIMESTAMP = BuiltinVar("block.timestamp", TypeName.elementary("uint256"))
BLOCK_NUMBER = BuiltinVar("block.number", TypeName.elementary("uint256"))
THIS = BuiltinVar("this", TypeName.elementary("address"))

# Synthetic taint source standing for any value returned by external code.
EXTERNAL_RESULT = BuiltinVar("<external>")

BUILTIN_VARIABLES = {
    ("msg", "sender"): MSG_SENDER,
    ("msg", "value"): MSG_VALUE,
    ("msg", "data"): MSG_DATA,
    ("tx", "origin"): TX_ORIGIN,
    ("block", "timestamp"): BLOCK_TIMESTAMP,
    ("block", "number"): BLOCK_NUMBER,
}
