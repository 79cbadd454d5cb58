"""The reduced instruction set.

Fewer than 40 instruction kinds; exactly nine call kinds. No instruction
carries control flow: branch structure lives only in the CFG, so deleting
CFG edges and concatenating instruction lists loses nothing but control
flow (no instruction references a node).

Printed forms follow the textual IR conventions used throughout this
package: REF binding prints with `->`, writes (including through a REF)
with `:=`.
"""

from __future__ import annotations

from typing import Optional

from soliscope.frontend.astnodes import ContractDef, EventDef, FunctionDef, TypeName
from soliscope.ir.variables import (
    Constant,
    IrVariable,
    ReferenceVar,
    TemporaryVar,
    TupleVar,
)


def _fmt(var: IrVariable) -> str:
    """Operand with a type suffix for IR-created variables only."""
    base = getattr(var, "base", var)  # SSA versions print like their base
    if isinstance(base, (TemporaryVar, ReferenceVar)) and getattr(var, "type", None) is not None:
        return f"{var}({var.type})"
    return str(var)


def _fmt_args(args: list[IrVariable]) -> str:
    return ", ".join(str(a) for a in args)


class Instruction:
    """Base class; `lvalue` is the written variable, if any."""

    lvalue: Optional[IrVariable] = None

    def reads(self) -> list[IrVariable]:
        """Operands read by the instruction (not resolved through REFs)."""
        return []

    def with_operands(self, mapping) -> "Instruction":
        raise NotImplementedError


class Assignment(Instruction):
    """LV := RV; when LV is a REF, this writes through the reference."""

    def __init__(self, lvalue: IrVariable, rvalue: IrVariable):
        self.lvalue = lvalue
        self.rvalue = rvalue

    def reads(self):
        return [self.rvalue]

    def __str__(self):
        return f"{self.lvalue} := {_fmt(self.rvalue)}"


class Binary(Instruction):
    COMPARISONS = frozenset(("==", "!=", "<", ">", "<=", ">="))

    def __init__(self, lvalue: IrVariable, op: str, left: IrVariable, right: IrVariable):
        self.lvalue = lvalue
        self.op = op
        self.left = left
        self.right = right

    @property
    def is_comparison(self) -> bool:
        return self.op in self.COMPARISONS

    def reads(self):
        return [self.left, self.right]

    def __str__(self):
        return f"{_fmt(self.lvalue)} = {self.left} {self.op} {self.right}"


class Unary(Instruction):
    def __init__(self, lvalue: IrVariable, op: str, operand: IrVariable):
        self.lvalue = lvalue
        self.op = op
        self.operand = operand

    def reads(self):
        return [self.operand]

    def __str__(self):
        return f"{_fmt(self.lvalue)} = {self.op} {self.operand}"


class Index(Instruction):
    """REF <- base[index]; dereferencing a mapping or array."""

    def __init__(self, lvalue: ReferenceVar, base: IrVariable, index: IrVariable):
        self.lvalue = lvalue
        self.base = base
        self.index = index

    def reads(self):
        return [self.base, self.index]

    def __str__(self):
        return f"{_fmt(self.lvalue)} -> {self.base}[{self.index}]"


class Member(Instruction):
    """REF <- base.member; structure field access."""

    def __init__(self, lvalue: ReferenceVar, base: IrVariable, member: str):
        self.lvalue = lvalue
        self.base = base
        self.member = member

    def reads(self):
        return [self.base]

    def __str__(self):
        return f"{_fmt(self.lvalue)} -> {self.base}.{self.member}"


# -- the nine call kinds -----------------------------------------------------


class Call(Instruction):
    """Common shape for call instructions: arguments plus optional value."""

    def __init__(self, lvalue: Optional[IrVariable], args: list[IrVariable],
                 value: Optional[IrVariable] = None):
        self.lvalue = lvalue
        self.args = args
        self.value = value

    def reads(self):
        out = list(self.args)
        if self.value is not None:
            out.append(self.value)
        return out

    def _prefix(self) -> str:
        return f"{_fmt(self.lvalue)} = " if self.lvalue is not None else ""

    def _suffix(self) -> str:
        return f" value:{self.value}" if self.value is not None else ""


class LowLevelCall(Call):
    """L_CALL: address.call(...), optionally with attached value."""

    def __init__(self, lvalue, dest: IrVariable, function_name: str, args, value=None):
        super().__init__(lvalue, args, value)
        self.dest = dest
        self.function_name = function_name

    def reads(self):
        return [self.dest] + super().reads()

    def __str__(self):
        return (f"{self._prefix()}L_CALL {self.dest}.{self.function_name}"
                f"({_fmt_args(self.args)}){self._suffix()}")


class HighLevelCall(Call):
    """H_CALL: call on a contract-typed destination."""

    def __init__(self, lvalue, dest: IrVariable, function_name: str, args, value=None):
        super().__init__(lvalue, args, value)
        self.dest = dest
        self.function_name = function_name

    def reads(self):
        return [self.dest] + super().reads()

    def __str__(self):
        return (f"{self._prefix()}H_CALL {self.dest}.{self.function_name}"
                f"({_fmt_args(self.args)}){self._suffix()}")


class LibraryCall(Call):
    """LIB_CALL: direct or using-for attached library function."""

    def __init__(self, lvalue, library: ContractDef, function: FunctionDef, args):
        super().__init__(lvalue, args)
        self.library = library
        self.function = function

    def __str__(self):
        return (f"{self._prefix()}LIB_CALL {self.library.name}.{self.function.name}"
                f"({_fmt_args(self.args)})")


class SolidityCall(Call):
    """S_CALL: inbuilt function (require, assert, revert, keccak256, ...)."""

    def __init__(self, lvalue, function_name: str, args):
        super().__init__(lvalue, args)
        self.function_name = function_name

    def __str__(self):
        return f"{self._prefix()}S_CALL {self.function_name}({_fmt_args(self.args)})"


class InternalCall(Call):
    """I_CALL: same-contract (or super-resolved) function call."""

    def __init__(self, lvalue, function: FunctionDef, args):
        super().__init__(lvalue, args)
        self.function = function

    def __str__(self):
        owner = self.function.contract.name if self.function.contract else "?"
        return f"{self._prefix()}I_CALL {owner}.{self.function.name}({_fmt_args(self.args)})"


class DynamicCall(Call):
    """DYN_CALL: call through a function-typed variable."""

    def __init__(self, lvalue, target: IrVariable, args):
        super().__init__(lvalue, args)
        self.target = target

    def reads(self):
        return [self.target] + super().reads()

    def __str__(self):
        return f"{self._prefix()}DYN_CALL {self.target}({_fmt_args(self.args)})"


class EventCall(Call):
    """E_CALL: event emission."""

    def __init__(self, event: EventDef, args):
        super().__init__(None, args)
        self.event = event

    def __str__(self):
        return f"E_CALL {self.event.name}({_fmt_args(self.args)})"


class Send(Call):
    """address.send(value); returns a success flag."""

    def __init__(self, lvalue, dest: IrVariable, value: IrVariable):
        super().__init__(lvalue, [], value)
        self.dest = dest

    def reads(self):
        return [self.dest, self.value]

    def __str__(self):
        return f"{self._prefix()}SEND dest:{self.dest} value:{self.value}"


class Transfer(Call):
    """address.transfer(value); no return value."""

    def __init__(self, dest: IrVariable, value: IrVariable):
        super().__init__(None, [], value)
        self.dest = dest

    def reads(self):
        return [self.dest, self.value]

    def __str__(self):
        return f"TRANSFER dest:{self.dest} value:{self.value}"


# -- remaining instructions ---------------------------------------------------


class Push(Instruction):
    def __init__(self, array: IrVariable, value: IrVariable):
        self.array = array
        self.value = value

    def reads(self):
        return [self.value]

    def __str__(self):
        return f"PUSH {self.array}, {self.value}"


class Convert(Instruction):
    def __init__(self, lvalue: IrVariable, operand: IrVariable, target_type: TypeName):
        self.lvalue = lvalue
        self.operand = operand
        self.target_type = target_type

    def reads(self):
        return [self.operand]

    def __str__(self):
        return f"{_fmt(self.lvalue)} = CONVERT {self.operand} to {self.target_type}"


class Unpack(Instruction):
    def __init__(self, lvalue: IrVariable, source: TupleVar, index: int):
        self.lvalue = lvalue
        self.source = source
        self.index = index

    def reads(self):
        return [self.source]

    def __str__(self):
        return f"{self.lvalue} = UNPACK {self.source} index:{self.index}"


class Return(Instruction):
    def __init__(self, values: list[IrVariable]):
        self.values = values

    def reads(self):
        return list(self.values)

    def __str__(self):
        if not self.values:
            return "RETURN"
        return f"RETURN {_fmt_args(self.values)}"


class Condition(Instruction):
    def __init__(self, value: IrVariable):
        self.value = value

    def reads(self):
        return [self.value]

    def __str__(self):
        return f"CONDITION {self.value}"


class NewElementary(Instruction):
    def __init__(self, lvalue: IrVariable, type: TypeName, args):
        self.lvalue = lvalue
        self.type = type
        self.args = args

    def reads(self):
        return list(self.args)

    def __str__(self):
        return f"{_fmt(self.lvalue)} = NEW_ELEMENTARY {self.type}({_fmt_args(self.args)})"


class NewArray(Instruction):
    def __init__(self, lvalue: IrVariable, type: TypeName, length: IrVariable):
        self.lvalue = lvalue
        self.type = type
        self.length = length

    def reads(self):
        return [self.length]

    def __str__(self):
        return f"{_fmt(self.lvalue)} = NEW_ARRAY {self.type} length:{self.length}"


class NewStructure(Instruction):
    def __init__(self, lvalue: IrVariable, struct, args):
        self.lvalue = lvalue
        self.struct = struct
        self.args = args

    def reads(self):
        return list(self.args)

    def __str__(self):
        return f"{_fmt(self.lvalue)} = NEW_STRUCTURE {self.struct.name}({_fmt_args(self.args)})"


class Phi(Instruction):
    """SSA-only merge pseudo-instruction; never present in non-SSA IR."""

    ENTRY = "entry"
    POST_CALL = "post-call"
    JOIN = "join"
    WEAK_UPDATE = "weak-update"

    def __init__(self, lvalue: Optional[IrVariable], operands: list, placement: str,
                 for_state: bool = False, decl=None):
        self.lvalue = lvalue
        self.operands = operands
        self.placement = placement
        self.for_state = for_state
        self.decl = decl  # underlying declaration, for state/local phis

    def reads(self):
        return list(self.operands)

    def __str__(self):
        if self.placement == self.ENTRY:
            body = "*"
        else:
            body = _fmt_args(self.operands)
        return f"{self.lvalue} := PHI({body})"


CALL_KINDS = (
    LowLevelCall,
    HighLevelCall,
    LibraryCall,
    SolidityCall,
    InternalCall,
    DynamicCall,
    EventCall,
    Send,
    Transfer,
)

ALL_KINDS = (
    Assignment,
    Binary,
    Unary,
    Index,
    Member,
    *CALL_KINDS,
    Push,
    Convert,
    Unpack,
    Return,
    Condition,
    NewElementary,
    NewArray,
    NewStructure,
    Phi,
)

# External calls may hand control to untrusted code, which can re-enter.
EXTERNAL_CALL_KINDS = (LowLevelCall, HighLevelCall, Send, Transfer, DynamicCall)


def is_external_call(instruction: Instruction) -> bool:
    return isinstance(instruction, EXTERNAL_CALL_KINDS)
