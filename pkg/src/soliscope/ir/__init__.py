"""Reduced IR: operand model, instruction set, lowering from the CFG."""

from soliscope.ir.variables import (
    BuiltinVar,
    Constant,
    DeclaredVar,
    IrVariable,
    ReferenceVar,
    TemporaryVar,
    TupleVar,
)
from soliscope.ir.instructions import (
    ALL_KINDS,
    Assignment,
    Binary,
    CALL_KINDS,
    Call,
    Condition,
    Convert,
    DynamicCall,
    EventCall,
    HighLevelCall,
    Index,
    Instruction,
    InternalCall,
    LibraryCall,
    LowLevelCall,
    Member,
    NewArray,
    NewElementary,
    NewStructure,
    Phi,
    Push,
    Return,
    Send,
    SolidityCall,
    Transfer,
    Unary,
    Unpack,
    is_external_call,
)
from soliscope.ir.lowering import (
    LoweredFunction,
    classify_call,
    lower_expression,
    lower_function,
)

__all__ = [
    "ALL_KINDS",
    "Assignment",
    "Binary",
    "BuiltinVar",
    "CALL_KINDS",
    "Call",
    "Condition",
    "Constant",
    "Convert",
    "DeclaredVar",
    "DynamicCall",
    "EventCall",
    "HighLevelCall",
    "Index",
    "Instruction",
    "InternalCall",
    "IrVariable",
    "LibraryCall",
    "LowLevelCall",
    "LoweredFunction",
    "Member",
    "NewArray",
    "NewElementary",
    "NewStructure",
    "Phi",
    "Push",
    "ReferenceVar",
    "Return",
    "Send",
    "SolidityCall",
    "TemporaryVar",
    "Transfer",
    "TupleVar",
    "Unary",
    "Unpack",
    "classify_call",
    "is_external_call",
    "lower_expression",
    "lower_function",
]
