"""Lowering of CFG node expressions into IR instruction lists.

Operands evaluate left to right; assignment targets lower before their
right-hand sides (the reference is materialized first). Every mapping,
array, or structure dereference yields a fresh REF variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from soliscope.cfg import Cfg, NodeKind
from soliscope.errors import LoweringError
from soliscope.frontend.astnodes import (
    Assignment as AstAssignment,
    BinaryOp,
    BoolLiteral,
    CallExpr,
    ContractDef,
    ContractKind,
    EmitStatement,
    EventDef,
    Expression,
    ExprStatement,
    FunctionDef,
    Identifier,
    IndexAccess,
    MemberAccess,
    NewExpr,
    NumberLiteral,
    ReturnStatement,
    StringLiteral,
    StructDef,
    ThrowStatement,
    TupleExpr,
    TypeExpression,
    TypeKind,
    TypeName,
    UnaryOp,
    VarDeclStatement,
    VariableDecl,
)
from soliscope.frontend.inheritance import resolve_super
from soliscope.frontend.names import Builtin, SymbolTable
from soliscope.ir.instructions import (
    Assignment,
    Binary,
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
    Push,
    Return,
    Send,
    SolidityCall,
    Transfer,
    Unary,
    Unpack,
)
from soliscope.ir.variables import (
    BUILTIN_VARIABLES,
    BuiltinVar,
    Constant,
    DeclaredVar,
    IrVariable,
    ReferenceVar,
    TemporaryVar,
    THIS,
    TupleVar,
)

UINT256 = TypeName.elementary("uint256")
BOOL = TypeName.elementary("bool")
ADDRESS = TypeName.elementary("address")

# Return types of inbuilt functions; None means no usable return value.
SOLIDITY_FUNCTION_RETURNS: dict[str, Optional[TypeName]] = {
    "require": None,
    "assert": None,
    "revert": None,
    "selfdestruct": None,
    "keccak256": TypeName.elementary("bytes32"),
    "sha3": TypeName.elementary("bytes32"),
    "sha256": TypeName.elementary("bytes32"),
    "ecrecover": ADDRESS,
    "addmod": UINT256,
    "mulmod": UINT256,
}


@dataclass
class RefAccess:
    """How a REF was produced: base operand plus index or member accessor."""

    base: IrVariable
    accessor: Union[IrVariable, str]
    kind: str  # "index" | "member"


@dataclass
class LoweredFunction:
    """A function's CFG with instruction lists plus REF bookkeeping."""

    function: FunctionDef
    contract: ContractDef
    cfg: Cfg
    ref_info: dict[ReferenceVar, RefAccess] = field(default_factory=dict)
    extra_parameters: list[VariableDecl] = field(default_factory=list)

    def instructions(self) -> list[Instruction]:
        out: list[Instruction] = []
        for node in self.cfg.nodes:
            out.extend(node.irs)
        return out

    def ultimate_base(self, var: IrVariable) -> IrVariable:
        """Walk a REF chain down to the underlying variable."""
        while isinstance(var, ReferenceVar):
            var = self.ref_info[var].base
        return var

    def chain_accessors(self, var: IrVariable) -> list[IrVariable]:
        """Index operands met while walking a REF chain to its base."""
        out: list[IrVariable] = []
        while isinstance(var, ReferenceVar):
            access = self.ref_info[var]
            if access.kind == "index" and isinstance(access.accessor, IrVariable):
                out.append(access.accessor)
            var = access.base
        return out


class Lowerer:
    def __init__(self, contract: ContractDef, table: SymbolTable):
        self.contract = contract
        self.table = table
        self.unit = table.unit
        self._tmp = 0
        self._ref = 0
        self._tuple = 0
        self.result: Optional[LoweredFunction] = None

    # -- variable factories --------------------------------------------------

    def new_tmp(self, type: Optional[TypeName]) -> TemporaryVar:
        var = TemporaryVar(self._tmp, type)
        self._tmp += 1
        return var

    def new_ref(self, type: Optional[TypeName], base: IrVariable,
                accessor, kind: str) -> ReferenceVar:
        var = ReferenceVar(self._ref, type)
        self._ref += 1
        assert self.result is not None
        self.result.ref_info[var] = RefAccess(base, accessor, kind)
        return var

    def new_tuple(self, types: tuple[TypeName, ...]) -> TupleVar:
        var = TupleVar(self._tuple, types)
        self._tuple += 1
        return var

    # -- function entry point --------------------------------------------------

    def lower_function(self, fn: FunctionDef, cfg: Cfg,
                       extra_parameters: Optional[list[VariableDecl]] = None) -> LoweredFunction:
        self.result = LoweredFunction(fn, self.contract, cfg,
                                      extra_parameters=list(extra_parameters or []))
        for node in cfg.nodes:
            instrs: list[Instruction] = []
            if node.kind in (NodeKind.EXPRESSION, NodeKind.THROW, NodeKind.PLACEHOLDER):
                if node.expression is not None:
                    self._lower_statement(node.expression, instrs)
            elif node.kind in (NodeKind.IF, NodeKind.LOOP_HEADER):
                if node.expression is None:
                    instrs.append(Condition(Constant(True, BOOL)))
                else:
                    value = self.lower_expression(node.expression, instrs)
                    instrs.append(Condition(self._require_value(value, node.expression)))
            elif node.kind is NodeKind.RETURN:
                self._lower_return(node.expression, fn, instrs)
            node.irs = instrs
        return self.result

    def _lower_return(self, stmt: Optional[ReturnStatement], fn: FunctionDef,
                      instrs: list[Instruction]) -> None:
        if stmt is None or not stmt.values:
            # Implicit return: named return values flow out, if any.
            named = [DeclaredVar(r) for r in fn.returns if r.name]
            if stmt is not None or named or fn.returns == []:
                instrs.append(Return(named))
            else:
                instrs.append(Return([]))
            return
        values = []
        for expr in stmt.values:
            values.append(self._require_value(self.lower_expression(expr, instrs), expr))
        instrs.append(Return(values))

    def _lower_statement(self, stmt, instrs: list[Instruction]) -> None:
        if isinstance(stmt, ExprStatement):
            self.lower_expression(stmt.expression, instrs)
        elif isinstance(stmt, EmitStatement):
            self.lower_expression(stmt.call, instrs)
        elif isinstance(stmt, ThrowStatement):
            instrs.append(SolidityCall(None, "revert", []))
        elif isinstance(stmt, VarDeclStatement):
            self._lower_declaration(stmt, instrs)
        # Placeholder statements lower to nothing.

    def _lower_declaration(self, stmt: VarDeclStatement, instrs: list[Instruction]) -> None:
        if stmt.initializer is None:
            return  # uninitialized local: deliberately no instruction
        if len(stmt.declarations) == 1:
            value = self.lower_expression(stmt.initializer, instrs)
            target = DeclaredVar(stmt.declarations[0])
            if isinstance(value, TupleVar):
                raise LoweringError("tuple value assigned to a single variable",
                                    stmt.span)
            instrs.append(Assignment(target, self._require_value(value, stmt)))
            return
        value = self.lower_expression(stmt.initializer, instrs)
        if not isinstance(value, TupleVar):
            raise LoweringError("tuple declaration requires a tuple-returning call", stmt.span)
        if len(stmt.declarations) != len(value.types):
            raise LoweringError("tuple arity mismatch", stmt.span)
        for i, decl in enumerate(stmt.declarations):
            instrs.append(Unpack(DeclaredVar(decl), value, i))

    # -- expressions ----------------------------------------------------------

    def lower_expression(self, expr: Expression,
                         instrs: list[Instruction]) -> Optional[IrVariable]:
        if isinstance(expr, NumberLiteral):
            return Constant(expr.value, UINT256)
        if isinstance(expr, StringLiteral):
            return Constant(expr.value, TypeName.elementary("string"))
        if isinstance(expr, BoolLiteral):
            return Constant(expr.value, BOOL)
        if isinstance(expr, Identifier):
            return self._lower_identifier(expr)
        if isinstance(expr, UnaryOp):
            return self._lower_unary(expr, instrs)
        if isinstance(expr, BinaryOp):
            left = self._require_value(self.lower_expression(expr.left, instrs), expr.left)
            right = self._require_value(self.lower_expression(expr.right, instrs), expr.right)
            rtype = BOOL if expr.op in Binary.COMPARISONS or expr.op in ("&&", "||") else left.type
            tmp = self.new_tmp(rtype)
            instrs.append(Binary(tmp, expr.op, left, right))
            return tmp
        if isinstance(expr, AstAssignment):
            return self._lower_assignment(expr, instrs)
        if isinstance(expr, IndexAccess):
            return self._lower_index(expr, instrs)
        if isinstance(expr, MemberAccess):
            return self._lower_member(expr, instrs)
        if isinstance(expr, CallExpr):
            return self._lower_call(expr, instrs)
        if isinstance(expr, NewExpr):
            return self._lower_new(expr, instrs)
        if isinstance(expr, TupleExpr):
            raise LoweringError("tuple expression outside assignment or return", expr.span)
        if isinstance(expr, TypeExpression):
            raise LoweringError("type name used as a value", expr.span)
        raise LoweringError(f"unsupported expression {type(expr).__name__}", expr.span)

    def _lower_identifier(self, expr: Identifier) -> IrVariable:
        binding = expr.binding
        if isinstance(binding, VariableDecl):
            return DeclaredVar(binding)
        if isinstance(binding, Builtin):
            if binding.name == "this":
                return THIS
            raise LoweringError(f"'{expr.name}' cannot be used as a value", expr.span)
        if isinstance(binding, FunctionDef):
            target = self.table.function_by_name(expr.name) or binding
            return Constant(target, None)  # function reference for DYN_CALL targets
        raise LoweringError(f"'{expr.name}' cannot be used as a value", expr.span)

    def _lower_unary(self, expr: UnaryOp, instrs: list[Instruction]) -> IrVariable:
        if expr.op == "-" and isinstance(expr.operand, NumberLiteral):
            return Constant(-expr.operand.value, TypeName.elementary("int256"))
        operand = self._require_value(self.lower_expression(expr.operand, instrs), expr.operand)
        rtype = BOOL if expr.op == "!" else operand.type
        tmp = self.new_tmp(rtype)
        instrs.append(Unary(tmp, expr.op, operand))
        return tmp

    def _lower_assignment(self, expr: AstAssignment,
                          instrs: list[Instruction]) -> Optional[IrVariable]:
        if isinstance(expr.target, TupleExpr):
            return self._lower_tuple_assignment(expr, instrs)
        target = self._lower_lvalue(expr.target, instrs)
        if expr.op == "=":
            value = self._require_value(self.lower_expression(expr.value, instrs), expr.value)
            instrs.append(Assignment(target, value))
            return target
        # Compound assignment: read through the already-materialized lvalue.
        op = expr.op[:-1]
        value = self._require_value(self.lower_expression(expr.value, instrs), expr.value)
        tmp = self.new_tmp(target.type)
        instrs.append(Binary(tmp, op, target, value))
        instrs.append(Assignment(target, tmp))
        return target

    def _lower_tuple_assignment(self, expr: AstAssignment,
                                instrs: list[Instruction]) -> Optional[IrVariable]:
        if expr.op != "=":
            raise LoweringError("compound assignment to a tuple", expr.span)
        value = self.lower_expression(expr.value, instrs)
        if not isinstance(value, TupleVar):
            raise LoweringError("tuple assignment requires a tuple-returning call", expr.span)
        targets = expr.target.items
        if len(targets) != len(value.types):
            raise LoweringError("tuple arity mismatch", expr.span)
        for i, item in enumerate(targets):
            if item is None:
                continue
            target = self._lower_lvalue(item, instrs)
            unpacked = self.new_tmp(value.types[i])
            instrs.append(Unpack(unpacked, value, i))
            instrs.append(Assignment(target, unpacked))
        return None

    def _lower_lvalue(self, expr: Expression, instrs: list[Instruction]) -> IrVariable:
        if isinstance(expr, Identifier):
            binding = expr.binding
            if not isinstance(binding, VariableDecl):
                raise LoweringError(f"'{expr.name}' is not assignable", expr.span)
            return DeclaredVar(binding)
        if isinstance(expr, IndexAccess):
            return self._lower_index(expr, instrs)
        if isinstance(expr, MemberAccess):
            result = self._lower_member(expr, instrs)
            if not isinstance(result, ReferenceVar):
                raise LoweringError("expression is not assignable", expr.span)
            return result
        raise LoweringError("expression is not assignable", expr.span)

    def _lower_index(self, expr: IndexAccess, instrs: list[Instruction]) -> ReferenceVar:
        base = self._require_value(self.lower_expression(expr.base, instrs), expr.base)
        index = self._require_value(self.lower_expression(expr.index, instrs), expr.index)
        ref = self.new_ref(self._element_type(base.type, expr), base, index, "index")
        instrs.append(Index(ref, base, index))
        return ref

    def _element_type(self, base_type: Optional[TypeName], expr) -> Optional[TypeName]:
        if base_type is None:
            return None
        if base_type.kind is TypeKind.MAPPING or base_type.kind is TypeKind.ARRAY:
            return base_type.value
        raise LoweringError(f"type {base_type} cannot be indexed", expr.span)

    def _lower_member(self, expr: MemberAccess, instrs: list[Instruction]) -> IrVariable:
        # msg.sender and friends are composed builtin variables, not REFs.
        if isinstance(expr.base, Identifier) and isinstance(expr.base.binding, Builtin):
            key = (expr.base.name, expr.member)
            if key in BUILTIN_VARIABLES:
                return BUILTIN_VARIABLES[key]
            raise LoweringError(f"unknown builtin member {key[0]}.{key[1]}", expr.span)
        base = self._require_value(self.lower_expression(expr.base, instrs), expr.base)
        btype = base.type
        if btype is not None and btype.kind is TypeKind.STRUCT:
            struct = self.table.structs.get(btype.name)
            ftype = struct.field_type(expr.member) if struct else None
            if ftype is None:
                raise LoweringError(f"unknown field '{expr.member}' of {btype}", expr.span)
            ref = self.new_ref(ftype, base, expr.member, "member")
            instrs.append(Member(ref, base, expr.member))
            return ref
        raise LoweringError(
            f"member '{expr.member}' is not accessible outside a call", expr.span
        )

    # -- calls -----------------------------------------------------------------

    def _unwrap_call_options(self, call: CallExpr):
        """Split a `X.value(v)(...)` call-option chain into (X, v)."""
        callee = call.callee
        value_expr = None
        if (isinstance(callee, CallExpr)
                and isinstance(callee.callee, MemberAccess)
                and callee.callee.member == "value"
                and isinstance(callee.callee.base, MemberAccess)):
            if len(callee.args) != 1:
                raise LoweringError("value option takes one argument", call.span)
            value_expr = callee.args[0]
            callee = callee.callee.base
        return callee, value_expr

    def _lower_call(self, call: CallExpr, instrs: list[Instruction]) -> Optional[IrVariable]:
        callee, value_expr = self._unwrap_call_options(call)

        if isinstance(callee, TypeExpression):
            return self._lower_convert(call, callee.type, instrs)

        if isinstance(callee, Identifier):
            return self._lower_named_call(call, callee, value_expr, instrs)

        if isinstance(callee, MemberAccess):
            return self._lower_member_call(call, callee, value_expr, instrs)

        raise LoweringError("unsupported call target", call.span)

    def _lower_convert(self, call: CallExpr, target: TypeName,
                       instrs: list[Instruction]) -> IrVariable:
        if len(call.args) != 1:
            raise LoweringError("type conversion takes one argument", call.span)
        operand = self._require_value(self.lower_expression(call.args[0], instrs), call)
        tmp = self.new_tmp(target)
        instrs.append(Convert(tmp, operand, target))
        return tmp

    def _lower_named_call(self, call: CallExpr, callee: Identifier, value_expr,
                          instrs: list[Instruction]) -> Optional[IrVariable]:
        binding = callee.binding
        if isinstance(binding, Builtin) and binding.name in SOLIDITY_FUNCTION_RETURNS:
            args = self._lower_args(call.args, instrs)
            rtype = SOLIDITY_FUNCTION_RETURNS[binding.name]
            lvalue = self.new_tmp(rtype) if rtype is not None else None
            instrs.append(SolidityCall(lvalue, binding.name, args))
            return lvalue
        if isinstance(binding, EventDef):
            args = self._lower_args(call.args, instrs)
            instrs.append(EventCall(binding, args))
            return None
        if isinstance(binding, StructDef):
            args = self._lower_args(call.args, instrs)
            tmp = self.new_tmp(TypeName(TypeKind.STRUCT, binding.name))
            instrs.append(NewStructure(tmp, binding, args))
            return tmp
        if isinstance(binding, ContractDef):
            return self._lower_convert(call, TypeName(TypeKind.CONTRACT, binding.name), instrs)
        if isinstance(binding, FunctionDef):
            target = self.table.function_by_name(callee.name) or binding
            return self._emit_internal_call(target, call, instrs)
        if isinstance(binding, VariableDecl):
            var = DeclaredVar(binding)
            if var.type is not None and var.type.kind is TypeKind.FUNCTION:
                args = self._lower_args(call.args, instrs)
                rets = var.type.returns
                lvalue = self._call_lvalue(rets)
                instrs.append(DynamicCall(lvalue, var, args))
                return lvalue
        raise LoweringError(f"'{callee.name}' is not callable", call.span)

    def _lower_member_call(self, call: CallExpr, callee: MemberAccess, value_expr,
                           instrs: list[Instruction]) -> Optional[IrVariable]:
        base_expr, member = callee.base, callee.member

        # Library.function(...) without lowering the library name.
        if isinstance(base_expr, Identifier) and isinstance(base_expr.binding, ContractDef):
            target_contract = base_expr.binding
            if target_contract.kind is ContractKind.LIBRARY:
                fn = self._find_function(target_contract, member)
                if fn is None:
                    raise LoweringError(
                        f"library {target_contract.name} has no function '{member}'", call.span
                    )
                args = self._lower_args(call.args, instrs)
                lvalue = self._call_lvalue([r.type for r in fn.returns])
                instrs.append(LibraryCall(lvalue, target_contract, fn, args))
                return lvalue
            raise LoweringError("static contract member calls are not supported", call.span)

        # super.f(...): next implementation up the linearization, internal.
        if isinstance(base_expr, Identifier) and isinstance(base_expr.binding, Builtin) \
                and base_expr.name == "super":
            caller_contract = self._defining_contract()
            fn = resolve_super(self.contract, caller_contract, member)
            return self._emit_internal_call(fn, call, instrs)

        base = self._require_value(self.lower_expression(base_expr, instrs), base_expr)
        btype = base.type

        if member == "push" and btype is not None and btype.kind is TypeKind.ARRAY:
            args = self._lower_args(call.args, instrs)
            if len(args) != 1:
                raise LoweringError("push takes one argument", call.span)
            instrs.append(Push(base, args[0]))
            return None

        if base is THIS and self._find_function(self.contract, member) is not None:
            # this.f() leaves the contract and comes back: a high-level call.
            fn = self._find_function(self.contract, member)
            value = None
            if value_expr is not None:
                value = self._require_value(self.lower_expression(value_expr, instrs), value_expr)
            args = self._lower_args(call.args, instrs)
            lvalue = self._call_lvalue([r.type for r in fn.returns])
            instrs.append(HighLevelCall(lvalue, base, member, args, value))
            return lvalue

        if btype == ADDRESS:
            value = None
            if value_expr is not None:
                value = self._require_value(self.lower_expression(value_expr, instrs), value_expr)
            if member == "call":
                args = self._lower_args(call.args, instrs)
                tmp = self.new_tmp(BOOL)
                instrs.append(LowLevelCall(tmp, base, member, args, value))
                return tmp
            if member == "send":
                args = self._lower_args(call.args, instrs)
                if len(args) != 1:
                    raise LoweringError("send takes one argument", call.span)
                tmp = self.new_tmp(BOOL)
                instrs.append(Send(tmp, base, args[0]))
                return tmp
            if member == "transfer":
                args = self._lower_args(call.args, instrs)
                if len(args) != 1:
                    raise LoweringError("transfer takes one argument", call.span)
                instrs.append(Transfer(base, args[0]))
                return None
            raise LoweringError(f"unknown address member '{member}'", call.span)

        if btype is not None and btype.kind is TypeKind.CONTRACT:
            dest_contract = self.unit.contract(btype.name)
            fn = self._find_function(dest_contract, member) if dest_contract else None
            if fn is None:
                raise LoweringError(f"{btype.name} has no function '{member}'", call.span)
            value = None
            if value_expr is not None:
                value = self._require_value(self.lower_expression(value_expr, instrs), value_expr)
            args = self._lower_args(call.args, instrs)
            lvalue = self._call_lvalue([r.type for r in fn.returns])
            instrs.append(HighLevelCall(lvalue, base, member, args, value))
            return lvalue

        # using-for: receiver becomes the first argument of a library call.
        if btype is not None:
            for library in self.table.libraries_for(btype):
                fn = self._find_function(library, member)
                if fn is not None:
                    args = [base] + self._lower_args(call.args, instrs)
                    lvalue = self._call_lvalue([r.type for r in fn.returns])
                    instrs.append(LibraryCall(lvalue, library, fn, args))
                    return lvalue

        raise LoweringError(f"cannot classify call to member '{member}'", call.span)

    def _defining_contract(self) -> ContractDef:
        assert self.result is not None
        fn = self.result.function
        return fn.contract if fn.contract is not None else self.contract

    def _emit_internal_call(self, fn: FunctionDef, call: CallExpr,
                            instrs: list[Instruction]) -> Optional[IrVariable]:
        args = self._lower_args(call.args, instrs)
        lvalue = self._call_lvalue([r.type for r in fn.returns])
        instrs.append(InternalCall(lvalue, fn, args))
        return lvalue

    def _call_lvalue(self, return_types: list[Optional[TypeName]]):
        if not return_types:
            return None
        if len(return_types) == 1:
            return self.new_tmp(return_types[0])
        return self.new_tuple(tuple(return_types))

    def _lower_args(self, args: list[Expression], instrs: list[Instruction]) -> list[IrVariable]:
        out = []
        for arg in args:
            out.append(self._require_value(self.lower_expression(arg, instrs), arg))
        return out

    def _lower_new(self, expr: NewExpr, instrs: list[Instruction]) -> IrVariable:
        ntype = expr.type
        if ntype.kind is TypeKind.ARRAY:
            if len(expr.args) != 1:
                raise LoweringError("new array takes a length argument", expr.span)
            length = self._require_value(self.lower_expression(expr.args[0], instrs), expr)
            tmp = self.new_tmp(ntype)
            instrs.append(NewArray(tmp, ntype, length))
            return tmp
        if ntype.kind is TypeKind.ELEMENTARY:
            args = self._lower_args(expr.args, instrs)
            tmp = self.new_tmp(ntype)
            instrs.append(NewElementary(tmp, ntype, args))
            return tmp
        raise LoweringError(f"cannot instantiate type {ntype}", expr.span)

    def _find_function(self, contract: Optional[ContractDef], name: str) -> Optional[FunctionDef]:
        if contract is None:
            return None
        for c in contract.linearization or [contract]:
            for fn in c.functions:
                if fn.name == name and not fn.is_constructor:
                    return fn
        return None

    @staticmethod
    def _require_value(value: Optional[IrVariable], where) -> IrVariable:
        if value is None:
            span = getattr(where, "span", None)
            raise LoweringError("expression has no value", span)
        return value


def lower_function(fn: FunctionDef, cfg: Cfg, contract: ContractDef, table: SymbolTable,
                   extra_parameters: Optional[list[VariableDecl]] = None) -> LoweredFunction:
    """Fill every CFG node's instruction list for one function."""
    return Lowerer(contract, table).lower_function(fn, cfg, extra_parameters)


def lower_expression(expr: Expression, contract: ContractDef, table: SymbolTable):
    """Lower a single resolved expression; returns (instructions, result)."""
    lowerer = Lowerer(contract, table)
    lowerer.result = LoweredFunction(
        FunctionDef(expr.span, "<expr>", [], []), contract, Cfg(None, [], None)  # type: ignore[arg-type]
    )
    instrs: list[Instruction] = []
    result = lowerer.lower_expression(expr, instrs)
    return instrs, result


def classify_call(call: CallExpr, contract: ContractDef, table: SymbolTable) -> Instruction:
    """Classify a call expression; returns the resulting call instruction."""
    instrs, _ = lower_expression(call, contract, table)
    for instruction in reversed(instrs):
        from soliscope.ir.instructions import CALL_KINDS, Convert as _Convert, NewStructure as _New

        if isinstance(instruction, CALL_KINDS + (_Convert, _New, Push)):
            return instruction
    raise LoweringError("expression contains no call", call.span)
