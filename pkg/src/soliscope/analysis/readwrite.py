"""Read and write sets per node, function, and contract.

A variable is read when it appears as an RV, an index or member base, a
call argument, or a condition; it is written when it is an assignment LV,
a push target, or a state variable in a storage-reference write's target
set. Reads and writes through storage references include every may-alias
target. Internal call effects fold in through a cycle-safe fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from soliscope.cfg import Node
from soliscope.frontend.astnodes import ContractDef, FunctionDef, VariableDecl, VarScope
from soliscope.ir.instructions import Assignment, Instruction, Push
from soliscope.ir.lowering import LoweredFunction
from soliscope.ir.variables import BuiltinVar, DeclaredVar, IrVariable, ReferenceVar
from soliscope.ssa import AliasMap, write_targets

Var = Union[VariableDecl, BuiltinVar]


def _state_only(vars: set[Var]) -> set[VariableDecl]:
    return {v for v in vars if isinstance(v, VariableDecl) and v.scope is VarScope.STATE}


def _local_only(vars: set[Var]) -> set[VariableDecl]:
    return {v for v in vars if isinstance(v, VariableDecl) and v.scope is not VarScope.STATE}


def _resolve_read(lowered: LoweredFunction, aliases: AliasMap, op: IrVariable) -> set[Var]:
    out: set[Var] = set()
    if isinstance(op, ReferenceVar):
        base = lowered.ultimate_base(op)
        if isinstance(base, DeclaredVar):
            out.add(base.decl)
            if base.decl.is_storage_reference:
                out.update(aliases.get(base.decl, ()))
        elif isinstance(base, BuiltinVar):
            out.add(base)
    elif isinstance(op, DeclaredVar):
        out.add(op.decl)
    elif isinstance(op, BuiltinVar):
        out.add(op)
    return out


def _resolve_write(lowered: LoweredFunction, aliases: AliasMap, op: IrVariable) -> set[Var]:
    # The pointer local itself is read, not written, by a reference write;
    # that read is already counted at the Index/Member instruction.
    out: set[Var] = set()
    if isinstance(op, ReferenceVar):
        out.update(write_targets(lowered, aliases, op))
    elif isinstance(op, DeclaredVar):
        out.add(op.decl)
    return out


def instruction_reads(lowered: LoweredFunction, aliases: AliasMap,
                      instr: Instruction) -> set[Var]:
    out: set[Var] = set()
    for op in instr.reads():
        out |= _resolve_read(lowered, aliases, op)
    return out


def instruction_writes(lowered: LoweredFunction, aliases: AliasMap,
                       instr: Instruction) -> set[Var]:
    if isinstance(instr, Push):
        return _resolve_write(lowered, aliases, instr.array)
    if isinstance(instr, Assignment):
        return _resolve_write(lowered, aliases, instr.lvalue)
    if isinstance(instr.lvalue, DeclaredVar):
        # Index/Member lvalues define REFs, which is not a variable write.
        return _resolve_write(lowered, aliases, instr.lvalue)
    return set()


@dataclass
class ReadWriteSets:
    contract: ContractDef
    node_reads: dict[Node, set[Var]] = field(default_factory=dict)
    node_writes: dict[Node, set[Var]] = field(default_factory=dict)
    fn_reads: dict[FunctionDef, set[Var]] = field(default_factory=dict)
    fn_writes: dict[FunctionDef, set[Var]] = field(default_factory=dict)
    # With transitively called internal functions folded in.
    fn_all_reads: dict[FunctionDef, set[Var]] = field(default_factory=dict)
    fn_all_writes: dict[FunctionDef, set[Var]] = field(default_factory=dict)

    @property
    def contract_reads(self) -> set[Var]:
        out: set[Var] = set()
        for s in self.fn_all_reads.values():
            out |= s
        return out

    @property
    def contract_writes(self) -> set[Var]:
        out: set[Var] = set()
        for s in self.fn_all_writes.values():
            out |= s
        return out

    def state_read(self, fn: FunctionDef, transitive: bool = True) -> set[VariableDecl]:
        source = self.fn_all_reads if transitive else self.fn_reads
        return _state_only(source.get(fn, set()))

    def state_written(self, fn: FunctionDef, transitive: bool = True) -> set[VariableDecl]:
        source = self.fn_all_writes if transitive else self.fn_writes
        return _state_only(source.get(fn, set()))

    def locals_read(self, fn: FunctionDef) -> set[VariableDecl]:
        return _local_only(self.fn_reads.get(fn, set()))

    def locals_written(self, fn: FunctionDef) -> set[VariableDecl]:
        return _local_only(self.fn_writes.get(fn, set()))

    def contract_state_read(self) -> set[VariableDecl]:
        return _state_only(self.contract_reads)

    def contract_state_written(self) -> set[VariableDecl]:
        return _state_only(self.contract_writes)


def compute_read_write_sets(contract: ContractDef, function_analyses, callgraph) -> ReadWriteSets:
    sets = ReadWriteSets(contract)
    for fa in function_analyses:
        fn = fa.function
        fn_reads: set[Var] = set()
        fn_writes: set[Var] = set()
        for node in fa.cfg.nodes:
            node_reads: set[Var] = set()
            node_writes: set[Var] = set()
            for instr in node.irs:
                node_reads |= instruction_reads(fa.lowered, fa.aliases, instr)
                node_writes |= instruction_writes(fa.lowered, fa.aliases, instr)
            sets.node_reads[node] = node_reads
            sets.node_writes[node] = node_writes
            fn_reads |= node_reads
            fn_writes |= node_writes
        sets.fn_reads[fn] = fn_reads
        sets.fn_writes[fn] = fn_writes

    # Fold in internal callees; transitive_internal is already cycle-safe.
    for fa in function_analyses:
        fn = fa.function
        all_reads = set(sets.fn_reads[fn])
        all_writes = set(sets.fn_writes[fn])
        for callee in callgraph.transitive_internal(fn):
            all_reads |= sets.fn_reads.get(callee, set())
            all_writes |= sets.fn_writes.get(callee, set())
        sets.fn_all_reads[fn] = all_reads
        sets.fn_all_writes[fn] = all_writes
    return sets
