"""SSA construction with contract-specific phi placement.

State variables behave like globals that any transaction (or a reentrant
external call) may rewrite, so beyond the classic join phis this pass
places a phi at function entry for every state variable the function
reads, and another after every external call instruction. Writes through
storage references are weak updates: every may-alias target gets a new
version merging its old version with the written value.

The non-SSA instruction lists are kept untouched on `node.irs`; the SSA
form lives in `node.ssa_irs`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from soliscope.cfg import Cfg, DomInfo, Node
from soliscope.frontend.astnodes import VariableDecl, VarScope
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
from soliscope.ir.lowering import LoweredFunction
from soliscope.ir.variables import (
    BuiltinVar,
    Constant,
    DeclaredVar,
    IrVariable,
    ReferenceVar,
    TemporaryVar,
    TupleVar,
)

AliasMap = dict[VariableDecl, set[VariableDecl]]


def compute_storage_aliases(lowered: LoweredFunction) -> AliasMap:
    """May-point-to sets for every storage-reference local.

    Flow-insensitive fixpoint over assignments: `ref = stateVar` adds the
    state variable, `ref = ref2` adds ref2's targets; joins are set union.
    A reference never assigned keeps an empty set (reported downstream as
    an uninitialized local, not a crash).
    """
    targets: AliasMap = {}
    for node in lowered.cfg.nodes:
        for instr in node.irs:
            for op in list(instr.reads()) + [instr.lvalue]:
                if isinstance(op, DeclaredVar) and op.decl.is_storage_reference:
                    targets.setdefault(op.decl, set())

    assignments: list[tuple[VariableDecl, IrVariable]] = []
    for node in lowered.cfg.nodes:
        for instr in node.irs:
            if isinstance(instr, Assignment) and isinstance(instr.lvalue, DeclaredVar):
                decl = instr.lvalue.decl
                if decl.is_storage_reference:
                    assignments.append((decl, instr.rvalue))

    changed = True
    while changed:
        changed = False
        for decl, rvalue in assignments:
            base = lowered.ultimate_base(rvalue)
            new: set[VariableDecl] = set()
            if isinstance(base, DeclaredVar):
                if base.is_state:
                    new.add(base.decl)
                elif base.decl.is_storage_reference:
                    new |= targets.get(base.decl, set())
            if not new <= targets[decl]:
                targets[decl] |= new
                changed = True
    return targets


@dataclass(frozen=True)
class SsaVariable:
    """One version of a base variable; exactly one definition each."""

    base: IrVariable
    version: int

    @property
    def name(self) -> str:
        return self.base.name

    @property
    def type(self):
        return self.base.type

    def __str__(self) -> str:
        if isinstance(self.base, (TemporaryVar, ReferenceVar, TupleVar)):
            return str(self.base)
        return f"{self.base.name}_{self.version}"


Operand = Union[SsaVariable, BuiltinVar, Constant]


def write_targets(lowered: LoweredFunction, aliases: AliasMap,
                  ref: ReferenceVar) -> list[VariableDecl]:
    """Declared variables a write through `ref` may update, name-sorted."""
    base = lowered.ultimate_base(ref)
    if not isinstance(base, DeclaredVar):
        return []
    if base.is_state:
        return [base.decl]
    if base.decl.is_storage_reference:
        return sorted(aliases.get(base.decl, ()), key=lambda d: d.name)
    return [base.decl]


def state_variables_read(lowered: LoweredFunction, aliases: AliasMap) -> list[VariableDecl]:
    """State variables read by the function, alias targets included."""
    out: set[VariableDecl] = set()
    for instr in lowered.instructions():
        for op in instr.reads():
            base = lowered.ultimate_base(op) if isinstance(op, ReferenceVar) else op
            if isinstance(base, DeclaredVar):
                if base.is_state:
                    out.add(base.decl)
                elif base.decl.is_storage_reference:
                    out |= aliases.get(base.decl, set())
    return sorted(out, key=lambda d: d.name)


@dataclass
class SsaFunction:
    lowered: LoweredFunction
    dominfo: DomInfo
    aliases: AliasMap
    state_reads: list[VariableDecl]
    # Definition site of every SSA variable: (node, index in ssa_irs).
    definitions: dict[SsaVariable, tuple[Node, int]] = field(default_factory=dict)

    @property
    def cfg(self) -> Cfg:
        return self.lowered.cfg

    def phis(self, placement: Optional[str] = None) -> list[tuple[Node, Phi]]:
        out = []
        for node in self.cfg.nodes:
            for instr in node.ssa_irs:
                if isinstance(instr, Phi) and (placement is None or instr.placement == placement):
                    out.append((node, instr))
        return out

    def erased(self, node: Node) -> list[Instruction]:
        """SSA list with phis dropped and versions stripped."""
        out = []
        for instr in node.ssa_irs:
            if isinstance(instr, Phi):
                continue
            out.append(_map_instruction(instr, _strip, _strip))
        return out


def _strip(op):
    return op.base if isinstance(op, SsaVariable) else op


def _map_instruction(instr: Instruction, read, write) -> Instruction:
    """Rebuild an instruction with mapped operands."""
    if isinstance(instr, Assignment):
        return Assignment(write(instr.lvalue), read(instr.rvalue))
    if isinstance(instr, Binary):
        return Binary(write(instr.lvalue), instr.op, read(instr.left), read(instr.right))
    if isinstance(instr, Unary):
        return Unary(write(instr.lvalue), instr.op, read(instr.operand))
    if isinstance(instr, Index):
        return Index(write(instr.lvalue), read(instr.base), read(instr.index))
    if isinstance(instr, Member):
        return Member(write(instr.lvalue), read(instr.base), instr.member)
    if isinstance(instr, LowLevelCall):
        return LowLevelCall(write(instr.lvalue), read(instr.dest), instr.function_name,
                            [read(a) for a in instr.args],
                            read(instr.value) if instr.value is not None else None)
    if isinstance(instr, HighLevelCall):
        return HighLevelCall(write(instr.lvalue), read(instr.dest), instr.function_name,
                             [read(a) for a in instr.args],
                             read(instr.value) if instr.value is not None else None)
    if isinstance(instr, LibraryCall):
        return LibraryCall(write(instr.lvalue), instr.library, instr.function,
                           [read(a) for a in instr.args])
    if isinstance(instr, SolidityCall):
        return SolidityCall(write(instr.lvalue), instr.function_name,
                            [read(a) for a in instr.args])
    if isinstance(instr, InternalCall):
        return InternalCall(write(instr.lvalue), instr.function, [read(a) for a in instr.args])
    if isinstance(instr, DynamicCall):
        return DynamicCall(write(instr.lvalue), read(instr.target),
                           [read(a) for a in instr.args])
    if isinstance(instr, EventCall):
        return EventCall(instr.event, [read(a) for a in instr.args])
    if isinstance(instr, Send):
        return Send(write(instr.lvalue), read(instr.dest), read(instr.value))
    if isinstance(instr, Transfer):
        return Transfer(read(instr.dest), read(instr.value))
    if isinstance(instr, Push):
        # Appending reads the array (length) and weak-updates it; the new
        # version is materialized as a weak-update phi by the renamer.
        return Push(read(instr.array), read(instr.value))
    if isinstance(instr, Convert):
        return Convert(write(instr.lvalue), read(instr.operand), instr.target_type)
    if isinstance(instr, Unpack):
        return Unpack(write(instr.lvalue), read(instr.source), instr.index)
    if isinstance(instr, Return):
        return Return([read(v) for v in instr.values])
    if isinstance(instr, Condition):
        return Condition(read(instr.value))
    if isinstance(instr, NewElementary):
        return NewElementary(write(instr.lvalue), instr.type, [read(a) for a in instr.args])
    if isinstance(instr, NewArray):
        return NewArray(write(instr.lvalue), instr.type, read(instr.length))
    if isinstance(instr, NewStructure):
        return NewStructure(write(instr.lvalue), instr.struct, [read(a) for a in instr.args])
    raise AssertionError(f"unmapped instruction {type(instr).__name__}")


class _Renamer:
    def __init__(self, lowered: LoweredFunction, dominfo: DomInfo, aliases: AliasMap):
        self.lowered = lowered
        self.dominfo = dominfo
        self.aliases = aliases
        self.state_reads = state_variables_read(lowered, aliases)
        self.counters: dict[IrVariable, int] = {}
        self.stacks: dict[IrVariable, list[int]] = {}
        self.join_phis: dict[Node, list[Phi]] = {n: [] for n in lowered.cfg.nodes}
        self.result = SsaFunction(lowered, dominfo, aliases, self.state_reads)

    # -- version bookkeeping --------------------------------------------------

    def _current(self, base: IrVariable) -> int:
        stack = self.stacks.get(base)
        return stack[-1] if stack else 0

    def _fresh(self, base: IrVariable, pushed: list[IrVariable]) -> SsaVariable:
        version = self.counters.get(base, 0) + 1
        self.counters[base] = version
        self.stacks.setdefault(base, []).append(version)
        pushed.append(base)
        return SsaVariable(base, version)

    def _read(self, op):
        if isinstance(op, (DeclaredVar, TemporaryVar, ReferenceVar, TupleVar)):
            if isinstance(op, DeclaredVar):
                return SsaVariable(op, self._current(op))
            return SsaVariable(op, 0)
        return op

    # -- phi placement ---------------------------------------------------------

    def _collect_def_sites(self) -> dict[VariableDecl, set[Node]]:
        sites: dict[VariableDecl, set[Node]] = {}

        def add(decl: VariableDecl, node: Node) -> None:
            sites.setdefault(decl, set()).add(node)

        entry = self.lowered.cfg.entry
        for decl in self.state_reads:
            add(decl, entry)  # entry phi is a definition

        for node in self.lowered.cfg.nodes:
            has_external_call = False
            for instr in node.irs:
                if is_external_call(instr):
                    has_external_call = True
                lvalue = instr.lvalue if not isinstance(instr, Push) else instr.array
                if isinstance(lvalue, ReferenceVar):
                    for decl in write_targets(self.lowered, self.aliases, lvalue):
                        add(decl, node)
                elif isinstance(lvalue, DeclaredVar):
                    add(lvalue.decl, node)
            if has_external_call:
                for decl in self.state_reads:
                    add(decl, node)  # post-call phi is a definition
        return sites

    def _place_join_phis(self) -> None:
        frontier = self.dominfo.frontier
        for decl, sites in sorted(self._collect_def_sites().items(), key=lambda kv: kv[0].name):
            placed: set[Node] = set()
            work = list(sites)
            while work:
                node = work.pop()
                for join in frontier.get(node, ()):
                    if join in placed:
                        continue
                    placed.add(join)
                    phi = Phi(None, [None] * len(join.predecessors), Phi.JOIN,
                              for_state=decl.scope is VarScope.STATE, decl=decl)
                    self.join_phis[join].append(phi)
                    if join not in sites:
                        work.append(join)

    # -- renaming ----------------------------------------------------------------

    def run(self) -> SsaFunction:
        self._place_join_phis()
        children = self.dominfo.tree_children()
        # Dominator-tree walk with an explicit stack; bodies can be long.
        stack: list[tuple[Node, Optional[list[IrVariable]]]] = [(self.lowered.cfg.entry, None)]
        while stack:
            node, pushed = stack.pop()
            if pushed is None:
                pushed = self._process(node)
                stack.append((node, pushed))
                for child in reversed(children.get(node, [])):
                    stack.append((child, None))
            else:
                for base in pushed:
                    self.stacks[base].pop()
        return self.result

    def _define(self, node: Node, ssa_irs: list, var: SsaVariable) -> None:
        self.result.definitions[var] = (node, len(ssa_irs) - 1)

    def _process(self, node: Node) -> list[IrVariable]:
        pushed: list[IrVariable] = []
        ssa_irs: list[Instruction] = []

        if node is self.lowered.cfg.entry:
            for decl in self.state_reads:
                base = DeclaredVar(decl)
                target = self._fresh(base, pushed)
                phi = Phi(target, [], Phi.ENTRY, for_state=True, decl=decl)
                ssa_irs.append(phi)
                self._define(node, ssa_irs, target)

        for phi in self.join_phis[node]:
            base = DeclaredVar(phi.decl)
            phi.lvalue = self._fresh(base, pushed)
            ssa_irs.append(phi)
            self._define(node, ssa_irs, phi.lvalue)

        for instr in node.irs:
            # Reads are mapped before the write creates a new version.
            mapped = _map_instruction(instr, self._read, lambda op: op)
            write_target = None

            def write(op):
                nonlocal write_target
                if isinstance(op, DeclaredVar):
                    write_target = self._fresh(op, pushed)
                    return write_target
                if isinstance(op, (TemporaryVar, ReferenceVar, TupleVar)):
                    return SsaVariable(op, 0)
                return op

            mapped = _map_instruction(mapped, lambda op: op, write)
            ssa_irs.append(mapped)

            if write_target is not None:
                self._define(node, ssa_irs, write_target)
            elif isinstance(mapped.lvalue, SsaVariable) and not isinstance(instr, Assignment):
                # TMP/REF/TUPLE definitions (version 0).
                self.result.definitions.setdefault(mapped.lvalue, (node, len(ssa_irs) - 1))

            # Writes through a reference (and array pushes) are weak
            # updates of every may-target.
            weak: Optional[tuple[list[VariableDecl], Operand]] = None
            if isinstance(instr, Assignment) and isinstance(instr.lvalue, ReferenceVar):
                weak = (write_targets(self.lowered, self.aliases, instr.lvalue),
                        self._read(instr.rvalue))
            elif isinstance(instr, Push):
                if isinstance(instr.array, ReferenceVar):
                    weak = (write_targets(self.lowered, self.aliases, instr.array),
                            self._read(instr.value))
                elif isinstance(instr.array, DeclaredVar):
                    weak = ([instr.array.decl], self._read(instr.value))
            if weak is not None:
                for decl in weak[0]:
                    base = DeclaredVar(decl)
                    old = SsaVariable(base, self._current(base))
                    target = self._fresh(base, pushed)
                    phi = Phi(target, [old, weak[1]], Phi.WEAK_UPDATE,
                              for_state=decl.scope is VarScope.STATE, decl=decl)
                    ssa_irs.append(phi)
                    self._define(node, ssa_irs, target)

            if is_external_call(instr):
                # Reentrancy may rewrite any state variable this function reads.
                for decl in self.state_reads:
                    base = DeclaredVar(decl)
                    old = SsaVariable(base, self._current(base))
                    target = self._fresh(base, pushed)
                    phi = Phi(target, [old], Phi.POST_CALL, for_state=True, decl=decl)
                    ssa_irs.append(phi)
                    self._define(node, ssa_irs, target)

        node.ssa_irs = ssa_irs

        for succ in node.successors:
            for phi in self.join_phis[succ]:
                base = DeclaredVar(phi.decl)
                version = SsaVariable(base, self._current(base))
                for i, pred in enumerate(succ.predecessors):
                    if pred is node:
                        phi.operands[i] = version

        return pushed


def to_ssa(lowered: LoweredFunction, dominfo: DomInfo, aliases: AliasMap) -> SsaFunction:
    """Convert a lowered function to SSA; non-SSA IR is left in place."""
    return _Renamer(lowered, dominfo, aliases).run()
