"""Per-contract call graph over the lowered IR."""

from __future__ import annotations

from dataclasses import dataclass, field

from soliscope.cfg import Node
from soliscope.frontend.astnodes import ContractDef, FunctionDef
from soliscope.ir.instructions import (
    DynamicCall,
    HighLevelCall,
    Instruction,
    InternalCall,
    LibraryCall,
    is_external_call,
)
from soliscope.ir.variables import Constant


@dataclass
class CallGraph:
    contract: ContractDef
    internal: dict[FunctionDef, set[FunctionDef]] = field(default_factory=dict)
    libraries: dict[FunctionDef, set[tuple[ContractDef, FunctionDef]]] = field(default_factory=dict)
    high_level: dict[FunctionDef, set[str]] = field(default_factory=dict)
    dynamic: dict[FunctionDef, int] = field(default_factory=dict)
    # Functions referenced as values (candidates for dynamic dispatch).
    referenced: set[FunctionDef] = field(default_factory=set)
    external_call_sites: dict[FunctionDef, list[tuple[Node, Instruction]]] = field(
        default_factory=dict
    )

    def transitive_internal(self, fn: FunctionDef) -> set[FunctionDef]:
        """All internal callees reachable from fn, cycle-safe; excludes fn
        itself unless it is reachable through a cycle."""
        seen: set[FunctionDef] = set()
        work = list(self.internal.get(fn, ()))
        while work:
            callee = work.pop()
            if callee in seen:
                continue
            seen.add(callee)
            work.extend(self.internal.get(callee, ()))
        return seen


def build_call_graph(contract: ContractDef, function_analyses) -> CallGraph:
    graph = CallGraph(contract)
    for fa in function_analyses:
        fn = fa.function
        graph.internal.setdefault(fn, set())
        graph.libraries.setdefault(fn, set())
        graph.high_level.setdefault(fn, set())
        graph.dynamic.setdefault(fn, 0)
        graph.external_call_sites.setdefault(fn, [])
        for node in fa.cfg.nodes:
            for instr in node.irs:
                if isinstance(instr, InternalCall):
                    graph.internal[fn].add(instr.function)
                elif isinstance(instr, LibraryCall):
                    graph.libraries[fn].add((instr.library, instr.function))
                elif isinstance(instr, HighLevelCall):
                    graph.high_level[fn].add(instr.function_name)
                elif isinstance(instr, DynamicCall):
                    graph.dynamic[fn] += 1
                if is_external_call(instr):
                    graph.external_call_sites[fn].append((node, instr))
                for op in instr.reads():
                    if isinstance(op, Constant) and isinstance(op.value, FunctionDef):
                        graph.referenced.add(op.value)
    return graph
