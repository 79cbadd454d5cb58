"""The ownership heuristic: a function is protected when it is the
constructor, or when msg.sender takes part in a comparison anywhere in its
body or inlined modifiers. A comparison against a variable that carries
msg.sender (t = msg.sender; t == owner) counts too.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from soliscope.cfg import Node
from soliscope.frontend.astnodes import FunctionDef
from soliscope.ir.instructions import Binary
from soliscope.ir.variables import DeclaredVar, MSG_SENDER
from soliscope.analysis.dependency import DependencyAnalysis


@dataclass
class ProtectionInfo:
    protected: dict[FunctionDef, bool] = field(default_factory=dict)
    # Node holding the msg.sender comparison, for reporting.
    evidence: dict[FunctionDef, Optional[Node]] = field(default_factory=dict)

    def is_protected(self, fn: FunctionDef) -> bool:
        return self.protected.get(fn, False)


def _compares_msg_sender(fa, deps: DependencyAnalysis) -> Optional[Node]:
    fn = fa.function
    for node in fa.cfg.nodes:
        for instr in node.irs:
            if not (isinstance(instr, Binary) and instr.is_comparison):
                continue
            for op in (instr.left, instr.right):
                if op == MSG_SENDER:
                    return node
                if isinstance(op, DeclaredVar) \
                        and MSG_SENDER in deps.deps(op.decl, fn=fn):
                    return node
    return None


def compute_protection(function_analyses, deps: DependencyAnalysis) -> ProtectionInfo:
    info = ProtectionInfo()
    for fa in function_analyses:
        fn = fa.function
        if fn.is_constructor:
            info.protected[fn] = True
            info.evidence[fn] = None
            continue
        node = _compares_msg_sender(fa, deps)
        info.protected[fn] = node is not None
        info.evidence[fn] = node
    return info
