"""Reentrancy: a state variable read before an external call and written
after it lets the called contract re-enter and observe stale state.

Scope is per entry point, with internal calls folded in transitively.
Findings where no written-after variable was read before the call are
benign (same effect as two successive calls) and downgrade to
Informational, as do findings in protected functions (only the owner
could act maliciously).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from soliscope.cfg import Node
from soliscope.frontend.astnodes import ContractKind, FunctionDef, VariableDecl, VarScope
from soliscope.ir.instructions import InternalCall, Send, Transfer, is_external_call
from soliscope.analysis.readwrite import instruction_reads, instruction_writes
from soliscope.detectors.base import (
    Confidence,
    Finding,
    Severity,
    function_element,
    make_finding,
    node_element,
    variable_element,
)
from soliscope.pipeline import ContractAnalysis, FunctionAnalysis, SourceAnalysis

ID = "reentrancy"


@dataclass
class _Summary:
    """Reentrancy-relevant behavior of one function, callees folded in."""

    has_external: bool = False
    has_value_call: bool = False
    pre_reads: set[VariableDecl] = field(default_factory=set)   # read before/at a call
    post_writes: set[VariableDecl] = field(default_factory=set)  # written after a call


def _carries_value(instr) -> bool:
    if isinstance(instr, (Send, Transfer)):
        return True
    return getattr(instr, "value", None) is not None


def _state_filter(vars) -> set[VariableDecl]:
    return {v for v in vars if isinstance(v, VariableDecl) and v.scope is VarScope.STATE}


class _ContractScanner:
    def __init__(self, ca: ContractAnalysis):
        self.ca = ca
        self.summaries: dict[FunctionDef, _Summary] = {}

    # -- per-node effects with internal calls folded --------------------------

    def _callees(self, node: Node) -> list[FunctionDef]:
        return [i.function for i in node.irs if isinstance(i, InternalCall)]

    def _node_reads(self, fa: FunctionAnalysis, node: Node) -> set[VariableDecl]:
        out = _state_filter(self.ca.readwrite.node_reads.get(node, set()))
        for callee in self._callees(node):
            out |= _state_filter(self.ca.readwrite.fn_all_reads.get(callee, set()))
        return out

    def _node_writes(self, fa: FunctionAnalysis, node: Node) -> set[VariableDecl]:
        out = _state_filter(self.ca.readwrite.node_writes.get(node, set()))
        for callee in self._callees(node):
            out |= _state_filter(self.ca.readwrite.fn_all_writes.get(callee, set()))
        return out

    # -- call sites ------------------------------------------------------------

    def _call_sites(self, fa: FunctionAnalysis):
        """(node, index, value flag, folded pre-reads, folded post-writes)."""
        sites = []
        for node in fa.cfg.nodes:
            for idx, instr in enumerate(node.irs):
                if is_external_call(instr):
                    sites.append((node, idx, _carries_value(instr), set(), set()))
                elif isinstance(instr, InternalCall):
                    summary = self.summaries.get(instr.function)
                    if summary is not None and summary.has_external:
                        sites.append((node, idx, summary.has_value_call,
                                      set(summary.pre_reads), set(summary.post_writes)))
        return sites

    def _site_context(self, fa: FunctionAnalysis, node: Node, idx: int,
                      folded_pre: set, folded_post: set):
        """State vars read on some entry path to the call and written on
        some path after it, instruction positions respected at the site."""
        before_nodes = _backward_reachable(node) - {node}
        after_nodes = _forward_reachable(node) - {node}

        reads = set()
        for n in before_nodes:
            reads |= self._node_reads(fa, n)
        for instr in node.irs[: idx + 1]:
            reads |= _state_filter(
                instruction_reads(fa.lowered, fa.aliases, instr)
            )
            if isinstance(instr, InternalCall):
                reads |= _state_filter(self.ca.readwrite.fn_all_reads.get(instr.function, set()))
        reads |= folded_pre

        writes = set()
        for n in after_nodes:
            writes |= self._node_writes(fa, n)
        for instr in node.irs[idx + 1 :]:
            writes |= _state_filter(
                instruction_writes(fa.lowered, fa.aliases, instr)
            )
            if isinstance(instr, InternalCall):
                writes |= _state_filter(self.ca.readwrite.fn_all_writes.get(instr.function, set()))
        writes |= folded_post
        return reads, writes

    # -- summaries ----------------------------------------------------------------

    def compute_summaries(self) -> None:
        for fa in self.ca.functions:
            self.summaries[fa.function] = _Summary()
        changed = True
        while changed:
            changed = False
            for fa in self.ca.functions:
                new = self._summarize(fa)
                old = self.summaries[fa.function]
                if (new.has_external != old.has_external
                        or new.has_value_call != old.has_value_call
                        or new.pre_reads != old.pre_reads
                        or new.post_writes != old.post_writes):
                    self.summaries[fa.function] = new
                    changed = True

    def _summarize(self, fa: FunctionAnalysis) -> _Summary:
        summary = _Summary()
        for node, idx, value_flag, folded_pre, folded_post in self._call_sites(fa):
            summary.has_external = True
            summary.has_value_call = summary.has_value_call or value_flag
            reads, writes = self._site_context(fa, node, idx, folded_pre, folded_post)
            summary.pre_reads |= reads
            summary.post_writes |= writes
        return summary

    # -- findings -------------------------------------------------------------------

    def scan_function(self, analysis: SourceAnalysis, fa: FunctionAnalysis):
        sites = self._call_sites(fa)
        if not sites:
            return None

        dangerous: set[VariableDecl] = set()
        written_after: set[VariableDecl] = set()
        dangerous_with_value = False
        call_nodes: list[Node] = []
        for node, idx, value_flag, folded_pre, folded_post in sites:
            reads, writes = self._site_context(fa, node, idx, folded_pre, folded_post)
            overlap = reads & writes
            if writes and node not in call_nodes:
                call_nodes.append(node)
            written_after |= writes
            dangerous |= overlap
            if overlap and value_flag:
                dangerous_with_value = True

        if not written_after:
            return None  # nothing written after any call

        fn = fa.function
        protected = self.ca.is_protected(fn)
        if not dangerous:
            severity = Severity.INFORMATIONAL
            note = "benign: writes after the call were not read before it"
        elif protected:
            severity = Severity.INFORMATIONAL
            note = "requires privileges: the caller is checked against msg.sender"
        elif dangerous_with_value:
            severity = Severity.HIGH
            note = "ether is sent and stale state is read before the call"
        else:
            severity = Severity.MEDIUM
            note = "state is read before the call and written after it"

        variables = sorted(dangerous or written_after, key=lambda d: d.name)
        names = ", ".join(d.name for d in variables)
        message = (
            f"Reentrancy in {self.ca.contract.name}.{fn.signature}: "
            f"external call followed by state write ({names}); {note}"
        )
        elements = [node_element(analysis, call_nodes[0])] if call_nodes else []
        elements.append(function_element(fn))
        elements.extend(variable_element(d) for d in variables)
        return make_finding(analysis, ID, severity, Confidence.MEDIUM, message, elements)


def _forward_reachable(node: Node) -> set[Node]:
    seen = {node}
    work = [node]
    while work:
        for succ in work.pop().successors:
            if succ not in seen:
                seen.add(succ)
                work.append(succ)
    return seen


def _backward_reachable(node: Node) -> set[Node]:
    seen = {node}
    work = [node]
    while work:
        for pred in work.pop().predecessors:
            if pred not in seen:
                seen.add(pred)
                work.append(pred)
    return seen


def detect(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is not ContractKind.CONTRACT:
            continue
        scanner = _ContractScanner(ca)
        scanner.compute_summaries()
        for fa in ca.functions:
            if not fa.is_entry_point:
                continue
            finding = scanner.scan_function(analysis, fa)
            if finding is not None:
                findings.append(finding)
    return findings
