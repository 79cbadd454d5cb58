"""Uninitialized state and local variables.

State: flagged when read somewhere but never written by any function or
constructor (alias-aware) and lacking an initializer. Local: flagged when
the never-assigned initial SSA version can reach a read on some path.
"""

from __future__ import annotations

from soliscope.frontend.astnodes import ContractKind, VariableDecl, VarScope
from soliscope.ir.instructions import Phi
from soliscope.ir.variables import DeclaredVar
from soliscope.ssa import SsaVariable
from soliscope.detectors.base import (
    Confidence,
    Finding,
    Severity,
    function_element,
    make_finding,
    variable_element,
)
from soliscope.pipeline import FunctionAnalysis, SourceAnalysis

STATE_ID = "uninitialized-state"
LOCAL_ID = "uninitialized-local"


def detect_state(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is not ContractKind.CONTRACT or ca.readwrite is None:
            continue
        read = ca.readwrite.contract_state_read()
        written = ca.readwrite.contract_state_written()
        for decl in ca.table.state_variables:
            if decl.initializer is not None or decl.is_constant:
                continue
            if decl in read and decl not in written:
                message = (
                    f"{ca.contract.name}.{decl.name} is never initialized "
                    f"and is read by the contract"
                )
                findings.append(make_finding(
                    analysis, STATE_ID, Severity.HIGH, Confidence.HIGH, message,
                    [variable_element(decl)],
                ))
    return findings


def _suspect_versions(fa: FunctionAnalysis) -> set[SsaVariable]:
    """Initial versions of locals, closed over phi merges."""
    implicit_ok = set(fa.lowered.extra_parameters)
    suspects: set[SsaVariable] = set()
    for node in fa.cfg.nodes:
        for instr in node.ssa_irs:
            for op in instr.reads():
                if not isinstance(op, SsaVariable) or op.version != 0:
                    continue
                base = op.base
                if isinstance(base, DeclaredVar) and base.decl.scope is VarScope.LOCAL \
                        and base.decl not in implicit_ok:
                    suspects.add(op)
    changed = True
    while changed:
        changed = False
        for node in fa.cfg.nodes:
            for instr in node.ssa_irs:
                if isinstance(instr, Phi) and instr.lvalue not in suspects:
                    if any(op in suspects for op in instr.operands if isinstance(op, SsaVariable)):
                        suspects.add(instr.lvalue)
                        changed = True
    return suspects


def detect_local(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        for fa in ca.functions:
            suspects = _suspect_versions(fa)
            if not suspects:
                continue
            flagged: set[VariableDecl] = set()
            for node in fa.cfg.nodes:
                for instr in node.ssa_irs:
                    if isinstance(instr, Phi):
                        continue
                    for op in instr.reads():
                        if isinstance(op, SsaVariable) and op in suspects \
                                and isinstance(op.base, DeclaredVar):
                            flagged.add(op.base.decl)
            for decl in sorted(flagged, key=lambda d: d.name):
                message = (
                    f"{ca.contract.name}.{fa.function.name}: local variable "
                    f"'{decl.name}' may be read before it is assigned"
                )
                findings.append(make_finding(
                    analysis, LOCAL_ID, Severity.MEDIUM, Confidence.MEDIUM, message,
                    [variable_element(decl), function_element(fa.function)],
                ))
    return findings
