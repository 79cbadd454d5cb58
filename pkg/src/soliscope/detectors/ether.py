"""Ether-handling detectors: suicidal contracts, locked ether, arbitrary
sends."""

from __future__ import annotations

from soliscope.frontend.astnodes import ContractKind, FunctionDef
from soliscope.ir.instructions import (
    LowLevelCall,
    Send,
    SolidityCall,
    Transfer,
)
from soliscope.ir.variables import MSG_SENDER
from soliscope.ssa import SsaVariable
from soliscope.analysis.dependency import UNPRIVILEGED
from soliscope.detectors.base import (
    Confidence,
    Finding,
    Severity,
    contract_element,
    function_element,
    make_finding,
    node_element,
)
from soliscope.pipeline import ContractAnalysis, SourceAnalysis

SUICIDAL_ID = "suicidal"
LOCKED_ID = "locked-ether"
ARBITRARY_ID = "arbitrary-send"


def _functions_with_folded(ca: ContractAnalysis, fn: FunctionDef):
    """The function plus its transitively called internal functions."""
    out = [fn]
    out.extend(ca.callgraph.transitive_internal(fn))
    return [ca.analysis_of(f) for f in out if ca.analysis_of(f) is not None]


def _is_selfdestruct(instr) -> bool:
    return isinstance(instr, SolidityCall) and instr.function_name == "selfdestruct"


def detect_suicidal(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is not ContractKind.CONTRACT:
            continue
        for fa in ca.functions:
            if not fa.is_entry_point or ca.is_protected(fa.function):
                continue
            hit = None
            for callee_fa in _functions_with_folded(ca, fa.function):
                for node in callee_fa.cfg.nodes:
                    if any(_is_selfdestruct(i) for i in node.irs):
                        hit = node
                        break
                if hit is not None:
                    break
            if hit is None:
                continue
            message = (
                f"{ca.contract.name}.{fa.function.signature} is unprotected "
                f"and can destroy the contract"
            )
            findings.append(make_finding(
                analysis, SUICIDAL_ID, Severity.HIGH, Confidence.HIGH, message,
                [function_element(fa.function), node_element(analysis, hit)],
            ))
    return findings


def _has_outflow(ca: ContractAnalysis) -> bool:
    for fa in ca.functions:
        for node in fa.cfg.nodes:
            for instr in node.irs:
                if isinstance(instr, (Transfer, Send)):
                    return True
                if isinstance(instr, LowLevelCall) and instr.value is not None:
                    return True
                if _is_selfdestruct(instr):
                    return True
    return False


def detect_locked_ether(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is not ContractKind.CONTRACT:
            continue
        payable = [fa.function for fa in ca.functions if fa.function.is_payable]
        if not payable or _has_outflow(ca):
            continue
        message = (
            f"{ca.contract.name} accepts ether "
            f"({', '.join(sorted(f.name for f in payable))}) but has no way to send it out"
        )
        findings.append(make_finding(
            analysis, LOCKED_ID, Severity.MEDIUM, Confidence.HIGH, message,
            [contract_element(ca.contract)],
        ))
    return findings


def detect_arbitrary_send(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is not ContractKind.CONTRACT:
            continue
        for fa in ca.functions:
            if not fa.is_entry_point or ca.is_protected(fa.function):
                continue
            for callee_fa in _functions_with_folded(ca, fa.function):
                for node in callee_fa.cfg.nodes:
                    for instr in node.ssa_irs:
                        dest = None
                        if isinstance(instr, (Send, Transfer)):
                            dest = instr.dest
                        elif isinstance(instr, LowLevelCall) and instr.value is not None:
                            dest = instr.dest
                        if dest is None or dest == MSG_SENDER:
                            continue  # paying the caller back is not arbitrary
                        tainted = ca.deps.is_operand_tainted(
                            dest, callee_fa.function, UNPRIVILEGED
                        ) if isinstance(dest, SsaVariable) else False
                        if not tainted:
                            continue
                        message = (
                            f"{ca.contract.name}.{fa.function.signature} sends ether "
                            f"to a destination controlled by an unprivileged caller"
                        )
                        findings.append(make_finding(
                            analysis, ARBITRARY_ID, Severity.HIGH, Confidence.MEDIUM,
                            message,
                            [node_element(analysis, node), function_element(fa.function)],
                        ))
    return findings
