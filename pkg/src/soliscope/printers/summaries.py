"""Text and markdown printers: contract/function summaries, authorization
report, human-readable report with complexity and ERC20 heuristics."""

from __future__ import annotations

from collections import Counter
from typing import Optional

from soliscope.detectors.base import Finding, Severity
from soliscope.ir.instructions import (
    InternalCall,
    LibraryCall,
    is_external_call,
)
from soliscope.pipeline import ContractAnalysis, FunctionAnalysis, SourceAnalysis
from soliscope.printers.output import PrinterOutput

ERC20_SIGNATURES = (
    "transfer(address,uint256)",
    "transferFrom(address,address,uint256)",
    "approve(address,uint256)",
)


def _mutability(fn) -> str:
    if fn.is_payable:
        return "payable"
    if fn.is_pure:
        return "pure"
    if fn.is_view:
        return "view"
    return "nonpayable"


def print_contract_summary(analysis: SourceAnalysis) -> list[PrinterOutput]:
    lines = []
    for ca in analysis.ordered_contracts():
        contract = ca.contract
        lines.append(f"+ Contract {contract.name} ({contract.kind.value})")
        for fn in ca.table.functions:
            marker = " [constructor]" if fn.is_constructor else ""
            lines.append(f"  - {fn.signature} | {fn.visibility} | {_mutability(fn)}{marker}")
        lines.append("")
    return [PrinterOutput("contract-summary", "text", "\n".join(lines), "contract-summary")]


def _call_names(fa: FunctionAnalysis) -> tuple[list[str], list[str]]:
    internal, external = [], []
    for instr in fa.lowered.instructions():
        if isinstance(instr, InternalCall):
            internal.append(instr.function.name)
        elif isinstance(instr, LibraryCall):
            internal.append(f"{instr.library.name}.{instr.function.name}")
        elif is_external_call(instr):
            external.append(str(instr).split(" ", 2)[-1].split("(")[0])
    return sorted(set(internal)), sorted(set(external))


def print_function_summary(analysis: SourceAnalysis) -> list[PrinterOutput]:
    lines = []
    for ca in analysis.ordered_contracts():
        if not ca.functions:
            continue
        lines.append(f"Contract {ca.contract.name}")
        for fa in ca.functions:
            fn = fa.function
            reads = sorted(v.name for v in ca.readwrite.state_read(fn, transitive=False))
            writes = sorted(v.name for v in ca.readwrite.state_written(fn, transitive=False))
            internal, external = _call_names(fa)
            lines.append(f"  Function {fn.signature} | {fn.visibility} | {_mutability(fn)}")
            lines.append(f"    reads: {', '.join(reads) if reads else '-'}")
            lines.append(f"    writes: {', '.join(writes) if writes else '-'}")
            lines.append(f"    internal calls: {', '.join(internal) if internal else '-'}")
            lines.append(f"    external calls: {', '.join(external) if external else '-'}")
        lines.append("")
    return [PrinterOutput("function-summary", "text", "\n".join(lines), "function-summary")]


def _authorization(analysis: SourceAnalysis, ca: ContractAnalysis,
                   fa: FunctionAnalysis) -> str:
    if fa.function.is_constructor:
        return "constructor"
    node = ca.protection.evidence.get(fa.function)
    span = getattr(node.expression, "span", None) if node is not None else None
    if span is not None:
        return analysis.source.excerpt(span)
    return "msg.sender comparison"


def print_vars_and_auth(analysis: SourceAnalysis) -> list[PrinterOutput]:
    lines = []
    for ca in analysis.ordered_contracts():
        rows = []
        for fa in ca.functions:
            if not ca.is_protected(fa.function):
                continue
            writes = sorted(v.name for v in ca.readwrite.state_written(fa.function))
            rows.append((fa.function.name, _authorization(analysis, ca, fa),
                         ", ".join(writes) if writes else "-"))
        if not rows:
            continue
        lines.append(f"Contract {ca.contract.name}")
        lines.append("  Function | Authorization | State variables written")
        for name, auth, writes in rows:
            lines.append(f"  {name} | {auth} | {writes}")
        lines.append("")
    return [PrinterOutput("vars-and-auth", "text", "\n".join(lines), "vars-and-auth")]


def cyclomatic_complexity(fa: FunctionAnalysis) -> int:
    """E - N + 2 over the function's CFG."""
    nodes = len(fa.cfg.nodes)
    edges = sum(len(n.successors) for n in fa.cfg.nodes)
    return edges - nodes + 2


def _erc20_lines(ca: ContractAnalysis) -> list[str]:
    signatures = {fn.signature for fn in ca.table.functions}
    if not all(sig in signatures for sig in ERC20_SIGNATURES):
        return []
    lines = ["- ERC20 token: transfer/transferFrom/approve present"]
    minters = [fa for fa in ca.functions if "mint" in fa.function.name.lower()]
    if minters:
        if all(ca.is_protected(fa.function) for fa in minters):
            lines.append("- minting restricted: every minting function is protected")
        else:
            lines.append("- minting unrestricted: an unprotected function can mint")
    return lines


def print_human_summary(analysis: SourceAnalysis,
                        findings: Optional[list[Finding]] = None) -> list[PrinterOutput]:
    findings = findings or []
    lines = ["# Code quality report", ""]
    for ca in analysis.ordered_contracts():
        contract = ca.contract
        lines.append(f"## {contract.name}")
        counts = Counter()
        for finding in findings:
            for element in finding.elements:
                if element.type == "contract" and element.name == contract.name:
                    counts[finding.severity] += 1
                    break
                if element.name.startswith(contract.name + "."):
                    counts[finding.severity] += 1
                    break
        summary = ", ".join(
            f"{counts.get(sev, 0)} {sev.value}" for sev in Severity
        )
        lines.append(f"- findings: {summary}")
        total = 0
        per_fn = []
        for fa in ca.functions:
            complexity = cyclomatic_complexity(fa)
            total += complexity
            per_fn.append(f"  - {fa.function.signature}: {complexity}")
        lines.append(f"- cyclomatic complexity: {total}")
        lines.extend(per_fn)
        lines.extend(_erc20_lines(ca))
        lines.append("")
    return [PrinterOutput("human-summary", "markdown", "\n".join(lines), "human-summary")]
