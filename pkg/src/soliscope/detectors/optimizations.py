"""Optimization detectors: constable state variables and functions that
could be declared external."""

from __future__ import annotations

from soliscope.frontend.astnodes import (
    BinaryOp,
    BoolLiteral,
    ContractDef,
    ContractKind,
    Expression,
    Identifier,
    NumberLiteral,
    StringLiteral,
    TypeKind,
    UnaryOp,
    VariableDecl,
)
from soliscope.detectors.base import (
    Confidence,
    Finding,
    Severity,
    function_element,
    make_finding,
    variable_element,
)
from soliscope.pipeline import SourceAnalysis

CONSTABLE_ID = "constable-states"
EXTERNAL_ID = "external-function"


def _is_constant_expression(expr: Expression) -> bool:
    if isinstance(expr, (NumberLiteral, StringLiteral, BoolLiteral)):
        return True
    if isinstance(expr, UnaryOp):
        return _is_constant_expression(expr.operand)
    if isinstance(expr, BinaryOp):
        return _is_constant_expression(expr.left) and _is_constant_expression(expr.right)
    if isinstance(expr, Identifier):
        binding = expr.binding
        return isinstance(binding, VariableDecl) and binding.is_constant
    return False


def detect_constable(analysis: SourceAnalysis) -> list[Finding]:
    # A derived contract may write a base variable, so writes are pooled
    # across every analysis in the unit before flagging anything.
    written: set[VariableDecl] = set()
    for ca in analysis.contracts.values():
        if ca.readwrite is not None:
            written |= ca.readwrite.contract_state_written()

    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is ContractKind.INTERFACE:
            continue
        for decl in ca.contract.state_variables:
            if decl.is_constant or decl in written:
                continue
            if decl.type.kind is not TypeKind.ELEMENTARY:
                continue  # only value types can be declared constant
            if decl.initializer is not None and not _is_constant_expression(decl.initializer):
                continue
            message = (
                f"{ca.contract.name}.{decl.name} is never written; declaring it "
                f"constant saves storage space and gas"
            )
            findings.append(make_finding(
                analysis, CONSTABLE_ID, Severity.OPTIMIZATION, Confidence.HIGH,
                message, [variable_element(decl)],
            ))
    return findings


def _derived_of(analysis: SourceAnalysis, contract: ContractDef) -> list[ContractDef]:
    return [
        c for c in analysis.unit.contracts
        if contract in c.linearization
    ]


def detect_external(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is not ContractKind.CONTRACT:
            continue
        # Internal references anywhere in the hierarchy block the rewrite.
        referenced: set[str] = set()
        for derived in _derived_of(analysis, ca.contract):
            dca = analysis.contracts.get(derived.name)
            if dca is None or dca.callgraph is None:
                continue
            for targets in dca.callgraph.internal.values():
                referenced |= {t.name for t in targets}
            referenced |= {f.name for f in dca.callgraph.referenced}

        for fn in ca.contract.functions:
            if fn.visibility != "public" or fn.is_constructor or fn.body is None:
                continue
            if fn.name in referenced or fn.name == "fallback":
                continue
            message = (
                f"{ca.contract.name}.{fn.signature} is public but never called "
                f"internally; declaring it external lets the compiler optimize it"
            )
            findings.append(make_finding(
                analysis, EXTERNAL_ID, Severity.OPTIMIZATION, Confidence.HIGH,
                message, [function_element(fn)],
            ))
    return findings
