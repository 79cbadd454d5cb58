"""Shadowing: redeclared state variables, locals hiding state, parameters
named like builtins. Shadowed elements may not refer to what the author
expects."""

from __future__ import annotations

from soliscope.frontend.names import ShadowPair
from soliscope.detectors.base import (
    Confidence,
    Finding,
    Severity,
    make_finding,
    variable_element,
)
from soliscope.pipeline import SourceAnalysis

ID = "shadowing"

_SEVERITY_BY_KIND = {
    "state-over-state": Severity.HIGH,
    "local-over-state": Severity.LOW,
    "builtin": Severity.LOW,
}


def _describe(pair: ShadowPair, contract_name: str) -> str:
    inner, outer = pair.names()
    if pair.kind == "state-over-state":
        return (f"{contract_name}.{inner} shadows a state variable "
                f"declared in a base contract")
    if pair.kind == "local-over-state":
        return (f"{contract_name}: '{inner}' shadows the contract's "
                f"state variable of the same name")
    return f"{contract_name}: '{inner}' shadows the builtin name '{outer}'"


def detect(analysis: SourceAnalysis) -> list[Finding]:
    findings = []
    for ca in analysis.ordered_contracts():
        for pair in ca.table.shadow_pairs:
            severity = _SEVERITY_BY_KIND.get(pair.kind)
            if severity is None:
                continue  # local-over-local is recorded but not reported
            elements = [variable_element(pair.inner)]
            if hasattr(pair.outer, "span"):
                elements.append(variable_element(pair.outer))
            findings.append(make_finding(
                analysis, ID, severity, Confidence.HIGH,
                _describe(pair, ca.contract.name), elements,
            ))
    return findings
