"""Finding schema and shared helpers for detectors."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from soliscope.cfg import Node
from soliscope.frontend.astnodes import ContractDef, FunctionDef, VariableDecl
from soliscope.pipeline import SourceAnalysis
from soliscope.sourcemap import Span


class Severity(Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"
    INFORMATIONAL = "Informational"
    OPTIMIZATION = "Optimization"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]


_SEVERITY_RANK = {
    Severity.HIGH: 4,
    Severity.MEDIUM: 3,
    Severity.LOW: 2,
    Severity.INFORMATIONAL: 1,
    Severity.OPTIMIZATION: 0,
}


class Confidence(Enum):
    HIGH = "High"
    MEDIUM = "Medium"


@dataclass
class Element:
    type: str  # contract | function | variable | node
    name: str
    span: Span


@dataclass
class Finding:
    check: str
    severity: Severity
    confidence: Confidence
    message: str
    elements: list[Element] = field(default_factory=list)
    excerpt: str = ""

    @property
    def primary_span(self) -> Optional[Span]:
        return self.elements[0].span if self.elements else None

    def sort_key(self):
        span = self.primary_span
        return (
            -self.severity.rank,
            span.file if span else "",
            span.line if span else 0,
            self.check,
            self.message,
        )


def contract_element(contract: ContractDef) -> Element:
    return Element("contract", contract.name, contract.span)


def function_element(fn: FunctionDef) -> Element:
    owner = fn.contract.name if fn.contract else "?"
    return Element("function", f"{owner}.{fn.signature}", fn.span)


def variable_element(decl: VariableDecl) -> Element:
    return Element("variable", decl.name, decl.span)


def node_element(analysis: SourceAnalysis, node: Node) -> Element:
    span = getattr(node.expression, "span", None)
    if span is None:
        span = Span(analysis.source.name, 0, 0, 1, 1)
    return Element("node", analysis.source.excerpt(span), span)


def make_finding(analysis: SourceAnalysis, check: str, severity: Severity,
                 confidence: Confidence, message: str,
                 elements: list[Element]) -> Finding:
    excerpt = ""
    if elements and elements[0].span is not None:
        excerpt = analysis.source.excerpt(elements[0].span)
    return Finding(check, severity, confidence, message, elements, excerpt)
