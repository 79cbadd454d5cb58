"""Printer registry: code-understanding outputs over analysis results."""

from __future__ import annotations

from typing import Callable, Iterable, Optional

from soliscope.detectors.base import Finding
from soliscope.pipeline import SourceAnalysis
from soliscope.printers.graphs import print_call_graph, print_cfg, print_inheritance_graph
from soliscope.printers.irdump import print_slithir, print_slithir_ssa
from soliscope.printers.output import PrinterOutput
from soliscope.printers.summaries import (
    cyclomatic_complexity,
    print_contract_summary,
    print_function_summary,
    print_human_summary,
    print_vars_and_auth,
)

PRINTERS: dict[str, Callable] = {
    "contract-summary": print_contract_summary,
    "function-summary": print_function_summary,
    "inheritance-graph": print_inheritance_graph,
    "call-graph": print_call_graph,
    "cfg": print_cfg,
    "vars-and-auth": print_vars_and_auth,
    "human-summary": print_human_summary,
    "slithir": print_slithir,
    "slithir-ssa": print_slithir_ssa,
}

PRINTER_IDS = sorted(PRINTERS)


def run_printer(printer_id: str, analysis: SourceAnalysis,
                findings: Optional[list[Finding]] = None) -> list[PrinterOutput]:
    printer = PRINTERS[printer_id]
    if printer_id == "human-summary":
        return printer(analysis, findings)
    return printer(analysis)


def run_printers(printer_ids: Iterable[str], analyses: Iterable[SourceAnalysis],
                 findings: Optional[list[Finding]] = None) -> list[PrinterOutput]:
    out: list[PrinterOutput] = []
    for analysis in analyses:
        for printer_id in printer_ids:
            out.extend(run_printer(printer_id, analysis, findings))
    return out


__all__ = [
    "PRINTERS",
    "PRINTER_IDS",
    "PrinterOutput",
    "cyclomatic_complexity",
    "run_printer",
    "run_printers",
]
