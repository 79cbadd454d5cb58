"""Textual IR dumps, with and without SSA.

The layout mirrors the framework's canonical form: a Function header, the
source expression of each node, then its instructions. TMP/REF indices
are dense and deterministic, so repeated dumps are byte-identical.
"""

from __future__ import annotations

from soliscope.frontend.astnodes import ContractKind
from soliscope.pipeline import SourceAnalysis
from soliscope.printers.output import PrinterOutput


def _dump(analysis: SourceAnalysis, ssa: bool) -> str:
    lines = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is ContractKind.INTERFACE or not ca.functions:
            continue
        lines.append(f"Contract {ca.contract.name}")
        for fa in ca.functions:
            lines.append(f"Function {fa.function.signature}")
            for node in fa.cfg.nodes:
                instrs = node.ssa_irs if ssa else node.irs
                if not instrs and node.expression is None:
                    continue
                span = getattr(node.expression, "span", None)
                if span is not None:
                    lines.append(f"\tSolidity: {analysis.source.excerpt(span)}")
                else:
                    lines.append(f"\t{node.kind.value}:")
                if instrs:
                    lines.append("\tSlithIR:" if not ssa else "\tSlithIR-SSA:")
                    for instr in instrs:
                        lines.append(f"\t\t{instr}")
        lines.append("")
    return "\n".join(lines)


def print_slithir(analysis: SourceAnalysis) -> list[PrinterOutput]:
    return [PrinterOutput("slithir", "text", _dump(analysis, ssa=False), "slithir")]


def print_slithir_ssa(analysis: SourceAnalysis) -> list[PrinterOutput]:
    return [PrinterOutput("slithir-ssa", "text", _dump(analysis, ssa=True), "slithir-ssa")]
