"""Graph printers: inheritance graph, call graph, per-function CFG (DOT)."""

from __future__ import annotations

from soliscope.detectors.base import Finding  # noqa: F401  (re-export convenience)
from soliscope.frontend.astnodes import ContractKind
from soliscope.ir.instructions import DynamicCall, HighLevelCall, InternalCall, LibraryCall
from soliscope.pipeline import SourceAnalysis
from soliscope.printers.output import PrinterOutput


def _quote(name: str) -> str:
    return '"' + name.replace('"', '\\"') + '"'


def print_inheritance_graph(analysis: SourceAnalysis) -> list[PrinterOutput]:
    lines = ["digraph inheritance {"]
    for contract in analysis.unit.contracts:
        lines.append(f"    {_quote(contract.name)};")
    for contract in analysis.unit.contracts:
        for base in contract.bases:
            lines.append(f"    {_quote(contract.name)} -> {_quote(base)};")
    lines.append("}")
    return [PrinterOutput("inheritance-graph", "dot", "\n".join(lines) + "\n",
                          "inheritance-graph")]


def print_call_graph(analysis: SourceAnalysis) -> list[PrinterOutput]:
    lines = ["digraph callgraph {"]
    edges: list[str] = []
    boxed: set[str] = set()
    for ca in analysis.ordered_contracts():
        if ca.callgraph is None:
            continue
        for fa in ca.functions:
            caller = f"{ca.contract.name}.{fa.function.signature}"
            lines.append(f"    {_quote(caller)};")
            for node in fa.cfg.nodes:
                for instr in node.irs:
                    if isinstance(instr, InternalCall):
                        target = instr.function
                        owner = target.contract.name if target.contract else ca.contract.name
                        edges.append(
                            f"    {_quote(caller)} -> {_quote(f'{owner}.{target.signature}')};"
                        )
                    elif isinstance(instr, LibraryCall):
                        name = f"{instr.library.name}.{instr.function.name}"
                        edges.append(f"    {_quote(caller)} -> {_quote(name)};")
                    elif isinstance(instr, HighLevelCall):
                        name = f"{instr.dest}.{instr.function_name}"
                        boxed.add(name)
                        edges.append(f"    {_quote(caller)} -> {_quote(name)};")
                    elif isinstance(instr, DynamicCall):
                        name = f"{instr.target}(dynamic)"
                        boxed.add(name)
                        edges.append(f"    {_quote(caller)} -> {_quote(name)};")
    for name in sorted(boxed):
        lines.append(f"    {_quote(name)} [shape=box];")
    lines.extend(edges)
    lines.append("}")
    return [PrinterOutput("call-graph", "dot", "\n".join(lines) + "\n", "call-graph")]


def print_cfg(analysis: SourceAnalysis) -> list[PrinterOutput]:
    outputs = []
    for ca in analysis.ordered_contracts():
        if ca.contract.kind is ContractKind.INTERFACE:
            continue
        for fa in ca.functions:
            name = f"{ca.contract.name}.{fa.function.name}"
            lines = [f"digraph {_quote(name)} {{"]
            for node in fa.cfg.nodes:
                label = node.kind.value
                span = getattr(node.expression, "span", None)
                if span is not None:
                    excerpt = analysis.source.excerpt(span)
                    if excerpt:
                        label += f": {excerpt}"
                lines.append(f"    {_quote(str(node.id))} [label={_quote(label)}];")
            for node in fa.cfg.nodes:
                for succ in node.successors:
                    lines.append(f"    {_quote(str(node.id))} -> {_quote(str(succ.id))};")
            lines.append("}")
            outputs.append(PrinterOutput("cfg", "dot", "\n".join(lines) + "\n",
                                         f"{name}.cfg"))
    return outputs
