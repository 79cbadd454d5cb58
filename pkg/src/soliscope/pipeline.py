"""End-to-end orchestration: source text to analysis results.

parse -> inheritance -> name resolution -> per-function CFG -> IR lowering
-> storage aliases -> SSA -> call graph / read-write / dependency /
protection. Everything is immutable once built; detectors and printers
are read-only consumers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from soliscope.analysis import (
    CallGraph,
    DependencyAnalysis,
    ProtectionInfo,
    ReadWriteSets,
    build_call_graph,
    compute_dependencies,
    compute_protection,
    compute_read_write_sets,
)
from soliscope.cfg import Cfg, DomInfo, build_cfg, compute_dominators
from soliscope.frontend import parse, resolve_inheritance, resolve_names, tokenize
from soliscope.frontend.astnodes import (
    ContractDef,
    ContractKind,
    FunctionDef,
    ModifierDef,
    SourceUnit,
)
from soliscope.frontend.inheritance import effective_functions
from soliscope.frontend.names import SymbolTable
from soliscope.ir.lowering import LoweredFunction, lower_function
from soliscope.sourcemap import SourceFile
from soliscope.ssa import AliasMap, SsaFunction, compute_storage_aliases, to_ssa


@dataclass
class FunctionAnalysis:
    """Everything derived from one function in one contract's context."""

    function: FunctionDef
    contract: ContractDef
    cfg: Cfg
    lowered: LoweredFunction
    dominfo: DomInfo
    aliases: AliasMap
    ssa: SsaFunction

    @property
    def is_entry_point(self) -> bool:
        return (self.function.visibility in ("public", "external")
                and not self.function.is_constructor)


@dataclass
class ContractAnalysis:
    contract: ContractDef
    table: SymbolTable
    functions: list[FunctionAnalysis] = field(default_factory=list)
    callgraph: Optional[CallGraph] = None
    readwrite: Optional[ReadWriteSets] = None
    deps: Optional[DependencyAnalysis] = None
    protection: Optional[ProtectionInfo] = None

    def function(self, name: str) -> Optional[FunctionAnalysis]:
        for fa in self.functions:
            if fa.function.name == name:
                return fa
        return None

    def analysis_of(self, fn: FunctionDef) -> Optional[FunctionAnalysis]:
        for fa in self.functions:
            if fa.function is fn:
                return fa
        return None

    def is_protected(self, fn: FunctionDef) -> bool:
        return self.protection.is_protected(fn) if self.protection else False


@dataclass
class SourceAnalysis:
    """One analyzed source file and all its contracts."""

    source: SourceFile
    unit: SourceUnit
    contracts: dict[str, ContractAnalysis] = field(default_factory=dict)
    parse_ms: float = 0.0
    analyze_ms: float = 0.0

    def contract(self, name: str) -> ContractAnalysis:
        return self.contracts[name]

    def ordered_contracts(self) -> list[ContractAnalysis]:
        return [self.contracts[c.name] for c in self.unit.contracts]


def _resolve_modifier_defs(fn: FunctionDef, table: SymbolTable) -> list[ModifierDef]:
    out = []
    for invocation in fn.modifiers:
        mod = table.modifiers.get(invocation.name)
        if mod is not None:
            out.append(mod)
        # Unmatched names are base-constructor invocations; not inlined.
    return out


def _analyze_function(fn: FunctionDef, contract: ContractDef,
                      table: SymbolTable) -> FunctionAnalysis:
    modifiers = _resolve_modifier_defs(fn, table)
    cfg = build_cfg(fn, modifiers)
    extra = [p for mod in modifiers for p in mod.parameters]
    lowered = lower_function(fn, cfg, contract, table, extra_parameters=extra)
    dominfo = compute_dominators(cfg)
    aliases = compute_storage_aliases(lowered)
    ssa = to_ssa(lowered, dominfo, aliases)
    return FunctionAnalysis(fn, contract, cfg, lowered, dominfo, aliases, ssa)


def _analyze_contract(contract: ContractDef, unit: SourceUnit) -> ContractAnalysis:
    table = resolve_names(contract, unit)
    ca = ContractAnalysis(contract, table)
    if contract.kind is ContractKind.INTERFACE:
        return ca
    for fn in effective_functions(contract):
        if fn.body is None:
            continue
        ca.functions.append(_analyze_function(fn, contract, table))
    ca.callgraph = build_call_graph(contract, ca.functions)
    ca.readwrite = compute_read_write_sets(contract, ca.functions, ca.callgraph)
    ca.deps = compute_dependencies(contract, ca.functions)
    ca.protection = compute_protection(ca.functions, ca.deps)
    ca.deps.set_protected({fn for fn, ok in ca.protection.protected.items() if ok})
    return ca


def analyze_source(text: str, filename: str = "<input>") -> SourceAnalysis:
    """Run the whole pipeline on one source file's text."""
    started = time.perf_counter()
    tokens = tokenize(text, filename)
    unit = parse(tokens)
    resolve_inheritance(unit)
    parsed = time.perf_counter()

    analysis = SourceAnalysis(SourceFile(filename, text), unit)
    for contract in unit.contracts:
        analysis.contracts[contract.name] = _analyze_contract(contract, unit)
    done = time.perf_counter()
    analysis.parse_ms = (parsed - started) * 1000.0
    analysis.analyze_ms = (done - parsed) * 1000.0
    return analysis


def analyze_files(paths) -> list[SourceAnalysis]:
    out = []
    for path in paths:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
        out.append(analyze_source(text, str(path)))
    return out
