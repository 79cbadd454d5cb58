"""Data dependency over the SSA form, with taint at two privilege levels.

Dependencies are first computed per function over SSA def-use edges; a
fixpoint across all functions of the contract then captures the
multi-transaction flow through state variables (every function's entry phi
may observe any other function's writes). Each map exists in two
universes: `all`, and `unprivileged`, which masks state writes performed
inside protected functions.

High-level and low-level call results carry a synthetic `<external>`
source: whatever untrusted code returns is attacker-influenced.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from soliscope.frontend.astnodes import ContractDef, FunctionDef, VariableDecl, VarScope
from soliscope.ir.instructions import (
    Assignment,
    HighLevelCall,
    InternalCall,
    LowLevelCall,
    Phi,
    Return,
)
from soliscope.ir.variables import (
    BuiltinVar,
    Constant,
    DeclaredVar,
    EXTERNAL_RESULT,
    MSG_DATA,
    MSG_SENDER,
    MSG_VALUE,
    TX_ORIGIN,
)
from soliscope.ssa import SsaVariable

ALL = "all"
UNPRIVILEGED = "unprivileged"

TAINT_BUILTINS = (MSG_SENDER, MSG_VALUE, MSG_DATA, TX_ORIGIN, EXTERNAL_RESULT)

# Atom forms:
#   ("v", fn, SsaVariable)   one SSA version inside one function
#   ("state", decl)          cross-function summary of a state variable
#   BuiltinVar               global builtin (msg.sender, <external>, ...)
Atom = Union[tuple, BuiltinVar]

Var = Union[VariableDecl, BuiltinVar]


def _operand_atom(fn: FunctionDef, op) -> Optional[Atom]:
    if isinstance(op, SsaVariable):
        return ("v", fn, op)
    if isinstance(op, BuiltinVar):
        return op
    if isinstance(op, Constant):
        return None
    return None


@dataclass
class _Extraction:
    """Raw dependency edges of one function, before any closure."""

    intra: dict[Atom, set[Atom]] = field(default_factory=dict)
    # One entry per internal call: callee, argument atoms, result atom.
    calls: list[tuple[FunctionDef, list[set[Atom]], Optional[Atom]]] = field(default_factory=list)
    returns: set[Atom] = field(default_factory=set)
    # State definitions bridged into the contract-level fixpoint;
    # maskable per universe when the writer is protected.
    state_defs: list[tuple[VariableDecl, Atom]] = field(default_factory=list)


def _reach(graph: dict[Atom, set[Atom]], starts: list[Atom]) -> set[Atom]:
    seen: set[Atom] = set()
    work = [a for a in starts]
    while work:
        atom = work.pop()
        for nxt in graph.get(atom, ()):
            if nxt not in seen:
                seen.add(nxt)
                work.append(nxt)
    return seen


class DependencyAnalysis:
    """Query interface over the dependency graphs of one contract."""

    def __init__(self, contract: ContractDef, function_analyses):
        self.contract = contract
        self._analyses = {fa.function: fa for fa in function_analyses}
        self._ex: dict[FunctionDef, _Extraction] = {
            fa.function: self._extract(fa) for fa in function_analyses
        }
        self._protected: set[FunctionDef] = set()
        self._contract_graphs: dict[str, dict[Atom, set[Atom]]] = {}
        self._function_graphs: dict[FunctionDef, dict[Atom, set[Atom]]] = {}

    # -- edge extraction -----------------------------------------------------

    def _extract(self, fa) -> _Extraction:
        fn = fa.function
        ex = _Extraction()

        def add_edge(target: Atom, sources) -> None:
            ex.intra.setdefault(target, set()).update(sources)

        for node in fa.cfg.nodes:
            for instr in node.ssa_irs:
                read_atoms = {
                    a for a in (_operand_atom(fn, op) for op in instr.reads()) if a is not None
                }
                lvalue = instr.lvalue
                target = _operand_atom(fn, lvalue) if lvalue is not None else None

                if isinstance(instr, Return):
                    ex.returns |= read_atoms
                    continue

                if isinstance(instr, InternalCall):
                    arg_atoms = []
                    for arg in instr.args:
                        atom = _operand_atom(fn, arg)
                        arg_atoms.append({atom} if atom is not None else set())
                    ex.calls.append((instr.function, arg_atoms, target))

                if target is None:
                    continue

                if isinstance(instr, Assignment) and isinstance(lvalue, SsaVariable) \
                        and not isinstance(lvalue.base, DeclaredVar):
                    continue  # write through a REF: its weak-update phi carries it

                add_edge(target, read_atoms)

                if isinstance(instr, (HighLevelCall, LowLevelCall)):
                    add_edge(target, {EXTERNAL_RESULT})

                if isinstance(instr, Phi):
                    decl = instr.decl
                    if decl is not None and decl.scope is VarScope.STATE:
                        if instr.placement in (Phi.ENTRY, Phi.POST_CALL):
                            # Observation point: any function's writes flow in.
                            add_edge(target, {("state", decl)})
                        else:
                            ex.state_defs.append((decl, target))
                    continue

                if isinstance(lvalue, SsaVariable) and isinstance(lvalue.base, DeclaredVar) \
                        and lvalue.base.is_state:
                    ex.state_defs.append((lvalue.base.decl, target))
        return ex

    # -- graph assembly --------------------------------------------------------

    def set_protected(self, protected: set[FunctionDef]) -> None:
        """Install the protected-function set; resets cached graphs."""
        self._protected = set(protected)
        self._contract_graphs.clear()

    def _param_atom(self, callee: FunctionDef, index: int) -> Optional[Atom]:
        if index >= len(callee.parameters):
            return None
        decl = callee.parameters[index]
        return ("v", callee, SsaVariable(DeclaredVar(decl), 0))

    def _add_binding_edges(self, graph: dict[Atom, set[Atom]], fns) -> None:
        for fn in fns:
            ex = self._ex.get(fn)
            if ex is None:
                continue
            for callee, arg_atoms, result in ex.calls:
                if callee not in self._ex:
                    continue  # no analysis for the callee; opaque
                for i, atoms in enumerate(arg_atoms):
                    param = self._param_atom(callee, i)
                    if param is not None:
                        graph.setdefault(param, set()).update(atoms)
                if result is not None:
                    graph.setdefault(result, set()).update(self._ex[callee].returns)

    def _graph_for_function(self, fn: FunctionDef) -> dict[Atom, set[Atom]]:
        """Function context: own edges plus transitively called internals,
        without the cross-function state bridge."""
        if fn in self._function_graphs:
            return self._function_graphs[fn]
        fns = {fn}
        work = [fn]
        while work:
            ex = self._ex.get(work.pop())
            if ex is None:
                continue
            for callee, _, _ in ex.calls:
                if callee in self._ex and callee not in fns:
                    fns.add(callee)
                    work.append(callee)
        graph: dict[Atom, set[Atom]] = {}
        for f in fns:
            for target, sources in self._ex[f].intra.items():
                graph.setdefault(target, set()).update(sources)
        self._add_binding_edges(graph, fns)
        self._function_graphs[fn] = graph
        return graph

    def _graph_for_contract(self, universe: str) -> dict[Atom, set[Atom]]:
        if universe in self._contract_graphs:
            return self._contract_graphs[universe]
        graph: dict[Atom, set[Atom]] = {}
        for fn, ex in self._ex.items():
            for target, sources in ex.intra.items():
                graph.setdefault(target, set()).update(sources)
            if universe == UNPRIVILEGED and fn in self._protected:
                continue  # mask state writes performed under privilege
            for decl, def_atom in ex.state_defs:
                graph.setdefault(("state", decl), set()).add(def_atom)
        self._add_binding_edges(graph, self._ex.keys())
        self._contract_graphs[universe] = graph
        return graph

    # -- queries ------------------------------------------------------------------

    def _atoms_of(self, var: Var, fn: Optional[FunctionDef]) -> list[Atom]:
        if isinstance(var, BuiltinVar):
            return [var]
        if fn is None and var.scope is VarScope.STATE:
            # Contract context: state flows only through the bridge atom,
            # which is where universe masking applies.
            return [("state", var)]
        out: list[Atom] = []
        scan = [fn] if fn is not None else list(self._ex.keys())
        for f in scan:
            fa = self._analyses.get(f)
            if fa is None:
                continue
            for ssa_var in fa.ssa.definitions:
                if isinstance(ssa_var.base, DeclaredVar) and ssa_var.base.decl is var:
                    out.append(("v", f, ssa_var))
            out.append(("v", f, SsaVariable(DeclaredVar(var), 0)))
        if var.scope is VarScope.STATE:
            out.append(("state", var))
        return out

    @staticmethod
    def _collapse(atoms: set[Atom]) -> set[Var]:
        out: set[Var] = set()
        for atom in atoms:
            if isinstance(atom, BuiltinVar):
                out.add(atom)
            elif atom[0] == "state":
                out.add(atom[1])
            else:
                ssa_var = atom[2]
                if isinstance(ssa_var.base, DeclaredVar):
                    out.add(ssa_var.base.decl)
        return out

    def deps(self, var: Var, fn: Optional[FunctionDef] = None,
             universe: str = ALL) -> set[Var]:
        """Variables `var` may depend on; contract context when fn is None."""
        if fn is not None:
            graph = self._graph_for_function(fn)
        else:
            graph = self._graph_for_contract(universe)
        reached = _reach(graph, self._atoms_of(var, fn))
        out = self._collapse(reached)
        out.discard(var)
        return out

    def operand_deps(self, op, fn: FunctionDef, universe: str = ALL) -> set[Var]:
        """Contract-context dependencies of one SSA operand."""
        atom = _operand_atom(fn, op)
        if atom is None:
            return set()
        graph = self._graph_for_contract(universe)
        out = self._collapse(_reach(graph, [atom]) | {atom})
        return out

    def taint_sources(self) -> set[Var]:
        sources: set[Var] = set(TAINT_BUILTINS)
        for fn in self._ex:
            if fn.visibility in ("public", "external"):
                sources.update(fn.parameters)
        return sources

    def is_tainted(self, var: Var, fn: Optional[FunctionDef] = None,
                   universe: str = ALL) -> bool:
        """True when the variable may be influenced by a user-controlled value."""
        sources = self.taint_sources()
        if var in sources:
            return True
        return bool(self.deps(var, fn, universe) & sources)

    def is_operand_tainted(self, op, fn: FunctionDef, universe: str = ALL) -> bool:
        return bool(self.operand_deps(op, fn, universe) & self.taint_sources())


def compute_dependencies(contract: ContractDef, function_analyses) -> DependencyAnalysis:
    return DependencyAnalysis(contract, function_analyses)
