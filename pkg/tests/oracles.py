"""Independent brute-force oracles.

Each oracle recomputes a result by a different method than the
implementation under test (permutation filtering, path enumeration,
matrix-style closure) so agreement is meaningful.
"""

from __future__ import annotations

import itertools

from soliscope.cfg import Cfg, Node
from soliscope.frontend.astnodes import VarScope
from soliscope.ir.instructions import (
    Assignment,
    HighLevelCall,
    InternalCall,
    LowLevelCall,
    Phi,
    Return,
)
from soliscope.ir.variables import BuiltinVar, Constant, DeclaredVar, EXTERNAL_RESULT
from soliscope.ssa import SsaVariable


# ---------------------------------------------------------------------------
# C3 linearization by permutation filtering


def c3_valid_orders(contract: str, bases: dict[str, list[str]]) -> list[list[str]]:
    """All orderings satisfying the C3 properties, by permutation filtering.

    A permutation qualifies when it starts with the contract, contains the
    reachable hierarchy exactly once, puts every contract before its bases,
    and preserves each contract's local precedence order (the reversed
    direct-base list). An empty result means no consistent order exists.
    """
    reachable: list[str] = []
    work = [contract]
    while work:
        c = work.pop()
        if c in reachable:
            continue
        reachable.append(c)
        work.extend(bases.get(c, []))

    pairs: set[tuple[str, str]] = set()
    for c in reachable:
        direct = bases.get(c, [])
        for b in direct:
            pairs.add((c, b))
        rev = list(reversed(direct))
        for i, a in enumerate(rev):
            for b in rev[i + 1 :]:
                pairs.add((a, b))

    valid = []
    rest = [c for c in reachable if c != contract]
    for perm in itertools.permutations(rest):
        candidate = [contract] + list(perm)
        position = {c: i for i, c in enumerate(candidate)}
        if all(position[a] < position[b] for a, b in pairs
               if a in position and b in position):
            valid.append(candidate)
    return valid


# ---------------------------------------------------------------------------
# Dominators by simple-path enumeration


def _simple_paths(entry: Node, target: Node, limit: int = 200000):
    paths = []
    stack = [(entry, [entry])]
    while stack:
        node, path = stack.pop()
        if node is target:
            paths.append(path)
            if len(paths) > limit:
                raise RuntimeError("path explosion")
            continue
        for succ in node.successors:
            if succ not in path:
                stack.append((succ, path + [succ]))
    return paths


def dominators_oracle(cfg: Cfg) -> dict[Node, set[Node]]:
    """dom(n) = intersection of the node sets of all simple entry-to-n paths."""
    out = {}
    for node in cfg.nodes:
        paths = _simple_paths(cfg.entry, node)
        assert paths, f"{node} unreachable"
        dom = set(paths[0])
        for path in paths[1:]:
            dom &= set(path)
        out[node] = dom
    return out


def frontier_oracle(cfg: Cfg, dom: dict[Node, set[Node]]) -> dict[Node, set[Node]]:
    """DF(n) = nodes y where n dominates a predecessor of y but does not
    strictly dominate y (straight from the definition)."""
    out = {n: set() for n in cfg.nodes}
    for y in cfg.nodes:
        for pred in y.predecessors:
            for n in cfg.nodes:
                if n in dom[pred] and (n is y or n not in dom[y]):
                    out[n].add(y)
    return out


# ---------------------------------------------------------------------------
# Storage alias targets by acyclic-path simulation


def alias_oracle(fa, decl) -> set:
    """Union over all simple entry-to-exit paths of the targets the
    reference may hold anywhere along the path."""
    targets = set()
    assign_map = {}
    for node in fa.cfg.nodes:
        for instr in node.irs:
            if isinstance(instr, Assignment) and isinstance(instr.lvalue, DeclaredVar) \
                    and instr.lvalue.decl is decl:
                assign_map.setdefault(node, []).append(instr.rvalue)

    def resolve(rvalue, along: set) -> set:
        base = fa.lowered.ultimate_base(rvalue)
        if isinstance(base, DeclaredVar) and base.is_state:
            return {base.decl}
        return set(along)

    for exit_node in fa.cfg.exits or fa.cfg.nodes[-1:]:
        for path in _simple_paths(fa.cfg.entry, exit_node):
            held: set = set()
            for node in path:
                for rvalue in assign_map.get(node, []):
                    held = resolve(rvalue, held)
                    targets |= held
    return targets


# ---------------------------------------------------------------------------
# Dependency closure, matrix style over SSA def-use edges


def dependency_edges(ca):
    """Re-derive raw dependency edges from the SSA IR, the dumb way."""
    edges: dict = {}

    def key(fn, op):
        if isinstance(op, SsaVariable):
            return ("v", fn, op)
        if isinstance(op, BuiltinVar):
            return op
        return None

    def add(a, b):
        if a is not None and b is not None:
            edges.setdefault(a, set()).add(b)

    returns = {}
    for fa in ca.functions:
        fn = fa.function
        returns[fn] = set()
        for node in fa.cfg.nodes:
            for instr in node.ssa_irs:
                if isinstance(instr, Return):
                    for op in instr.reads():
                        returns[fn].add(key(fn, op))
                    continue
                target = key(fn, instr.lvalue) if instr.lvalue is not None else None
                if target is None:
                    continue
                if isinstance(instr, Assignment) and isinstance(instr.lvalue, SsaVariable) \
                        and not isinstance(instr.lvalue.base, DeclaredVar):
                    continue
                for op in instr.reads():
                    add(target, key(fn, op))
                if isinstance(instr, (HighLevelCall, LowLevelCall)):
                    add(target, EXTERNAL_RESULT)
                if isinstance(instr, Phi) and instr.decl is not None \
                        and instr.decl.scope is VarScope.STATE:
                    if instr.placement in (Phi.ENTRY, Phi.POST_CALL):
                        add(target, ("state", instr.decl))
                    else:
                        add(("state", instr.decl), target)
                elif isinstance(instr.lvalue, SsaVariable) \
                        and isinstance(instr.lvalue.base, DeclaredVar) \
                        and instr.lvalue.base.is_state:
                    add(("state", instr.lvalue.base.decl), target)

    for fa in ca.functions:
        fn = fa.function
        for node in fa.cfg.nodes:
            for instr in node.ssa_irs:
                if not isinstance(instr, InternalCall):
                    continue
                callee = instr.function
                if callee not in returns:
                    continue
                for i, arg in enumerate(instr.args):
                    if i < len(callee.parameters):
                        pkey = ("v", callee,
                                SsaVariable(DeclaredVar(callee.parameters[i]), 0))
                        add(pkey, key(fn, arg))
                if instr.lvalue is not None:
                    for ratom in returns[callee]:
                        add(key(fn, instr.lvalue), ratom)
    return edges


def closure_oracle(edges: dict) -> dict:
    """Floyd-Warshall-flavored closure: iterate full relational squaring
    until the edge relation stops growing."""
    reach = {a: set(bs) for a, bs in edges.items()}
    while True:
        grew = False
        for a in list(reach):
            extra = set()
            for b in reach[a]:
                extra |= reach.get(b, set())
            if not extra <= reach[a]:
                reach[a] |= extra
                grew = True
        if not grew:
            return reach


def deps_oracle(ca, var, universe_all: bool = True) -> set:
    """Contract-context dependency set recomputed from raw edges."""
    edges = dependency_edges(ca)
    if not universe_all:
        protected = {fn for fn, ok in ca.protection.protected.items() if ok}
        for fa in ca.functions:
            if fa.function in protected:
                for a in list(edges):
                    if isinstance(a, tuple) and a[0] == "state":
                        edges[a] = {
                            b for b in edges[a]
                            if not (isinstance(b, tuple) and b[0] == "v" and b[1] is fa.function)
                        }
    reach = closure_oracle(edges)

    starts = []
    if isinstance(var, BuiltinVar):
        starts = [var]
    elif var.scope is VarScope.STATE:
        starts = [("state", var)]
    else:
        for fa in ca.functions:
            for node in fa.cfg.nodes:
                for instr in node.ssa_irs:
                    for op in list(instr.reads()) + [instr.lvalue]:
                        if isinstance(op, SsaVariable) and isinstance(op.base, DeclaredVar) \
                                and op.base.decl is var:
                            starts.append(("v", fa.function, op))
    reached = set()
    for start in starts:
        reached |= reach.get(start, set())
    out = set()
    for atom in reached:
        if isinstance(atom, BuiltinVar):
            out.add(atom)
        elif atom[0] == "state":
            out.add(atom[1])
        elif isinstance(atom[2].base, DeclaredVar):
            out.add(atom[2].base.decl)
    out.discard(var)
    return out


# ---------------------------------------------------------------------------
# Transitive state writes over call-graph edges


def transitive_writes_oracle(ca, fn) -> set:
    """State written by fn or anything it (transitively) calls internally."""
    written = set()
    seen = set()
    work = [fn]
    while work:
        current = work.pop()
        if current in seen:
            continue
        seen.add(current)
        written |= {
            v for v in ca.readwrite.fn_writes.get(current, set())
            if not isinstance(v, BuiltinVar) and v.scope is VarScope.STATE
        }
        for callee in ca.callgraph.internal.get(current, ()):
            work.append(callee)
    return written
