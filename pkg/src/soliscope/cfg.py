"""Per-function control-flow graphs and dominator information.

Each node holds at most one source expression (or declaration); its IR
instruction list is filled later by the lowering pass. Modifier bodies are
inlined around the function body at the `_` placeholder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from soliscope.frontend.astnodes import (
    Block,
    CallExpr,
    EmitStatement,
    Expression,
    ExprStatement,
    ForStatement,
    FunctionDef,
    Identifier,
    IfStatement,
    ModifierDef,
    PlaceholderStatement,
    ReturnStatement,
    Statement,
    ThrowStatement,
    VarDeclStatement,
    WhileStatement,
)


class NodeKind(Enum):
    ENTRY = "ENTRY"
    EXPRESSION = "EXPRESSION"
    IF = "IF"
    END_IF = "END_IF"
    LOOP_HEADER = "LOOP_HEADER"
    LOOP_END = "LOOP_END"
    RETURN = "RETURN"
    THROW = "THROW"
    PLACEHOLDER = "PLACEHOLDER"


# Statement-level expression statements that end the current path.
_TERMINATOR_BUILTINS = frozenset(("revert", "selfdestruct"))


@dataclass
class Node:
    id: int
    kind: NodeKind
    expression: Optional[object] = None  # Expression or Statement AST node
    successors: list["Node"] = field(default_factory=list)
    predecessors: list["Node"] = field(default_factory=list)
    irs: list = field(default_factory=list)      # filled by ir.lowering
    ssa_irs: list = field(default_factory=list)  # filled by ssa.build

    def __hash__(self) -> int:
        return id(self)

    def __eq__(self, other: object) -> bool:
        return self is other

    def __repr__(self) -> str:
        return f"Node({self.id}, {self.kind.value})"

    @property
    def is_exit(self) -> bool:
        return not self.successors


@dataclass
class Cfg:
    function: FunctionDef
    nodes: list[Node]
    entry: Node

    @property
    def exits(self) -> list[Node]:
        return [n for n in self.nodes if n.is_exit]

    def node(self, node_id: int) -> Node:
        return self.nodes[node_id]


class _Builder:
    def __init__(self, function: FunctionDef, modifiers: list[ModifierDef]):
        self.function = function
        self.modifiers = [m for m in modifiers if m.body is not None]
        self.nodes: list[Node] = []
        self._inlined_layers: set[int] = set()

    def new_node(self, kind: NodeKind, expression=None) -> Node:
        node = Node(len(self.nodes), kind, expression)
        self.nodes.append(node)
        return node

    @staticmethod
    def link(src: Node, dst: Node) -> None:
        src.successors.append(dst)
        dst.predecessors.append(src)

    def build(self) -> Cfg:
        entry = self.new_node(NodeKind.ENTRY)
        current = self._layer(0, entry)
        if current is not None:
            exit_node = self.new_node(NodeKind.RETURN)
            self.link(current, exit_node)
        self._prune_unreachable(entry)
        return Cfg(self.function, self.nodes, entry)

    def _layer(self, depth: int, current: Optional[Node]) -> Optional[Node]:
        """Translate modifier layer `depth`; the innermost layer is the body."""
        if current is None:
            return None
        if depth < len(self.modifiers):
            body = self.modifiers[depth].body
            return self._statements(body.statements, current, depth)
        if self.function.body is not None:
            return self._statements(self.function.body.statements, current, None)
        return current

    def _statements(
        self, statements: list[Statement], current: Optional[Node], depth: Optional[int]
    ) -> Optional[Node]:
        for stmt in statements:
            if current is None:
                break  # unreachable trailing code is dropped
            current = self._statement(stmt, current, depth)
        return current

    def _statement(
        self, stmt: Statement, current: Node, depth: Optional[int]
    ) -> Optional[Node]:
        if isinstance(stmt, Block):
            return self._statements(stmt.statements, current, depth)

        if isinstance(stmt, PlaceholderStatement):
            marker = self.new_node(NodeKind.PLACEHOLDER, stmt)
            self.link(current, marker)
            # The body is spliced at the first placeholder of each layer;
            # later placeholders stay pass-through markers.
            if depth is not None and depth not in self._inlined_layers:
                self._inlined_layers.add(depth)
                return self._layer(depth + 1, marker)
            return marker

        if isinstance(stmt, (ExprStatement, VarDeclStatement, EmitStatement)):
            if self._terminates(stmt):
                node = self.new_node(NodeKind.THROW, stmt)
                self.link(current, node)
                return None
            node = self.new_node(NodeKind.EXPRESSION, stmt)
            self.link(current, node)
            return node

        if isinstance(stmt, ThrowStatement):
            node = self.new_node(NodeKind.THROW, stmt)
            self.link(current, node)
            return None

        if isinstance(stmt, ReturnStatement):
            node = self.new_node(NodeKind.RETURN, stmt)
            self.link(current, node)
            return None

        if isinstance(stmt, IfStatement):
            cond = self.new_node(NodeKind.IF, stmt.condition)
            self.link(current, cond)
            then_end = self._statement(stmt.then_branch, cond, depth)
            true_first = cond.successors[0] if cond.successors else None
            marker = len(cond.successors)
            if stmt.else_branch is not None:
                else_end = self._statement(stmt.else_branch, cond, depth)
            else:
                else_end = cond  # false edge falls through
            false_first = cond.successors[marker] if len(cond.successors) > marker else None

            then_live = then_end is not None
            else_live = else_end is not None
            if not then_live and not else_live:
                return None  # both arms terminate
            join = self.new_node(NodeKind.END_IF)
            if then_live and then_end is not cond:
                self.link(then_end, join)
            if else_live and else_end is not cond:
                self.link(else_end, join)
            if true_first is None:  # empty then arm
                self.link(cond, join)
                true_first = join
            if false_first is None:  # no else, or empty else arm
                self.link(cond, join)
                false_first = join
            cond.successors = [true_first, false_first]
            return join

        if isinstance(stmt, WhileStatement):
            header = self.new_node(NodeKind.LOOP_HEADER, stmt.condition)
            self.link(current, header)
            body_end = self._statement(stmt.body, header, depth)
            if body_end is not None:
                loop_end = self.new_node(NodeKind.LOOP_END)
                self.link(body_end, loop_end)
                self.link(loop_end, header)  # back edge
            return header  # false edge continues after the loop

        if isinstance(stmt, ForStatement):
            if stmt.init is not None:
                nxt = self._statement(stmt.init, current, depth)
                if nxt is None:
                    return None
                current = nxt
            header = self.new_node(NodeKind.LOOP_HEADER, stmt.condition)
            self.link(current, header)
            body_end = self._statement(stmt.body, header, depth)
            if body_end is not None:
                if stmt.post is not None:
                    post = self.new_node(NodeKind.EXPRESSION, ExprStatement(stmt.post.span, stmt.post))
                    self.link(body_end, post)
                    body_end = post
                loop_end = self.new_node(NodeKind.LOOP_END)
                self.link(body_end, loop_end)
                self.link(loop_end, header)
            return header

        raise AssertionError(f"unhandled statement {type(stmt).__name__}")

    @staticmethod
    def _terminates(stmt: Statement) -> bool:
        if not isinstance(stmt, ExprStatement):
            return False
        expr = stmt.expression
        if isinstance(expr, CallExpr) and isinstance(expr.callee, Identifier):
            return expr.callee.name in _TERMINATOR_BUILTINS
        return False

    def _prune_unreachable(self, entry: Node) -> None:
        reachable: set[Node] = set()
        stack = [entry]
        while stack:
            node = stack.pop()
            if node in reachable:
                continue
            reachable.add(node)
            stack.extend(node.successors)
        self.nodes = [n for n in self.nodes if n in reachable]
        for i, node in enumerate(self.nodes):
            node.id = i
            node.predecessors = [p for p in node.predecessors if p in reachable]


def build_cfg(function: FunctionDef, modifiers: Optional[list[ModifierDef]] = None) -> Cfg:
    """Build the function's CFG, inlining the given modifier bodies in order."""
    return _Builder(function, modifiers or []).build()


# ---------------------------------------------------------------------------
# Dominators


@dataclass
class DomInfo:
    idom: dict[Node, Optional[Node]]
    frontier: dict[Node, set[Node]]
    dominators: dict[Node, set[Node]]

    def dominates(self, a: Node, b: Node) -> bool:
        return a in self.dominators[b]

    def tree_children(self) -> dict[Node, list[Node]]:
        children: dict[Node, list[Node]] = {n: [] for n in self.idom}
        for node, parent in self.idom.items():
            if parent is not None:
                children[parent].append(node)
        for kids in children.values():
            kids.sort(key=lambda n: n.id)
        return children


def _reverse_postorder(entry: Node) -> list[Node]:
    order: list[Node] = []
    visited: set[Node] = {entry}
    stack: list[tuple[Node, int]] = [(entry, 0)]
    while stack:
        node, i = stack.pop()
        if i < len(node.successors):
            stack.append((node, i + 1))
            succ = node.successors[i]
            if succ not in visited:
                visited.add(succ)
                stack.append((succ, 0))
        else:
            order.append(node)
    return list(reversed(order))


def compute_dominators(cfg: Cfg) -> DomInfo:
    """Iterative dataflow over reverse postorder; graphs here are small."""
    rpo = _reverse_postorder(cfg.entry)
    all_nodes = set(rpo)
    dom: dict[Node, set[Node]] = {n: set(all_nodes) for n in rpo}
    dom[cfg.entry] = {cfg.entry}

    changed = True
    while changed:
        changed = False
        for node in rpo:
            if node is cfg.entry:
                continue
            preds = [p for p in node.predecessors if p in all_nodes]
            new = set.intersection(*(dom[p] for p in preds)) if preds else set()
            new.add(node)
            if new != dom[node]:
                dom[node] = new
                changed = True

    idom: dict[Node, Optional[Node]] = {cfg.entry: None}
    for node in rpo:
        if node is cfg.entry:
            continue
        strict = dom[node] - {node}
        # The immediate dominator is the strict dominator dominated by all others.
        idom[node] = max(strict, key=lambda d: len(dom[d]), default=None)

    frontier: dict[Node, set[Node]] = {n: set() for n in rpo}
    for node in rpo:
        preds = [p for p in node.predecessors if p in all_nodes]
        if len(preds) < 2:
            continue
        for pred in preds:
            runner: Optional[Node] = pred
            while runner is not None and runner is not idom[node]:
                frontier[runner].add(node)
                runner = idom[runner]

    return DomInfo(idom, frontier, dom)
