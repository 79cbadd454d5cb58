"""Inheritance resolution: C3 linearization, flattened members, super binding.

Solidity lists base contracts most-base-like first, so the C3 merge runs
over the reversed base list; linearizations are most-derived first.
"""

from __future__ import annotations

from soliscope.errors import ResolutionError
from soliscope.frontend.astnodes import (
    ContractDef,
    FunctionDef,
    ModifierDef,
    SourceUnit,
    VariableDecl,
)


def c3_merge(sequences: list[list[ContractDef]]) -> list[ContractDef]:
    """Standard C3 merge; raises ResolutionError on an inconsistent hierarchy."""
    result: list[ContractDef] = []
    seqs = [list(s) for s in sequences if s]
    while seqs:
        for seq in seqs:
            head = seq[0]
            if not any(head in other[1:] for other in seqs):
                break
        else:
            names = sorted({s[0].name for s in seqs})
            raise ResolutionError(
                "inconsistent inheritance hierarchy; cannot linearize "
                + ", ".join(names)
            )
        result.append(head)
        seqs = [[c for c in seq if c is not head] for seq in seqs]
        seqs = [s for s in seqs if s]
    return result


def linearize(contract: ContractDef, by_name: dict[str, ContractDef]) -> list[ContractDef]:
    bases = []
    for base_name in contract.bases:
        base = by_name.get(base_name)
        if base is None:
            raise ResolutionError(
                f"unknown base contract '{base_name}' of '{contract.name}'", contract.span
            )
        bases.append(base)
    # Reversed: the last-listed base is the most derived among the bases.
    tail = [linearize(b, by_name) for b in reversed(bases)]
    return [contract] + c3_merge(tail + [list(reversed(bases))])


def resolve_inheritance(unit: SourceUnit) -> SourceUnit:
    """Fill each contract's linearization; validates the whole hierarchy."""
    by_name = {c.name: c for c in unit.contracts}
    for contract in unit.contracts:
        contract.linearization = linearize(contract, by_name)
    return unit


def inherited_state_variables(contract: ContractDef) -> list[VariableDecl]:
    """All state variables visible in the contract, base-most first.

    A derived redeclaration shadows but does not remove the base variable;
    both appear (the shadowing detector reports the pair).
    """
    out: list[VariableDecl] = []
    for c in reversed(contract.linearization):
        out.extend(c.state_variables)
    return out


def effective_functions(contract: ContractDef) -> list[FunctionDef]:
    """Most-derived override per signature, in linearization order."""
    seen: dict[str, FunctionDef] = {}
    for c in contract.linearization:
        for fn in c.functions:
            key = "constructor" if fn.is_constructor else fn.signature
            if key not in seen:
                seen[key] = fn
    return list(seen.values())


def effective_modifiers(contract: ContractDef) -> dict[str, ModifierDef]:
    out: dict[str, ModifierDef] = {}
    for c in contract.linearization:
        for mod in c.modifiers:
            out.setdefault(mod.name, mod)
    return out


def resolve_super(
    analysis_contract: ContractDef, caller_contract: ContractDef, name: str
) -> FunctionDef:
    """Bind super.name() to the next implementation in the linearization.

    Super calls walk the analysis contract's linearization starting just
    past the contract defining the caller; they are internal calls, never
    external ones.
    """
    lin = analysis_contract.linearization
    try:
        start = lin.index(caller_contract) + 1
    except ValueError:
        start = 1
    for c in lin[start:]:
        for fn in c.functions:
            if fn.name == name and not fn.is_constructor:
                return fn
    raise ResolutionError(
        f"super.{name} does not resolve in {analysis_contract.name}'s hierarchy"
    )
