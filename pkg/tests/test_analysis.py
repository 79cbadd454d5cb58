"""Read/write sets, protection heuristic, dependency and taint."""

from soliscope.analysis.dependency import ALL, UNPRIVILEGED
from soliscope.frontend.astnodes import VarScope
from soliscope.ir.variables import BuiltinVar, MSG_SENDER
from soliscope.pipeline import analyze_source

from conftest import read_fixture
from oracles import deps_oracle, transitive_writes_oracle
from progen import random_contract


def names(vars) -> set[str]:
    return {getattr(v, "name", str(v)) for v in vars}


# -- read/write sets -----------------------------------------------------------


def test_fig4_transfer_sets():
    analysis = analyze_source(read_fixture("figures", "fig4.sol"))
    ca = analysis.contract("Token")
    fn = ca.function("transfer").function
    assert names(ca.readwrite.state_read(fn)) == {"balances"}
    assert names(ca.readwrite.state_written(fn)) == {"balances"}
    all_reads = names(ca.readwrite.fn_reads[fn])
    assert {"msg.sender", "to", "val", "balances"} <= all_reads


def test_empty_function_sets_are_empty():
    analysis = analyze_source("contract C { function f() public {} }")
    ca = analysis.contract("C")
    fn = ca.function("f").function
    assert ca.readwrite.fn_reads[fn] == set()
    assert ca.readwrite.fn_writes[fn] == set()


def test_internal_call_effects_fold_transitively():
    analysis = analyze_source(
        "contract C { uint s;"
        " function h(uint v) internal { s = v; }"
        " function g(uint v) internal { h(v); }"
        " function f(uint v) public { g(v); } }")
    ca = analysis.contract("C")
    f = ca.function("f").function
    assert names(ca.readwrite.state_written(f)) == {"s"}
    assert names(ca.readwrite.state_written(f, transitive=False)) == set()
    # oracle: closure over call-graph edges
    assert ca.readwrite.state_written(f) == transitive_writes_oracle(ca, f)


def test_recursion_is_cycle_safe():
    analysis = analyze_source(
        "contract C { uint s;"
        " function a(uint n) public { s = n; b(n); }"
        " function b(uint n) public { a(n); } }")
    ca = analysis.contract("C")
    b = ca.function("b").function
    assert names(ca.readwrite.state_written(b)) == {"s"}


def test_node_sets_union_to_function_sets():
    for seed in range(10):
        analysis = analyze_source(random_contract(seed))
        for ca in analysis.contracts.values():
            for fa in ca.functions:
                reads = set()
                writes = set()
                for node in fa.cfg.nodes:
                    reads |= ca.readwrite.node_reads[node]
                    writes |= ca.readwrite.node_writes[node]
                assert reads == ca.readwrite.fn_reads[fa.function]
                assert writes == ca.readwrite.fn_writes[fa.function]


def test_index_write_counts_as_write_and_base_read():
    analysis = analyze_source(
        "contract C { mapping(address => uint) m;"
        " function f(address k) public { m[k] = 1; } }")
    ca = analysis.contract("C")
    fn = ca.function("f").function
    assert names(ca.readwrite.state_written(fn)) == {"m"}
    assert "m" in names(ca.readwrite.fn_reads[fn])  # index base counts as read


def test_storage_reference_write_is_alias_aware():
    analysis = analyze_source(read_fixture("figures", "fig6.sol"))
    ca = analysis.contract("StorageRefs")
    fn = ca.function("increase").function
    assert names(ca.readwrite.state_written(fn)) == {"a", "b"}
    assert {"a", "b"} <= names(ca.readwrite.state_read(fn))


# -- protection ------------------------------------------------------------------


def protection_of(source: str, fn_name: str, contract: str = "C") -> bool:
    analysis = analyze_source(source)
    ca = analysis.contract(contract)
    return ca.is_protected(ca.function(fn_name).function)


def test_constructor_is_protected():
    assert protection_of(
        "contract C { address owner; constructor() public { owner = msg.sender; } }",
        "constructor")


def test_require_comparison_protects():
    assert protection_of(
        "contract C { address owner;"
        " function f() public { require(msg.sender == owner); } }", "f")


def test_mapping_key_use_does_not_protect():
    assert not protection_of(
        "contract C { mapping(address => uint) m;"
        " function f() public { m[msg.sender] = 1; } }", "f")


def test_laundered_comparison_protects():
    assert protection_of(
        "contract C { address owner; function f() public {"
        " address t = msg.sender; require(t == owner); } }", "f")


def test_modifier_guard_protects():
    assert protection_of(
        "contract C { address owner;"
        " modifier onlyOwner() { require(msg.sender == owner); _; }"
        " function f() public onlyOwner { owner = msg.sender; } }", "f")


def test_inequality_comparison_protects():
    assert protection_of(
        "contract C { address banned;"
        " function f() public { require(msg.sender != banned); } }", "f")


# -- dependency and taint ----------------------------------------------------------


def decl_of(ca, fn_name: str, local_name: str):
    fa = ca.function(fn_name)
    for node in fa.cfg.nodes:
        statement = node.expression
        decls = getattr(statement, "declarations", None)
        if decls:
            for decl in decls:
                if decl.name == local_name:
                    return decl
    raise AssertionError(f"{local_name} not found")


def test_constant_assignment_has_no_deps():
    analysis = analyze_source(
        "contract C { function f() public pure { uint x = 5; } }")
    ca = analysis.contract("C")
    x = decl_of(ca, "f", "x")
    assert ca.deps.deps(x, fn=ca.function("f").function) == set()


def test_fig4_balances_depends_on_inputs():
    analysis = analyze_source(read_fixture("figures", "fig4.sol"))
    ca = analysis.contract("Token")
    balances = ca.table.state_by_name("balances")
    deps = names(ca.deps.deps(balances))
    assert {"val", "to", "msg.sender"} <= deps


def test_phi_merges_operand_deps():
    analysis = analyze_source(
        "contract C { function f(bool c, uint a, uint b) public pure returns (uint) {"
        " uint y = 0; if (c) { y = a; } else { y = b; } return y; } }")
    ca = analysis.contract("C")
    y = decl_of(ca, "f", "y")
    deps = names(ca.deps.deps(y, fn=ca.function("f").function))
    assert {"a", "b"} <= deps


def test_cross_function_state_flow():
    analysis = analyze_source(
        "contract C { uint s;"
        " function f(uint p) public { s = p; }"
        " function g() public { uint t = s; t = t + 1; } }")
    ca = analysis.contract("C")
    t = decl_of(ca, "g", "t")
    assert "p" in names(ca.deps.deps(t))
    assert ca.deps.is_tainted(t)


def test_no_cross_flow_without_state():
    analysis = analyze_source(
        "contract C { function f(uint p) public pure returns (uint) {"
        " uint t = p; return t; } }")
    ca = analysis.contract("C")
    t = decl_of(ca, "f", "t")
    fn = ca.function("f").function
    assert ca.deps.deps(t, fn=fn) == ca.deps.deps(t)


def test_unprivileged_masks_protected_writes():
    analysis = analyze_source(
        "contract C { address owner;"
        " constructor() public { owner = msg.sender; }"
        " function setOwner(address o) public {"
        "   require(msg.sender == owner); owner = o; } }")
    ca = analysis.contract("C")
    owner = ca.table.state_by_name("owner")
    assert names(ca.deps.deps(owner, universe=ALL)) == {"o", "msg.sender"}
    assert ca.deps.deps(owner, universe=UNPRIVILEGED) == set()
    assert ca.deps.is_tainted(owner, universe=ALL)
    assert not ca.deps.is_tainted(owner, universe=UNPRIVILEGED)


def test_unprivileged_subset_of_all_universe():
    for seed in range(15):
        analysis = analyze_source(random_contract(seed))
        for ca in analysis.contracts.values():
            for decl in ca.table.state_variables:
                unpriv = ca.deps.deps(decl, universe=UNPRIVILEGED)
                everything = ca.deps.deps(decl, universe=ALL)
                assert unpriv <= everything


def test_external_call_results_are_tainted():
    analysis = analyze_source(
        "contract C { bool flag;"
        " function f(address a) public { bool ok = a.call(); flag = ok; } }")
    ca = analysis.contract("C")
    flag = ca.table.state_by_name("flag")
    deps = ca.deps.deps(flag)
    assert any(isinstance(d, BuiltinVar) and d.name == "<external>" for d in deps)
    assert ca.deps.is_tainted(flag)


def test_taint_propagates_through_builtin_calls():
    analysis = analyze_source(
        "contract C { bytes32 h;"
        " function f(uint p) public { h = keccak256(p); } }")
    ca = analysis.contract("C")
    h = ca.table.state_by_name("h")
    assert ca.deps.is_tainted(h)


def test_internal_call_result_carries_callee_return_deps():
    analysis = analyze_source(
        "contract C { uint base;"
        " function half(uint v) internal view returns (uint) { return v + base; }"
        " function f(uint p) public view returns (uint) {"
        " uint r = half(p); return r; } }")
    ca = analysis.contract("C")
    r = decl_of(ca, "f", "r")
    deps = names(ca.deps.deps(r, fn=ca.function("f").function))
    assert {"p", "base"} <= deps


def test_fixpoint_idempotent_and_matches_matrix_oracle():
    sources = [
        read_fixture("figures", "fig4.sol"),
        "contract C { uint s; uint t;"
        " function f(uint p) public { s = p; }"
        " function g() public { t = s + 1; } }",
        "contract C { address owner; uint pot;"
        " constructor() public { owner = msg.sender; }"
        " function fund() public payable { pot = pot + msg.value; }"
        " function sweep(address to) public {"
        "   require(msg.sender == owner); to.transfer(pot); } }",
    ]
    for source in sources:
        analysis = analyze_source(source)
        for ca in analysis.ordered_contracts():
            for decl in ca.table.state_variables:
                for universe, flag in ((ALL, True), (UNPRIVILEGED, False)):
                    mine = ca.deps.deps(decl, universe=universe)
                    oracle = deps_oracle(ca, decl, universe_all=flag)
                    assert mine == oracle, (decl.name, universe)
                # querying twice changes nothing (cached graph or not)
                first = ca.deps.deps(decl)
                again = ca.deps.deps(decl)
                assert first == again


def test_taint_sources_are_public_inputs():
    analysis = analyze_source(
        "contract C { uint a; uint b;"
        " function pub(uint p) public { a = p; }"
        " function inner(uint q) internal { b = q; } }")
    ca = analysis.contract("C")
    sources = ca.deps.taint_sources()
    source_names = names(sources)
    assert "p" in source_names
    assert "q" not in source_names
    assert {"msg.sender", "msg.value", "msg.data", "tx.origin"} <= source_names
    a = ca.table.state_by_name("a")
    b = ca.table.state_by_name("b")
    assert ca.deps.is_tainted(a)
    assert not ca.deps.is_tainted(b)


def test_parameter_itself_is_tainted():
    analysis = analyze_source(
        "contract C { function w(address dest) public { dest.transfer(1); } }")
    ca = analysis.contract("C")
    dest = ca.function("w").function.parameters[0]
    assert dest.scope is VarScope.PARAMETER
    assert ca.deps.is_tainted(dest)


def test_msg_sender_is_its_own_source():
    analysis = analyze_source("contract C { function f() public {} }")
    ca = analysis.contract("C")
    assert ca.deps.is_tainted(MSG_SENDER)
