import re

import pytest

from soliscope.cfg import Node, NodeKind
from soliscope.errors import LoweringError
from soliscope.frontend.astnodes import CallExpr, ExprStatement
from soliscope.ir import (
    ALL_KINDS,
    Assignment,
    Binary,
    CALL_KINDS,
    Condition,
    Convert,
    EventCall,
    Index,
    InternalCall,
    LibraryCall,
    LowLevelCall,
    Member,
    Phi,
    Push,
    ReferenceVar,
    Send,
    SolidityCall,
    TemporaryVar,
    Transfer,
    classify_call,
)
from soliscope.pipeline import analyze_source
from soliscope.printers import run_printer

from conftest import read_fixture


def lowered(source: str, contract: str, fn: str):
    analysis = analyze_source(source)
    return analysis.contract(contract).function(fn)


def node_irs(fa, kind=None):
    out = []
    for node in fa.cfg.nodes:
        if kind is None or node.kind is kind:
            out.extend(node.irs)
    return out


# -- instruction census -------------------------------------------------------


def test_fewer_than_forty_instruction_kinds():
    assert len(ALL_KINDS) < 40


def test_exactly_nine_call_kinds():
    assert len(CALL_KINDS) == 9


def test_no_instruction_references_a_cfg_node():
    analysis = analyze_source(read_fixture("figures", "fig3.sol"))
    for ca in analysis.contracts.values():
        for fa in ca.functions:
            for instr in fa.lowered.instructions():
                for value in vars(instr).values():
                    assert not isinstance(value, Node)
                    if isinstance(value, list):
                        assert not any(isinstance(v, Node) for v in value)


# -- figure 4 -> figure 5 -----------------------------------------------------


def test_fig5_kind_sequence_per_statement():
    fa = lowered(read_fixture("figures", "fig4.sol"), "Token", "transfer")
    statements = [n for n in fa.cfg.nodes if n.kind is NodeKind.EXPRESSION]
    assert len(statements) == 2
    for node in statements:
        shapes = [type(i) for i in node.irs]
        assert shapes == [Index, Index, LibraryCall, Assignment]
        first_ref, second_ref, call, store = node.irs
        # both dereferences target the state mapping
        assert first_ref.base.name == "balances"
        assert second_ref.base.name == "balances"
        # the call's receiver is the second REF, plus the val argument
        assert call.library.name == "SafeMath"
        assert call.args[0] is second_ref.lvalue
        assert call.args[1].name == "val"
        # the write goes through the first REF
        assert store.lvalue is first_ref.lvalue
        assert store.rvalue is call.lvalue


def _normalize_indices(text: str) -> str:
    """Rename TMP_n/REF_n densely in order of first appearance."""
    mapping: dict[str, str] = {}

    def rename(match):
        name = match.group(0)
        if name not in mapping:
            prefix = name.split("_")[0]
            count = sum(1 for k in mapping if k.startswith(prefix))
            mapping[name] = f"{prefix}_{count}"
        return mapping[name]

    return re.sub(r"\b(?:TMP|REF|TUPLE)_\d+\b", rename, text)


def test_fig5_golden_dump_matches_modulo_indices():
    analysis = analyze_source(read_fixture("figures", "fig4.sol"), "fig4.sol")
    dump = run_printer("slithir", analysis)[0].body
    golden = read_fixture("..", "golden", "fig4_slithir.txt")
    assert _normalize_indices(dump) == _normalize_indices(golden)


def test_golden_ir_determinism():
    source = read_fixture("figures", "fig4.sol")
    first = run_printer("slithir", analyze_source(source, "a.sol"))[0].body
    second = run_printer("slithir", analyze_source(source, "a.sol"))[0].body
    assert first == second


# -- lowering shapes ----------------------------------------------------------


def test_binary_goes_through_tmp():
    fa = lowered(
        "contract C { function f(uint b, uint c) public pure returns (uint) {"
        " uint a = b + c; return a; } }", "C", "f")
    instrs = node_irs(fa, NodeKind.EXPRESSION)
    assert isinstance(instrs[0], Binary)
    assert isinstance(instrs[0].lvalue, TemporaryVar)
    assert isinstance(instrs[1], Assignment)
    assert instrs[1].rvalue is instrs[0].lvalue


def test_transfer_lowering():
    fa = lowered(
        "contract C { function f(uint x) public { msg.sender.transfer(x); } }", "C", "f")
    instrs = node_irs(fa, NodeKind.EXPRESSION)
    assert len(instrs) == 1
    transfer = instrs[0]
    assert isinstance(transfer, Transfer)
    assert transfer.dest.name == "msg.sender"
    assert transfer.value.name == "x"
    assert transfer.lvalue is None


def test_compound_index_assignment_is_index_binary_store():
    fa = lowered(
        "contract C { mapping(uint => uint) m;"
        " function f(uint i, uint v) public { m[i] += v; } }", "C", "f")
    instrs = node_irs(fa, NodeKind.EXPRESSION)
    assert [type(i) for i in instrs] == [Index, Binary, Assignment]
    ref = instrs[0].lvalue
    assert instrs[1].left is ref
    assert instrs[2].lvalue is ref


def test_uninitialized_local_has_no_instruction():
    fa = lowered(
        "contract C { function f() public pure returns (uint) { uint y; y = 1;"
        " return y; } }", "C", "f")
    decl_node = fa.cfg.nodes[1]
    assert decl_node.kind is NodeKind.EXPRESSION
    assert decl_node.irs == []


def test_throw_lowers_to_revert_call():
    fa = lowered(
        "contract C { function f(bool c) public { if (c) { throw; } } }", "C", "f")
    throws = node_irs(fa, NodeKind.THROW)
    assert len(throws) == 1
    assert isinstance(throws[0], SolidityCall)
    assert throws[0].function_name == "revert"


def test_emit_lowers_to_event_call():
    fa = lowered(
        "contract C { event D(uint a, uint b);"
        " function f(uint a, uint b) public { emit D(a, b); } }", "C", "f")
    instrs = node_irs(fa, NodeKind.EXPRESSION)
    assert isinstance(instrs[0], EventCall)
    assert instrs[0].event.name == "D"
    assert [a.name for a in instrs[0].args] == ["a", "b"]


def test_if_node_ends_with_condition():
    fa = lowered(read_fixture("figures", "fig3.sol"), "Reentrance", "withdrawBalance")
    branch = next(n for n in fa.cfg.nodes if n.kind is NodeKind.IF)
    assert isinstance(branch.irs[-1], Condition)
    call = next(i for i in branch.irs if isinstance(i, LowLevelCall))
    assert call.dest.name == "msg.sender"
    assert isinstance(call.value, ReferenceVar)


def test_empty_body_has_no_instructions():
    fa = lowered("contract C { function f() public { } }", "C", "f")
    assert [n.kind for n in fa.cfg.nodes] == [NodeKind.ENTRY, NodeKind.RETURN]
    assert node_irs(fa, NodeKind.ENTRY) == []


def test_tuple_return_unpacks():
    fa = lowered(
        "contract C { function two() internal pure returns (uint, uint) {"
        " return (1, 2); }"
        " function f() public returns (uint) { (uint a, uint b) = two();"
        " return a + b; } }", "C", "f")
    printed = "\n".join(str(i) for i in node_irs(fa))
    assert "UNPACK" in printed
    assert "TUPLE_0" in printed
    assert printed.count("UNPACK") == 2


def test_push_and_new_array():
    fa = lowered(
        "contract C { uint[] xs;"
        " function f(uint v) public { xs.push(v);"
        " uint[] memory ys = new uint[](3); ys.push(v); } }", "C", "f")
    printed = [str(i) for i in node_irs(fa)]
    assert any(p.startswith("PUSH xs") for p in printed)
    assert any("NEW_ARRAY" in p for p in printed)


def test_convert_from_elementary_cast():
    fa = lowered(
        "contract C { function f(uint x) public pure returns (address) {"
        " return address(x); } }", "C", "f")
    instrs = node_irs(fa)
    assert any(isinstance(i, Convert) and str(i.target_type) == "address"
               for i in instrs)


# -- call classification ------------------------------------------------------


def _first_call_expr(source: str, contract: str = "C"):
    analysis = analyze_source(source)
    ca = analysis.contract(contract)
    fa = ca.functions[-1]
    for node in fa.cfg.nodes:
        statement = node.expression
        if isinstance(statement, ExprStatement) and isinstance(statement.expression, CallExpr):
            return statement.expression, ca
    raise AssertionError("no call statement found")


def test_classify_library_call_via_using_for():
    source = read_fixture("figures", "fig4.sol")
    analysis = analyze_source(source)
    ca = analysis.contract("Token")
    fa = ca.function("transfer")
    statement = fa.cfg.nodes[1].expression
    call = statement.expression.value  # RHS of the assignment
    instr = classify_call(call, ca.contract, ca.table)
    assert isinstance(instr, LibraryCall)
    assert instr.library.name == "SafeMath"


def test_classify_builtin_is_solidity_call():
    call, ca = _first_call_expr(
        "contract C { function f(bool c) public { require(c); } }")
    instr = classify_call(call, ca.contract, ca.table)
    assert isinstance(instr, SolidityCall)
    assert instr.function_name == "require"


def test_classify_low_level_call_with_value():
    call, ca = _first_call_expr(
        "contract C { function f(uint b) public { msg.sender.call.value(b)(); } }")
    instr = classify_call(call, ca.contract, ca.table)
    assert isinstance(instr, LowLevelCall)
    assert instr.dest.name == "msg.sender"
    assert instr.value is not None and instr.value.name == "b"


def test_classify_internal_and_high_level():
    call, ca = _first_call_expr(
        "contract C { function g() public {} function f() public { g(); } }")
    assert isinstance(classify_call(call, ca.contract, ca.table), InternalCall)

    call, ca = _first_call_expr(
        "contract Remote { function ping() public {} }"
        "contract C { Remote r; function f() public { r.ping(); } }")
    instr = classify_call(call, ca.contract, ca.table)
    assert type(instr).__name__ == "HighLevelCall"


def test_classify_send_and_transfer_of_address():
    call, ca = _first_call_expr(
        "contract C { function f(address a, uint v) public { a.send(v); } }")
    assert isinstance(classify_call(call, ca.contract, ca.table), Send)

    call, ca = _first_call_expr(
        "contract C { function f(address a, uint v) public { a.transfer(v); } }")
    assert isinstance(classify_call(call, ca.contract, ca.table), Transfer)


def test_erc20_transfer_on_contract_type_is_high_level():
    call, ca = _first_call_expr(
        "contract IToken { function transfer(address to, uint v) public {} }"
        "contract C { IToken t;"
        " function f(address to, uint v) public { t.transfer(to, v); } }")
    instr = classify_call(call, ca.contract, ca.table)
    assert type(instr).__name__ == "HighLevelCall"
    assert instr.function_name == "transfer"


def test_super_call_is_internal_never_external():
    source = (
        "contract Base { uint x; function f() public { x = 1; } }"
        "contract Derived is Base { function f() public { super.f(); } }"
    )
    analysis = analyze_source(source)
    ca = analysis.contract("Derived")
    fa = ca.function("f")
    instrs = node_irs(fa)
    internal = [i for i in instrs if isinstance(i, InternalCall)]
    assert len(internal) == 1
    assert internal[0].function.contract.name == "Base"
    from soliscope.ir import is_external_call
    assert not any(is_external_call(i) for i in instrs)


def test_unsupported_member_is_lowering_error():
    with pytest.raises(LoweringError):
        analyze_source(
            "contract C { function f(address a) public { a.delegatecall(); } }")


def test_every_ref_is_defined_before_use():
    analysis = analyze_source(read_fixture("figures", "fig4.sol"))
    for ca in analysis.contracts.values():
        for fa in ca.functions:
            for node in fa.cfg.nodes:
                defined = set()
                for instr in node.irs:
                    for op in instr.reads():
                        if isinstance(op, ReferenceVar):
                            assert op in defined
                    if isinstance(instr, (Index, Member)):
                        defined.add(instr.lvalue)
