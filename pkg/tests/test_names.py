import pytest

from soliscope.errors import ResolutionError
from soliscope.frontend import parse_source, resolve_inheritance, resolve_names
from soliscope.frontend.astnodes import ExprStatement, Identifier, VariableDecl

from conftest import read_fixture


def table_for(source: str, name: str):
    unit = parse_source(source)
    resolve_inheritance(unit)
    return unit, resolve_names(unit.contract(name), unit)


def test_fig4_balances_binds_to_state_mapping():
    unit = parse_source(read_fixture("figures", "fig4.sol"))
    resolve_inheritance(unit)
    token = unit.contract("Token")
    table = resolve_names(token, unit)
    balances = table.state_by_name("balances")
    stmt = token.functions[0].body.statements[0]
    assert isinstance(stmt, ExprStatement)
    target_base = stmt.expression.target.base
    assert isinstance(target_base, Identifier)
    assert target_base.binding is balances


def test_local_shadowing_state_recorded():
    _, table = table_for(
        "contract C { uint owner;"
        " function f() public { uint owner = 1; owner = owner + 1; } }",
        "C",
    )
    pairs = [(p.names(), p.kind) for p in table.shadow_pairs]
    assert ((("owner", "owner"), "local-over-state")) in pairs


def test_derived_state_shadow_recorded():
    _, table = table_for(
        "contract Base { uint x; } contract Derived is Base { uint x; }",
        "Derived",
    )
    state_pairs = [p for p in table.shadow_pairs if p.kind == "state-over-state"]
    assert len(state_pairs) == 1
    inner, outer = state_pairs[0].inner, state_pairs[0].outer
    assert isinstance(inner, VariableDecl) and isinstance(outer, VariableDecl)
    assert inner is not outer and inner.name == outer.name == "x"


def test_builtin_shadow_recorded():
    _, table = table_for(
        "contract C { function f(uint send) public pure returns (uint) { return send; } }",
        "C",
    )
    assert any(p.kind == "builtin" for p in table.shadow_pairs)


def test_unresolved_identifier_raises():
    with pytest.raises(ResolutionError) as err:
        table_for("contract C { function f() public { ghost = 1; } }", "C")
    assert "ghost" in str(err.value)


def test_builtins_resolve():
    _, table = table_for(
        "contract C { function f() public payable returns (address) {"
        " require(msg.value > 0); return msg.sender; } }",
        "C",
    )
    assert table is not None  # no ResolutionError means builtins bound


def test_innermost_scope_wins():
    unit, _ = table_for(
        "contract C { uint v; function f() public returns (uint) {"
        " uint v = 2; return v; } }",
        "C",
    )
    fn = unit.contract("C").functions[0]
    ret = fn.body.statements[1]
    binding = ret.values[0].binding
    assert isinstance(binding, VariableDecl)
    assert binding.scope.value == "local"


def test_using_directives_collected():
    _, table = table_for(
        "library L { function id(uint x) internal pure returns (uint) { return x; } }"
        "contract C { using L for uint; }",
        "C",
    )
    assert ("L", None) not in table.usings
    assert any(lib == "L" for lib, _ in table.usings)
