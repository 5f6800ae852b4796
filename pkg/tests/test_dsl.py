"""Group-expression parser: round trips and error reporting."""

import pytest
from hypothesis import given, settings, strategies as st

from propends.descriptors import (
    CyclicP,
    DirectProduct,
    FinitePres,
    FreeProduct,
    FreeProP,
    Zp,
)
from propends.dsl import parse_group_expr, parse_word
from propends.errors import DSLSyntaxError, NonPGroup


def atoms():
    return st.sampled_from(
        ["Zp", "free(2)", "free(3)", "cyclic(2)", "cyclic(4)"]
    )


@st.composite
def expressions(draw, depth=0):
    if depth >= 2 or draw(st.booleans()):
        return draw(atoms())
    kind = draw(st.sampled_from(["product", "paren", "direct"]))
    if kind == "product":
        parts = draw(
            st.lists(expressions(depth=depth + 1), min_size=2, max_size=3)
        )
        return " * ".join(parts)
    if kind == "paren":
        return f"({draw(expressions(depth=depth + 1))})"
    left = draw(expressions(depth=depth + 1))
    right = draw(expressions(depth=depth + 1))
    return f"direct({left}, {right})"


@given(text=expressions())
@settings(max_examples=80, deadline=None)
def test_print_parse_fixed_point(text):
    node = parse_group_expr(text)
    printed = node.print()
    assert parse_group_expr(printed).print() == printed


def test_examples_map_to_expected_descriptors():
    assert isinstance(parse_group_expr("free(2)").to_descriptor(2), FreeProP)
    prod = parse_group_expr("cyclic(2) * cyclic(2)").to_descriptor(2)
    assert isinstance(prod, FreeProduct)
    assert all(isinstance(d, CyclicP) for d in prod.parts)
    d = parse_group_expr("direct(cyclic(3), free(2))").to_descriptor(3)
    assert isinstance(d, DirectProduct)
    assert isinstance(d.left, CyclicP) and isinstance(d.right, FreeProP)
    f = parse_group_expr("finite{a,b; a^2, b^2, [a,b]}").to_descriptor(2)
    assert isinstance(f, FinitePres) and f.order == 4
    assert isinstance(parse_group_expr("Zp").to_descriptor(5), Zp)


def test_product_flattening_normalizes():
    n = parse_group_expr("Zp * (Zp * Zp)")
    assert n.print() == "Zp * Zp * Zp"
    assert len(n.children) == 3


def test_cyclic_argument_must_match_p():
    with pytest.raises(NonPGroup):
        parse_group_expr("cyclic(6)").to_descriptor(2)
    with pytest.raises(NonPGroup):
        parse_group_expr("cyclic(4)").to_descriptor(3)


@pytest.mark.parametrize(
    "bad",
    [
        "",
        "free(x)",
        "cyclic(2",
        "free(-1)",
        "finite{a; a^2",
        "free(2) cyclic(2)",
        "direct(Zp)",
        "finite{a,a; a^2}",
        "finite{a; a q}",
        "* Zp",
        "unknown(2)",
    ],
)
def test_syntax_errors_carry_spans(bad):
    with pytest.raises(DSLSyntaxError) as exc:
        parse_group_expr(bad)
    assert exc.value.span is not None
    lo, hi = exc.value.span
    assert 0 <= lo <= hi


def test_parse_word_forms():
    names = ("a", "b")
    assert parse_word("a b a^-1 b^-1", names) == (1, 2, -1, -2)
    assert parse_word("[a, b]", names) == (1, 2, -1, -2)
    assert parse_word("(a b)^-1", names) == (-2, -1)
    assert parse_word("a^3", names) == (1, 1, 1)
    assert parse_word("", names) == ()
    with pytest.raises(DSLSyntaxError):
        parse_word("a^", names)
    with pytest.raises(DSLSyntaxError):
        parse_word("c", names)
