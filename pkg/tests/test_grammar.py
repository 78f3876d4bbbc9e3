import pytest
from hypothesis import given, strategies as st

from dyerlashof.op_expr import OpPolynomial, ParseError, format_ast, parse, parse_ast, to_text
from dyerlashof.op_expr.grammar import Apply, AtomRef, Const, Power, Product, Sum, parse_equation


def test_single_word():
    assert parse_ast("Q^2 xi1") == Apply(((0, 2),), AtomRef("xi1"))
    assert parse_ast("b Q^1 tau0") == Apply(((1, 1),), AtomRef("tau0"))


def test_product_argument():
    node = parse_ast("Q^1 (tau0 * zeta1)")
    assert node == Apply(((0, 1),), Product((AtomRef("tau0"), AtomRef("zeta1"))))


def test_precedence():
    node = parse_ast("Q^2 xi1 * xi2 + 3 xi1^2")
    assert node == Sum(((1, Product((Apply(((0, 2),), AtomRef("xi1")), AtomRef("xi2")))),
                        (3, Power(AtomRef("xi1"), 2))))


def test_user_generator_needs_degree():
    assert parse("g@4 + Q^5 g@4", 3) == parse("g + Q^5 g", 3, {"g": 4})
    with pytest.raises(ParseError):
        parse("g + 1", 3)


def test_degree_mismatch():
    with pytest.raises(ParseError) as exc:
        parse("xi1@2", 2)
    assert exc.value.pos == 0


def test_error_positions():
    with pytest.raises(ParseError) as exc:
        parse_ast("Q^2 xi1 +")
    assert exc.value.pos == 9
    assert "^" in str(exc.value)
    with pytest.raises(ParseError) as exc:
        parse_ast("xi1 $ xi2")
    assert exc.value.pos == 4


def test_bockstein_rejected_at_two():
    with pytest.raises(ParseError):
        parse("b Q^1 xi1", 2)


def test_equation():
    lhs, rhs = parse_equation("Q^2 xi1 = xi1^3")
    assert lhs == Apply(((0, 2),), AtomRef("xi1"))
    assert rhs == Power(AtomRef("xi1"), 3)
    with pytest.raises(ParseError) as exc:
        parse_equation("Q^2 xi1 = (xi1")
    assert exc.value.pos == 14


def test_normal_forms():
    assert to_text(parse("Q^3 Q^1 xi1", 2)) == "0"
    assert to_text(parse("Q^4 Q^1 xi1", 2)) == "(Q^2 xi1)^2"
    assert to_text(parse("Q^5 1", 2)) == "0"
    assert to_text(parse("Q^1 xi1", 2)) == "xi1^2"
    assert to_text(parse("Q^1 zeta1", 3)) == "0"


def test_cartan_examples():
    assert parse("Q^2 (xi1 * xi1)", 2) == parse("xi1^4", 2)
    assert to_text(parse("Q^3 (xi1^2)", 2)) == "0"
    assert parse("Q^4 (xi1 * 1)", 2) == parse("Q^4 xi1", 2)


NAMES = st.sampled_from(["xi1", "xi2", "zeta1", "tau0", "taubar1", "tau1"])


@st.composite
def expressions(draw, depth=2):
    if depth == 0:
        return draw(st.one_of(NAMES, st.integers(1, 2).map(str)))
    kind = draw(st.sampled_from(["leaf", "op", "sum", "prod", "pow"]))
    sub = expressions(depth - 1)
    if kind == "leaf":
        return draw(NAMES)
    if kind == "op":
        e = draw(st.sampled_from(["", "b "]))
        return f"{e}Q^{draw(st.integers(0, 6))} ({draw(sub)})"
    if kind == "sum":
        return f"{draw(sub)} + {draw(sub)}"
    if kind == "prod":
        return f"({draw(sub)}) * ({draw(sub)})"
    return f"({draw(sub)})^{draw(st.integers(1, 3))}"


@given(expressions())
def test_ast_round_trip(text):
    node = parse_ast(text)
    assert parse_ast(format_ast(node)) == node


@given(expressions())
def test_normal_form_round_trip(text):
    poly = parse(text, 3)
    assert parse(to_text(poly), 3) == poly
