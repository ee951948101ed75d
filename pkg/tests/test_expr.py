import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from sasakisub.expr import (
    Div,
    EvaluationError,
    ExpressionError,
    Mul,
    Neg,
    Var,
    derivative,
    evaluate,
    evaluate_jet,
    parse_expression,
)

VARS = ("x1", "x2", "y1", "y2", "z")


def test_product_quotient_ast():
    e = parse_expression("y1*y2/2", VARS)
    assert isinstance(e.root, Div)
    assert isinstance(e.root.left, Mul)
    assert e.root.left.left == Var(2, "y1")
    assert e.root.left.right == Var(3, "y2")
    assert e.root.right.value == 2.0


def test_negated_quotient():
    e = parse_expression("-(1/2)*y1", VARS)
    # unary minus binds to the whole product chain
    assert isinstance(e.root, (Neg, Mul))
    assert evaluate(e, [0, 0, 4.0, 0, 0]) == pytest.approx(-2.0)


def test_syntax_error_offset():
    with pytest.raises(ExpressionError) as info:
        parse_expression("y1 +", VARS)
    assert info.value.offset == 4


def test_undeclared_variable_named():
    with pytest.raises(ExpressionError, match="'w'"):
        parse_expression("x1 + w", VARS)


@pytest.mark.parametrize("text", ["", "   ", "x1 ^ 1.5", "(x1", "x1 $ 2", "x1^2^2"])
def test_malformed_inputs(text):
    with pytest.raises(ExpressionError):
        parse_expression(text, VARS)


def test_square_jet():
    j = evaluate_jet(parse_expression("y1*y1", ("y1",)), [3.0])
    assert j.value == 9.0
    assert j.gradient[0] == 6.0
    assert j.hessian[0, 0] == 2.0


def test_bilinear_jet():
    j = evaluate_jet(parse_expression("y1*y2", ("y1", "y2")), [1.0, -1.0])
    assert j.value == -1.0
    np.testing.assert_array_equal(j.gradient, [-1.0, 1.0])
    assert j.hessian[0, 1] == j.hessian[1, 0] == 1.0


def test_target_metric_entry_against_differences():
    e = parse_expression("y1*y2/2", ("y1", "y2"))
    p = np.array([0.3, -0.2])
    j = evaluate_jet(e, p)
    assert j.value == pytest.approx(-0.03, abs=1e-15)
    h = 1e-5
    fd = [(evaluate(e, p + h * u) - evaluate(e, p - h * u)) / (2 * h) for u in np.eye(2)]
    np.testing.assert_allclose(j.gradient, fd, atol=1e-6)


def test_division_by_zero():
    with pytest.raises(EvaluationError):
        evaluate_jet(parse_expression("1/(y1 - 1)", ("y1",)), [1.0])


def test_powers_and_negative_exponents():
    e = parse_expression("(1 + y1^2)^(-1)", ("y1",))
    j = evaluate_jet(e, [0.5])
    assert j.value == pytest.approx(1 / 1.25)
    assert j.gradient[0] == pytest.approx(-2 * 0.5 / 1.25**2)


def test_symbolic_derivative_agrees_with_jet():
    e = parse_expression("y1^3*z - y2/(2 + z^2)", VARS)
    p = [0.1, 0.2, 0.3, -0.4, 0.5]
    j = evaluate_jet(e, p)
    for i in range(5):
        assert evaluate(derivative(e, i), p) == pytest.approx(j.gradient[i], abs=1e-14)
        dj = evaluate_jet(derivative(e, i), p)
        np.testing.assert_allclose(dj.gradient, j.hessian[i], atol=1e-13)


# random rational expressions in three variables
_names = ("a", "b", "c")
_leaf = st.one_of(st.sampled_from(_names), st.integers(1, 5).map(str))


def _extend(children):
    binary = st.tuples(children, st.sampled_from("+-*"), children).map(lambda t: f"({t[0]} {t[1]} {t[2]})")
    quotient = children.map(lambda c: f"({c})/(2 + a^2)")
    power = st.tuples(children, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}")
    neg = children.map(lambda c: f"-({c})")
    return st.one_of(binary, quotient, power, neg)


expressions = st.recursive(_leaf, _extend, max_leaves=8)
coords = st.lists(st.floats(-1, 1, allow_nan=False), min_size=3, max_size=3)


@given(expressions, coords)
def test_jet_matches_sympy(text, x):
    e = parse_expression(text, _names)
    syms = sp.symbols(_names)
    ref = sp.sympify(text.replace("^", "**"), locals=dict(zip(_names, syms)))
    subs = dict(zip(syms, x))
    j = evaluate_jet(e, x)
    scale = 1 + abs(float(ref.subs(subs)))
    assert j.value == pytest.approx(float(ref.subs(subs)), abs=1e-9 * scale)
    for i, s in enumerate(syms):
        assert j.gradient[i] == pytest.approx(float(sp.diff(ref, s).subs(subs)), abs=1e-8 * scale)
        for k, t in enumerate(syms):
            assert j.hessian[i, k] == pytest.approx(float(sp.diff(ref, s, t).subs(subs)), abs=1e-7 * scale)


@given(expressions, coords)
def test_jet_matches_finite_differences(text, x):
    e = parse_expression(text, _names)
    x = np.array(x)
    j = evaluate_jet(e, x)
    h = 1e-5
    fd = np.array([(evaluate(e, x + h * u) - evaluate(e, x - h * u)) / (2 * h) for u in np.eye(3)])
    scale = 1 + np.max(np.abs(j.hessian)) + abs(j.value)
    np.testing.assert_allclose(j.gradient, fd, atol=1e-6 * scale)
