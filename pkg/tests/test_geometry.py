import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracle
from conftest import P_A, fixture, phi_basis, points
from sasakisub.geometry import (
    Chart,
    ChartMismatchError,
    MetricField,
    ModelError,
    VectorField,
    christoffel_at,
    covariant_derivative_at,
    inverse_metric_at,
    lie_bracket_at,
    metric_at,
    ricci_at,
    ricci_tensor_at,
    riemann_apply,
    riemann_at,
    riemann_tensor_at,
)
from sasakisub.jets import product

EX1 = fixture("example1").source
CHART = EX1.chart


def euclidean(names):
    chart = Chart(tuple(names))
    n = chart.dim
    return MetricField.from_strings(chart, [["1" if i == j else "0" for j in range(n)] for i in range(n)])


def test_euclidean_metric_is_identity():
    m = euclidean("abc")
    np.testing.assert_array_equal(metric_at(m, [0.3, 1.0, -2.0]), np.eye(3))
    assert np.all(christoffel_at(m, [0.1, 0.2, 0.3]) == 0)
    assert np.all(riemann_tensor_at(m, [0.1, 0.2, 0.3]) == 0)


def test_example1_metric_at_origin():
    np.testing.assert_allclose(metric_at(EX1.metric, np.zeros(5)), np.eye(5) / 4, atol=0)


def test_example3_target_metric():
    gN = fixture("example3").submersion.target.metric
    np.testing.assert_allclose(metric_at(gN, [0, 0, 1.7]), np.diag([1 / 8, 1 / 8, 1 / 4]), atol=0)
    g = metric_at(gN, [0.3, -0.2, 0.5])
    np.testing.assert_allclose(g @ inverse_metric_at(gN, [0.3, -0.2, 0.5]), np.eye(3), atol=1e-12)


def test_inverse_of_quarter_identity():
    np.testing.assert_allclose(inverse_metric_at(EX1.metric, np.zeros(5)), 4 * np.eye(5), atol=1e-14)


def test_polar_christoffels():
    chart = Chart(("r", "t"))
    m = MetricField.from_strings(chart, [["1", "0"], ["0", "r^2"]])
    gam = christoffel_at(m, [2.0, 0.7])
    expected = np.zeros((2, 2, 2))
    expected[0, 1, 1] = -2.0
    expected[1, 0, 1] = expected[1, 1, 0] = 0.5
    np.testing.assert_allclose(gam, expected, atol=1e-15)


def test_example1_christoffels_against_differences():
    ref = oracle.christoffel_fn(oracle.matrix_function(EX1.metric.g))(P_A)
    np.testing.assert_allclose(christoffel_at(EX1.metric, P_A), ref, atol=1e-6)


def test_nabla_E1_xi_is_minus_phi_E1():
    E = phi_basis(P_A)
    X = VectorField.from_strings(CHART, ["0", "0", "2", "0", "0"])
    xi = VectorField.from_strings(CHART, ["0", "0", "0", "0", "2"])
    phi = EX1.structure.at(P_A)[0]
    np.testing.assert_allclose(covariant_derivative_at(EX1.metric, X, xi, P_A), -phi @ E[0], atol=1e-9)


def test_bracket_E1_E3_against_differences():
    E1 = VectorField.from_strings(CHART, ["0", "0", "2", "0", "0"])
    E3 = VectorField.from_strings(CHART, ["2", "0", "0", "0", "2*y1"])
    br = lie_bracket_at(E1, E3, P_A)
    f1, f3 = oracle.vector_function(E1.components), oracle.vector_function(E3.components)
    ref = oracle.central(f3, P_A) @ f1(P_A) - oracle.central(f1, P_A) @ f3(P_A)
    np.testing.assert_allclose(br, ref, atol=1e-8)
    np.testing.assert_allclose(br, [0, 0, 0, 0, 4.0], atol=1e-14)


def test_constant_fields_commute():
    a = VectorField.from_strings(CHART, ["1", "2", "0", "0", "3"])
    b = VectorField.from_strings(CHART, ["0", "1", "1", "0", "0"])
    assert np.all(lie_bracket_at(a, b, P_A) == 0)


def test_chart_mismatch():
    other = VectorField.from_strings(Chart(("a", "b", "c", "d", "e")), ["1"] * 5)
    mine = VectorField.from_strings(CHART, ["1"] * 5)
    with pytest.raises(ChartMismatchError):
        lie_bracket_at(mine, other, P_A)


def test_metric_must_be_mirrored():
    chart = Chart(("a", "b"))
    e = chart.parse
    with pytest.raises(ModelError, match=r"g\[b,a\] and g\[a,b\]"):
        MetricField(chart, ((e("1"), e("0")), (e("0"), e("1"))))


def test_sasakian_curvature_on_phi_basis():
    for p in points("example1", 50):
        E = phi_basis(p)
        xi = E[4]
        g = metric_at(EX1.metric, p)
        eta = EX1.structure.at(p)[2]
        R = riemann_tensor_at(EX1.metric, p)
        for X in E[:4]:
            for Y in E[:4]:
                lhs = riemann_apply(R, xi, X, Y)
                rhs = (X @ g @ Y) * xi - (eta @ Y) * X
                assert np.max(np.abs(lhs - rhs)) <= 1e-8


def test_phi_basis_is_orthonormal():
    for p in points("example1", 20):
        B = np.array(phi_basis(p))
        np.testing.assert_allclose(B @ metric_at(EX1.metric, p) @ B.T, np.eye(5), atol=1e-9)


def test_ricci_xi_xi():
    xi = VectorField.from_strings(CHART, ["0", "0", "0", "0", "2"])
    e1 = VectorField.from_strings(CHART, ["0", "0", "2", "0", "0"])
    assert ricci_at(EX1.metric, xi, xi, P_A) == pytest.approx(4.0, abs=1e-8)
    assert abs(ricci_at(EX1.metric, e1, xi, P_A)) <= 1e-8


# properties on random polynomial fields

_coeffs = st.lists(st.integers(-3, 3), min_size=3, max_size=3)
_field = st.lists(_coeffs, min_size=5, max_size=5)
_point = st.lists(st.floats(-0.9, 0.9, allow_nan=False), min_size=5, max_size=5).map(np.array)


def polynomial_field(coeffs):
    """Component k = c0 + c1·y1 + c2·x2·z, a small polynomial family."""
    comps = [f"{a} + {b}*y1 + {c}*x2*z" for a, b, c in coeffs]
    return VectorField.from_strings(CHART, comps)


@given(_field, _field, _field, _point)
def test_metric_compatibility(cx, cy, cz, p):
    X, Y, Z = (polynomial_field(c) for c in (cx, cy, cz))
    g = EX1.metric.jet(p)
    gyz = product("i,i->", product("ij,j->i", g, Z.jet(p)), Y.jet(p))
    lhs = float(gyz.d1 @ X.at(p))
    gv = g.val
    rhs = (covariant_derivative_at(EX1.metric, X, Y, p) @ gv @ Z.at(p)
           + Y.at(p) @ gv @ covariant_derivative_at(EX1.metric, X, Z, p))
    assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))


@given(_field, _field, _point)
def test_torsion_free(cx, cy, p):
    X, Y = polynomial_field(cx), polynomial_field(cy)
    t = (covariant_derivative_at(EX1.metric, X, Y, p) - covariant_derivative_at(EX1.metric, Y, X, p)
         - lie_bracket_at(X, Y, p))
    assert np.max(np.abs(t)) <= 1e-9


@given(_field, _field, _field, _point)
def test_curvature_symmetries(cx, cy, cz, p):
    X, Y, Z = (polynomial_field(c) for c in (cx, cy, cz))
    m = EX1.metric
    rxy = riemann_at(m, X, Y, Z, p)
    assert np.max(np.abs(rxy + riemann_at(m, Y, X, Z, p))) <= 1e-9 * (1 + np.max(np.abs(rxy)))
    bianchi = rxy + riemann_at(m, Y, Z, X, p) + riemann_at(m, Z, X, Y, p)
    assert np.max(np.abs(bianchi)) <= 1e-9 * (1 + np.max(np.abs(rxy)))
    g = metric_at(m, p)
    w = Z.at(p)
    assert abs(rxy @ g @ w) <= 1e-9 * (1 + np.max(np.abs(rxy)) * np.max(np.abs(w)))


@given(_point)
def test_ricci_symmetric(p):
    S = ricci_tensor_at(EX1.metric, p)
    np.testing.assert_allclose(S, S.T, atol=1e-9)


def test_riemann_against_differences():
    rie = oracle.riemann_fn(oracle.matrix_function(EX1.metric.g))
    for p in points("example1", 5):
        np.testing.assert_allclose(riemann_tensor_at(EX1.metric, p), rie(p), atol=1e-5)
