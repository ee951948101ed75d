"""Pointwise Riemannian geometry on a single global chart.

Curvature convention: R(X, Y)Z = ∇_X∇_Y Z − ∇_Y∇_X Z − ∇_[X,Y] Z.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .expr import Expression, constant, evaluate_jet, parse_expression
from .jets import ArrayJet, inverse, product


class ModelError(ValueError):
    """A model is inconsistent at a point (non-SPD metric, bad shapes, ...)."""


class ChartMismatchError(ModelError):
    pass


@dataclass(frozen=True)
class Chart:
    var_names: tuple[str, ...]

    def __post_init__(self):
        if not self.var_names:
            raise ModelError("chart needs at least one coordinate")
        if len(set(self.var_names)) != len(self.var_names):
            raise ModelError(f"duplicate coordinate names in {self.var_names}")

    @property
    def dim(self) -> int:
        return len(self.var_names)

    def parse(self, text: str) -> Expression:
        return parse_expression(text, self.var_names)

    def zero(self) -> Expression:
        return constant(0.0, self.var_names)


def _point(p, chart: Chart) -> np.ndarray:
    x = np.asarray(p, dtype=float)
    if x.shape != (chart.dim,):
        raise ModelError(f"point has shape {x.shape}, chart dimension is {chart.dim}")
    if not np.all(np.isfinite(x)):
        raise ModelError(f"point {x} is not finite")
    return x


def _cached(cache: dict, key, fn: Callable):
    try:
        return cache[key]
    except KeyError:
        value = fn()
        cache[key] = value
        return value


def jet_of_expressions(exprs, p: np.ndarray) -> ArrayJet:
    """Order-2 jet of an (arbitrarily nested) array of expressions."""
    arr = np.asarray(exprs, dtype=object)
    n = p.shape[0]
    val = np.empty(arr.shape)
    d1 = np.empty(arr.shape + (n,))
    d2 = np.empty(arr.shape + (n, n))
    memo: dict[int, object] = {}
    for idx in np.ndindex(arr.shape):
        e = arr[idx]
        j = memo.get(id(e))
        if j is None:
            j = memo[id(e)] = evaluate_jet(e, p)
        val[idx], d1[idx], d2[idx] = j.value, j.gradient, j.hessian
    return ArrayJet(val, d1, d2)


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple[Expression, ...]

    def __post_init__(self):
        if len(self.components) != self.chart.dim:
            raise ModelError(
                f"vector field has {len(self.components)} components, "
                f"chart dimension is {self.chart.dim}"
            )

    @classmethod
    def from_strings(cls, chart: Chart, comps: Sequence[str]) -> "VectorField":
        return cls(chart, tuple(chart.parse(c) for c in comps))

    def jet(self, p) -> ArrayJet:
        return jet_of_expressions(list(self.components), _point(p, self.chart))

    def at(self, p) -> np.ndarray:
        return self.jet(p).val


@dataclass(frozen=True)
class MetricField:
    """Symmetric matrix of expressions; g[i][j] and g[j][i] are one object."""

    chart: Chart
    g: tuple[tuple[Expression, ...], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        n = self.chart.dim
        if len(self.g) != n or any(len(row) != n for row in self.g):
            raise ModelError(f"metric must be {n}x{n}")
        for i in range(n):
            for j in range(i):
                if self.g[i][j] is not self.g[j][i]:
                    raise ModelError(
                        f"metric entries g[{self.chart.var_names[i]},"
                        f"{self.chart.var_names[j]}] and g[{self.chart.var_names[j]},"
                        f"{self.chart.var_names[i]}] are not mirrored"
                    )

    @classmethod
    def from_upper(cls, chart: Chart, entries: dict[tuple[int, int], Expression]):
        """Build from a sparse {(i, j): expr} map; missing entries are zero."""
        n = chart.dim
        rows = [[None] * n for _ in range(n)]
        zero = chart.zero()
        for i in range(n):
            for j in range(i, n):
                e = entries.get((i, j), entries.get((j, i), zero))
                rows[i][j] = rows[j][i] = e
        return cls(chart, tuple(tuple(r) for r in rows))

    @classmethod
    def from_strings(cls, chart: Chart, rows: Sequence[Sequence[str]]):
        n = chart.dim
        entries = {}
        for i in range(n):
            for j in range(i, n):
                entries[(i, j)] = chart.parse(rows[i][j])
        return cls.from_upper(chart, entries)

    def jet(self, p) -> ArrayJet:
        x = _point(p, self.chart)
        return _cached(self._cache, ("g", x.tobytes()), lambda: _metric_jet(self, x))


def _metric_jet(m: MetricField, x: np.ndarray) -> ArrayJet:
    jet = jet_of_expressions([list(r) for r in m.g], x)
    eig = np.linalg.eigvalsh(jet.val)
    if eig[0] <= 0.0:
        raise ModelError(
            f"metric is not positive definite at {x.tolist()} "
            f"(smallest eigenvalue {eig[0]:.3g})"
        )
    return jet


def metric_at(m: MetricField, p) -> np.ndarray:
    """Metric matrix at ``p``; raises :class:`ModelError` if not SPD."""
    return m.jet(p).val


def inverse_metric_jet(m: MetricField, p) -> ArrayJet:
    x = _point(p, m.chart)
    return _cached(m._cache, ("ginv", x.tobytes()), lambda: inverse(m.jet(x)))


def inverse_metric_at(m: MetricField, p) -> np.ndarray:
    return inverse_metric_jet(m, p).val


def christoffel_jet(m: MetricField, p) -> ArrayJet:
    """Order-1 jet of Γ^k_ij, stored as gamma[k, i, j]."""
    x = _point(p, m.chart)
    return _cached(m._cache, ("gamma", x.tobytes()), lambda: _christoffel(m, x))


def _christoffel(m: MetricField, x: np.ndarray) -> ArrayJet:
    dg = m.jet(x).grad()  # dg.val[i, j, l] = ∂_l g_ij
    # c[l, i, j] = ½(∂_i g_jl + ∂_j g_il − ∂_l g_ij)
    c = (dg.transpose((1, 2, 0)) + dg.transpose((1, 0, 2)) - dg.transpose((2, 0, 1))).scale(0.5)
    ginv = inverse_metric_jet(m, x).truncate(1)
    return product("kl,lij->kij", ginv, c)


def christoffel_at(m: MetricField, p) -> np.ndarray:
    """Christoffel symbols Γ^k_ij as an array indexed [k, i, j]."""
    return christoffel_jet(m, p).val


def riemann_tensor_at(m: MetricField, p) -> np.ndarray:
    """R[l, k, i, j] with (R(X,Y)Z)^l = R[l,k,i,j] X^i Y^j Z^k."""
    x = _point(p, m.chart)

    def build():
        gam = christoffel_jet(m, x)
        G, dG = gam.val, gam.d1  # dG[l, j, k, i] = ∂_i Γ^l_jk
        r = np.einsum("ljki->lkij", dG) - np.einsum("likj->lkij", dG)
        r += np.einsum("lim,mjk->lkij", G, G) - np.einsum("ljm,mik->lkij", G, G)
        return r

    return _cached(m._cache, ("riemann", x.tobytes()), build)


def covariant_derivative(gamma: ArrayJet, X: ArrayJet, W: ArrayJet) -> ArrayJet:
    """Jet of ∇_X W for vector-field jets; order drops by one (max 1)."""
    conn = product("kj,j->k", product("kij,i->kj", gamma, X), W)
    return W.directional(X) + conn


def lie_bracket(X: ArrayJet, Y: ArrayJet) -> ArrayJet:
    return Y.directional(X) - X.directional(Y)


def _same_chart(*objs) -> Chart:
    charts = {o.chart for o in objs}
    if len(charts) != 1:
        raise ChartMismatchError("fields live on different charts")
    return charts.pop()


def covariant_derivative_at(m: MetricField, X: VectorField, Y: VectorField, p) -> np.ndarray:
    """Components of ∇_X Y at ``p``."""
    _same_chart(m, X, Y)
    return covariant_derivative(christoffel_jet(m, p), X.jet(p), Y.jet(p)).val


def lie_bracket_at(X: VectorField, Y: VectorField, p) -> np.ndarray:
    _same_chart(X, Y)
    return lie_bracket(X.jet(p), Y.jet(p)).val


def riemann_at(m: MetricField, X: VectorField, Y: VectorField, Z: VectorField, p) -> np.ndarray:
    """Components of R(X, Y)Z at ``p``."""
    _same_chart(m, X, Y, Z)
    return riemann_apply(riemann_tensor_at(m, p), X.at(p), Y.at(p), Z.at(p))


def riemann_apply(r: np.ndarray, x, y, z) -> np.ndarray:
    return np.einsum("lkij,i,j,k->l", r, x, y, z)


def ricci_tensor_at(m: MetricField, p) -> np.ndarray:
    """S[j, k] = trace of V ↦ R(V, ∂_j)∂_k."""
    return np.einsum("ikij->jk", riemann_tensor_at(m, p))


def ricci_at(m: MetricField, X: VectorField, Y: VectorField, p) -> float:
    _same_chart(m, X, Y)
    return float(X.at(p) @ ricci_tensor_at(m, p) @ Y.at(p))


def inner(g: np.ndarray, u, v) -> float:
    return float(np.asarray(u) @ g @ np.asarray(v))
