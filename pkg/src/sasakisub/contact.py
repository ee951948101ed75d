"""Almost contact metric structures and the Sasakian conditions."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .expr import Expression
from .geometry import (
    Chart,
    MetricField,
    ModelError,
    VectorField,
    _cached,
    _point,
    christoffel_at,
    jet_of_expressions,
    ricci_tensor_at,
    riemann_tensor_at,
)
from .jets import ArrayJet
from .report import CheckReport

TOL_ALGEBRAIC = 1e-9
TOL_DERIVATIVE = 1e-8
TOL_CURVATURE = 1e-7


@dataclass(frozen=True)
class AlmostContactStructure:
    """(φ, ξ, η) on a chart.

    ``phi[i][j]`` is component i of φ(∂_j), i.e. φ acts on column vectors.
    """

    chart: Chart
    phi: tuple[tuple[Expression, ...], ...]
    xi: VectorField
    eta: tuple[Expression, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        n = self.chart.dim
        if len(self.phi) != n or any(len(r) != n for r in self.phi):
            raise ModelError(f"phi must be {n}x{n}")
        if len(self.eta) != n:
            raise ModelError(f"eta must have {n} components")
        if self.xi.chart != self.chart:
            raise ModelError("xi lives on a different chart")

    def jets(self, p) -> tuple[ArrayJet, ArrayJet, ArrayJet]:
        """Order-2 jets of (φ, ξ, η) at ``p``."""
        x = _point(p, self.chart)
        return _cached(
            self._cache,
            x.tobytes(),
            lambda: (
                jet_of_expressions([list(r) for r in self.phi], x),
                self.xi.jet(x),
                jet_of_expressions(list(self.eta), x),
            ),
        )

    def at(self, p) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        phi, xi, eta = self.jets(p)
        return phi.val, xi.val, eta.val


@dataclass(frozen=True)
class StructuredManifold:
    chart: Chart
    metric: MetricField
    structure: AlmostContactStructure | None = None

    def __post_init__(self):
        if self.metric.chart != self.chart:
            raise ModelError("metric lives on a different chart")
        if self.structure is not None and self.structure.chart != self.chart:
            raise ModelError("structure lives on a different chart")

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def contact_n(self) -> int:
        """n for a (2n+1)-dimensional manifold."""
        return (self.dim - 1) // 2

    def require_structure(self) -> AlmostContactStructure:
        if self.structure is None:
            raise ModelError("manifold carries no almost contact structure")
        return self.structure


def _max(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def check_almost_contact(sm: StructuredManifold, p, tol: float = TOL_ALGEBRAIC) -> CheckReport:
    """Algebraic identities of an almost contact metric structure at ``p``.

    Residuals are maxima over the coordinate basis; ``eta_metric`` also
    includes X = ξ, which is where a wrongly scaled η⊗η term shows up.
    """
    phi, xi, eta = sm.require_structure().at(p)
    g = sm.metric.jet(p).val
    n = sm.dim
    rep = CheckReport("almost_contact")
    rep.add("phi_squared", _max(phi @ phi + np.eye(n) - np.outer(xi, eta)), tol)
    rep.add("phi_xi", _max(phi @ xi), tol)
    rep.add("eta_phi", _max(eta @ phi), tol)
    rep.add("eta_xi", abs(eta @ xi - 1.0), tol)
    rep.add("metric_phi", _max(phi.T @ g @ phi - g + np.outer(eta, eta)), tol)
    basis = np.vstack([np.eye(n), xi])
    rep.add("eta_metric", _max(basis @ eta - basis @ g @ xi), tol)
    sv = np.linalg.svd(phi, compute_uv=False)
    rank = int(np.sum(sv > 1e-10 * max(sv[0], 1.0)))
    rep.add("phi_rank", abs(rank - (n - 1)), 0.5, note=f"rank {rank}")
    return rep


def fundamental_two_form(sm: StructuredManifold, p) -> np.ndarray:
    """Φ[i, j] = g(∂_i, φ∂_j)."""
    phi, _, _ = sm.require_structure().at(p)
    return sm.metric.jet(p).val @ phi


def d_eta(sm: StructuredManifold, p) -> np.ndarray:
    """dη[i, j] = ½(∂_i η_j − ∂_j η_i) on coordinate fields."""
    _, _, eta = sm.require_structure().jets(p)
    d = eta.d1  # d[j, i] = ∂_i η_j
    return 0.5 * (d.T - d)


def check_contact_form(sm: StructuredManifold, p, tol: float = TOL_ALGEBRAIC) -> CheckReport:
    rep = CheckReport("contact_form")
    de = d_eta(sm, p)
    rep.add("d_eta_equals_Phi", _max(de - fundamental_two_form(sm, p)), tol)
    # the other ordering g(φX, Y) is −Φ; recorded so the sign choice stays visible
    phi, _, _ = sm.require_structure().at(p)
    rep.add("d_eta_vs_g_phiX_Y", _max(de - phi.T @ sm.metric.jet(p).val), 0.0, kind="info")
    return rep


def nabla_phi_at(sm: StructuredManifold, p) -> np.ndarray:
    """(∇_a φ)∂_b as an array [k, a, b] (component k)."""
    phi_j, _, _ = sm.require_structure().jets(p)
    phi = phi_j.val
    dphi = phi_j.d1  # dphi[k, b, a] = ∂_a φ_kb
    G = christoffel_at(sm.metric, p)
    return (
        np.einsum("kba->kab", dphi)
        + np.einsum("kaj,jb->kab", G, phi)
        - np.einsum("kj,jab->kab", phi, G)
    )


def nabla_xi_at(sm: StructuredManifold, p) -> np.ndarray:
    """∇_a ξ as an array [k, a]."""
    _, xi_j, _ = sm.require_structure().jets(p)
    G = christoffel_at(sm.metric, p)
    return xi_j.d1 + np.einsum("kaj,j->ka", G, xi_j.val)


def check_sasakian(sm: StructuredManifold, p, tol: float = TOL_DERIVATIVE) -> CheckReport:
    """(∇_Xφ)Y = g(X,Y)ξ − η(Y)X and ∇_Xξ = −φX over coordinate pairs."""
    phi, xi, eta = sm.require_structure().at(p)
    g = sm.metric.jet(p).val
    n = sm.dim
    rhs = np.einsum("ab,k->kab", g, xi) - np.einsum("b,ka->kab", eta, np.eye(n))
    rep = CheckReport("sasakian")
    rep.add("nabla_phi", _max(nabla_phi_at(sm, p) - rhs), tol)
    rep.add("nabla_xi", _max(nabla_xi_at(sm, p) + phi), tol)
    return rep


def check_sasakian_curvature(sm: StructuredManifold, p, tol: float = TOL_CURVATURE) -> CheckReport:
    """R(ξ,X)Y = g(X,Y)ξ − η(Y)X and S(X,ξ) = 2n η(X) over the coordinate basis."""
    _, xi, eta = sm.require_structure().at(p)
    g = sm.metric.jet(p).val
    n = sm.dim
    R = riemann_tensor_at(sm.metric, p)
    lhs = np.einsum("lkij,i->ljk", R, xi)  # [l, X=j, Y=k]
    rhs = np.einsum("jk,l->ljk", g, xi) - np.einsum("k,lj->ljk", eta, np.eye(n))
    S = ricci_tensor_at(sm.metric, p)
    rep = CheckReport("sasakian_curvature")
    rep.add("R_xi_X_Y", _max(lhs - rhs), tol)
    rep.add("ricci_xi", _max(S @ xi - 2 * sm.contact_n * eta), tol)
    rep.add("ricci_xi_xi", float(xi @ S @ xi), 0.0, kind="info")
    return rep
