"""O'Neill tensors T, A of a submersion and the identity suites built on them.

Point vectors are extended to fields with constant chart components, then
projected: a vertical argument v becomes the field P_V v, a horizontal one
P_H v.  T, A, ∇φ and every bilinear criterion below are tensorial, so the
choice of extension does not affect the value at p.  The exceptions are the
raw ∇_X Y terms in the connection decompositions and the ∇φ relations; those
are only ever applied to these projected fields, which are genuine smooth
fields.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass, field

import numpy as np

from .geometry import ModelError, christoffel_jet, covariant_derivative, lie_bracket, riemann_tensor_at
from .jets import ArrayJet, product
from .report import CheckReport
from .submersion import (
    SubmersionSpec,
    classify_anti_invariance,
    jacobian_jet,
    projector_jets,
    split_frame_at,
)

TOL_FIRST = 1e-9
TOL_NABLA = 1e-8
TOL_CURVATURE = 1e-7
WITNESS_THRESHOLD = 0.1
RANDOM_DIRECTIONS = 10


class PreconditionError(ModelError):
    """A suite was asked to run on a map outside its hypotheses."""


def _max(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


@dataclass
class PointGeometry:
    """Everything the suites need at one sample point, computed once."""

    F: SubmersionSpec
    x: np.ndarray
    g: np.ndarray
    gamma: ArrayJet
    pv: ArrayJet
    ph: ArrayJet
    J: ArrayJet
    T: ArrayJet  # T[k, i, j] = (T_{∂i} ∂j)^k, order-1 jet
    A: ArrayJet
    vertical: list[np.ndarray]
    horizontal: list[np.ndarray]
    structure: tuple | None = None  # (phi, xi, eta) order-2 jets
    _extra: dict = field(default_factory=dict, repr=False)

    @property
    def m(self) -> int:
        return self.x.shape[0]

    def const(self, v) -> ArrayJet:
        return ArrayJet.constant(v, self.m)

    def vfield(self, v) -> ArrayJet:
        return self.pv @ self.const(v)

    def hfield(self, v) -> ArrayJet:
        return self.ph @ self.const(v)

    def nabla(self, X: ArrayJet, W: ArrayJet) -> ArrayJet:
        return covariant_derivative(self.gamma, X, W)

    def t(self, e, f) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.T.val, e, f)

    def a(self, e, f) -> np.ndarray:
        return np.einsum("kij,i,j->k", self.A.val, e, f)

    def inner(self, u, v) -> float:
        return float(u @ self.g @ v)

    def norm(self, u) -> float:
        return float(np.sqrt(max(u @ self.g @ u, 0.0)))

    def V(self, u) -> np.ndarray:
        return self.pv.val @ u

    def H(self, u) -> np.ndarray:
        return self.ph.val @ u

    @property
    def phi(self) -> np.ndarray:
        return self._need()[0].val

    @property
    def xi(self) -> np.ndarray:
        return self._need()[1].val

    @property
    def eta(self) -> np.ndarray:
        return self._need()[2].val

    def _need(self):
        if self.structure is None:
            raise PreconditionError("source carries no almost contact structure")
        return self.structure

    def B(self, u) -> np.ndarray:
        return self.V(self.phi @ u)

    def C(self, u) -> np.ndarray:
        return self.H(self.phi @ u)

    def push(self, u) -> np.ndarray:
        return self.J.val @ u

    def random_directions(self, basis: list[np.ndarray], count: int = RANDOM_DIRECTIONS) -> list[np.ndarray]:
        """Frame vectors plus ``count`` random unit combinations, seeded by the point."""
        if not basis:
            return []
        rng = np.random.default_rng(zlib.crc32(self.x.tobytes()) + len(basis))
        out = list(basis)
        mat = np.array(basis)
        for _ in range(count):
            c = rng.standard_normal(len(basis))
            out.append(c @ mat / np.linalg.norm(c))
        return out


def _connection_table(gamma: ArrayJet, P: ArrayJet, Q: ArrayJet) -> ArrayJet:
    """N[k, i, j] = (∇_{P∂i} (Q∂j))^k as an order-1 jet."""
    dq = Q.grad()  # dq[k, j, l] = ∂_l Q_kj
    first = product("kjl,li->kij", dq, P)
    gp = product("klm,li->kim", gamma, P)
    return first + product("kim,mj->kij", gp, Q)


def point_geometry(F: SubmersionSpec, p) -> PointGeometry:
    x = F.check_guard(p)

    def build():
        pv, ph = projector_jets(F, x)
        gamma = christoffel_jet(F.source.metric, x)
        nvv = _connection_table(gamma, pv, pv)
        nvh = _connection_table(gamma, pv, ph)
        nhh = _connection_table(gamma, ph, ph)
        nhv = _connection_table(gamma, ph, pv)
        T = product("ka,aij->kij", ph, nvv) + product("ka,aij->kij", pv, nvh)
        A = product("ka,aij->kij", pv, nhh) + product("ka,aij->kij", ph, nhv)
        frame = split_frame_at(F, x)
        st = F.source.structure
        return PointGeometry(
            F,
            x,
            F.source.metric.jet(x).val,
            gamma,
            pv,
            ph,
            jacobian_jet(F, x),
            T,
            A,
            list(frame.vertical),
            list(frame.horizontal),
            None if st is None else st.jets(x),
        )

    key = ("pg", x.tobytes())
    if key not in F._cache:
        F._cache[key] = build()
    return F._cache[key]


def tensor_T_at(F: SubmersionSpec, E1, E2, p) -> np.ndarray:
    """T_{E1} E2 = H∇_{V E1} V E2 + V∇_{V E1} H E2 at p."""
    return point_geometry(F, p).t(np.asarray(E1, float), np.asarray(E2, float))


def tensor_A_at(F: SubmersionSpec, E1, E2, p) -> np.ndarray:
    """A_{E1} E2 = V∇_{H E1} H E2 + H∇_{H E1} V E2 at p."""
    return point_geometry(F, p).a(np.asarray(E1, float), np.asarray(E2, float))


def fundamental_equations_check(F: SubmersionSpec, p, scale: float = 1.0) -> CheckReport:
    """Connection decompositions through T and A, their (anti)symmetries, skew-adjointness and T_E = T_{VE}."""
    G = point_geometry(F, p)
    rep = CheckReport("fundamental_equations")
    vs, hs = G.vertical, G.horizontal
    r1 = r2 = r3 = r4 = 0.0
    for v in vs:
        V = G.vfield(v)
        for w in vs:
            d = G.nabla(V, G.vfield(w)).val
            r1 = max(r1, _max(d - G.t(v, w) - G.V(d)))
        for h in hs:
            d = G.nabla(V, G.hfield(h)).val
            r2 = max(r2, _max(d - G.H(d) - G.t(v, h)))
    for h in hs:
        X = G.hfield(h)
        for v in vs:
            d = G.nabla(X, G.vfield(v)).val
            r3 = max(r3, _max(d - G.a(h, v) - G.V(d)))
        for k in hs:
            d = G.nabla(X, G.hfield(k)).val
            r4 = max(r4, _max(d - G.H(d) - G.a(h, k)))
    rep.add("nabla_VW_decomposition", r1, TOL_NABLA * scale)
    rep.add("nabla_VX_decomposition", r2, TOL_NABLA * scale)
    rep.add("nabla_XV_decomposition", r3, TOL_NABLA * scale)
    rep.add("nabla_XY_decomposition", r4, TOL_NABLA * scale)

    rep.add("T_symmetric_vertical", max((_max(G.t(u, w) - G.t(w, u)) for u in vs for w in vs), default=0.0),
            TOL_FIRST * scale)
    rep.add("A_antisymmetric_horizontal", max((_max(G.a(x, y) + G.a(y, x)) for x in hs for y in hs), default=0.0),
            TOL_FIRST * scale)
    half = 0.0
    for x in hs:
        for y in hs:
            br = lie_bracket(G.hfield(x), G.hfield(y)).val
            half = max(half, _max(G.a(x, y) - 0.5 * G.V(br)))
    rep.add("A_half_bracket", half, TOL_NABLA * scale)

    basis = list(np.eye(G.m))
    skew_t = skew_a = proj = 0.0
    for d in G.random_directions(basis, 3):
        for e in basis:
            for gg in basis:
                skew_t = max(skew_t, abs(G.inner(G.t(d, e), gg) + G.inner(G.t(d, gg), e)))
                skew_a = max(skew_a, abs(G.inner(G.a(d, e), gg) + G.inner(G.a(d, gg), e)))
            proj = max(proj, _max(G.t(d, e) - G.t(G.V(d), e)), _max(G.a(d, e) - G.a(G.H(d), e)))
    rep.add("T_skew_adjoint", skew_t, TOL_FIRST * scale)
    rep.add("A_skew_adjoint", skew_a, TOL_FIRST * scale)
    rep.add("T_A_first_argument_projection", proj, 1e-12 * scale)
    return rep


@dataclass
class FiberGeometryReport:
    mean_curvature: np.ndarray
    totally_geodesic: bool
    totally_umbilical: bool
    minimal: bool
    max_T_norm: float
    umbilicity_defect: float
    checks: CheckReport


def fiber_geometry_at(F: SubmersionSpec, p, tol: float = TOL_FIRST) -> FiberGeometryReport:
    G = point_geometry(F, p)
    vs = G.vertical
    k = len(vs)
    Hm = sum((G.t(u, u) for u in vs), np.zeros(G.m)) / k if k else np.zeros(G.m)
    max_t = 0.0
    umb = 0.0
    for i, u in enumerate(vs):
        for j, w in enumerate(vs):
            tuw = G.t(u, w)
            max_t = max(max_t, G.norm(tuw))
            umb = max(umb, G.norm(tuw - (1.0 if i == j else 0.0) * Hm))
    geo, umbilical, minimal = max_t <= tol, umb <= tol, G.norm(Hm) <= tol
    rep = CheckReport("fiber_geometry")
    rep.add("mean_curvature_norm", G.norm(Hm), 0.0, kind="info")
    rep.add("max_T_norm", max_t, 0.0, kind="info")
    rep.add("umbilicity_defect", umb, 0.0, kind="info")
    # totally geodesic must imply umbilical and minimal
    rep.add("geodesic_implies_umbilical_minimal", 0.0 if (not geo or (umbilical and minimal)) else 1.0, 0.5)
    return FiberGeometryReport(Hm, geo, umbilical, minimal, max_t, umb, rep)


def _require_xi(F: SubmersionSpec, p, position: str):
    c = classify_anti_invariance(F, p)
    if not c.is_anti_invariant:
        raise PreconditionError(f"map is not anti-invariant at {np.asarray(p).tolist()}")
    if c.xi_position != position:
        raise PreconditionError(f"xi is {c.xi_position}, suite needs {position}")
    return c


def _a_xi_field(G: PointGeometry, x) -> ArrayJet:
    """Order-1 jet of the field A_X ξ with X = P_H x."""
    X = G.hfield(x)
    return product("kj,j->k", product("kij,i->kj", G.A, X), G.structure[1])


def _common_lemmas(G: PointGeometry, rep: CheckReport, scale: float):
    """B/C identities shared by both ξ positions; returns max |g(A_X ξ, φU)|."""
    vs, hs = G.vertical, G.horizontal
    phi = G.phi
    bcx = quad = 0.0
    for x in hs:
        c = G.C(x)
        bcx = max(bcx, _max(G.B(c)))
        quad = max(quad, _max(phi @ (phi @ x) - G.C(c) - phi @ G.B(x)))
    rep.add("BCX_zero", bcx, TOL_FIRST * scale)
    rep.add("phi2_equals_C2_plus_phiB", quad, TOL_FIRST * scale)
    a2 = 0.0
    for x in hs:
        axi = G.a(x, G.xi)
        for u in vs:
            a2 = max(a2, abs(G.inner(axi, phi @ u)))
    return a2


def lemma_suite_vertical_xi(F: SubmersionSpec, p, scale: float = 1.0) -> CheckReport:
    """Identities for anti-invariant submersions with vertical ξ."""
    cls = _require_xi(F, p, "vertical")
    G = point_geometry(F, p)
    rep = CheckReport("lemmas_vertical_xi")
    vs, hs = G.vertical, G.horizontal
    phi, xi, eta = G.phi, G.xi, G.eta

    rep.add("T_U_xi_equals_minus_phi_U", max((_max(G.t(u, xi) + phi @ u) for u in vs), default=0.0), TOL_FIRST * scale)
    rep.add("CX_plus_A_X_xi", max((_max(G.C(x) + G.a(x, xi)) for x in hs), default=0.0), TOL_FIRST * scale)
    a2 = _common_lemmas(G, rep, scale)
    rep.add("A_X_xi_orthogonal_phi_U", a2, TOL_FIRST * scale)

    d_axi = 0.0
    for x in hs:
        axi = _a_xi_field(G, x)
        axi_v = axi.val
        for y in hs:
            d = G.nabla(G.const(y), axi).val
            for u in vs:
                lhs = G.inner(d, phi @ u)
                rhs = -G.inner(axi_v, phi @ G.a(y, u)) + (eta @ u) * G.inner(axi_v, y)
                d_axi = max(d_axi, abs(lhs - rhs))
    rep.add("derivative_A_X_xi_phi_U", d_axi, TOL_NABLA * scale)

    M = np.array([[G.inner(xa, G.a(xb, xi)) for xb in hs] for xa in hs])
    rep.add("A_xi_matrix_antisymmetric", _max(M + M.T), TOL_FIRST * scale)

    axi_phi = 0.0
    for x in hs:
        for u in vs:
            lhs = G.inner(G.a(x, xi), phi @ u)
            rhs = -G.inner(x, u) + (eta @ x) * (eta @ u) - G.inner(phi @ G.B(x), u)
            axi_phi = max(axi_phi, abs(lhs - rhs))
    rep.add("A_X_xi_phi_U_expansion", axi_phi, TOL_FIRST * scale)

    nf = 0.0
    phij = G.structure[0]
    for x in hs:
        X = G.const(x)
        for y in hs:
            Y = G.hfield(y)
            lhs = G.nabla(X, Y).val
            rhs = -phi @ G.nabla(X, phij @ Y).val + G.inner(y, phi @ x) * xi
            nf = max(nf, _max(lhs - rhs))
    rep.add("nabla_XY_phi_relation", nf, TOL_NABLA * scale)

    tvw = 0.0
    for v in vs:
        for w in vs:
            lhs = G.t(v, phi @ w)
            rhs = phi @ G.t(v, w) - (eta @ w) * v + G.inner(v, w) * xi
            tvw = max(tvw, _max(lhs - rhs))
    rep.add("T_V_phi_W", tvw, TOL_FIRST * scale)

    rep.add("T_xi_xi", _max(G.t(xi, xi)), TOL_FIRST * scale)
    rep.add("T_U_xi_nonzero", max((G.norm(G.t(u, xi)) for u in vs), default=0.0), WITNESS_THRESHOLD, kind="witness",
            note="fibers not totally umbilical")
    _dimension_checks(G, cls, rep)
    return rep


def lemma_suite_horizontal_xi(F: SubmersionSpec, p, scale: float = 1.0) -> CheckReport:
    """Identities for anti-invariant submersions with horizontal ξ."""
    cls = _require_xi(F, p, "horizontal")
    G = point_geometry(F, p)
    rep = CheckReport("lemmas_horizontal_xi")
    vs, hs = G.vertical, G.horizontal
    phi, xi, eta = G.phi, G.xi, G.eta

    rep.add("BX_plus_A_X_xi", max((_max(G.B(x) + G.a(x, xi)) for x in hs), default=0.0), TOL_FIRST * scale)
    rep.add("T_U_xi_zero", max((_max(G.t(u, xi)) for u in vs), default=0.0), TOL_FIRST * scale)
    a3 = _common_lemmas(G, rep, scale)
    rep.add("A_X_xi_orthogonal_phi_U", a3, TOL_FIRST * scale)

    d_axi = 0.0
    for x in hs:
        axi = _a_xi_field(G, x)
        for y in hs:
            d = G.nabla(G.const(y), axi).val
            for u in vs:
                d_axi = max(d_axi, abs(G.inner(d, phi @ u) + G.inner(axi.val, phi @ G.a(y, u))))
    rep.add("derivative_A_X_xi_phi_U", d_axi, TOL_NABLA * scale)

    d_cy = 0.0
    phij = G.structure[0]
    for y in hs:
        cy = G.ph @ (phij @ G.hfield(y))
        for x in hs:
            d = G.nabla(G.const(x), cy).val
            for u in vs:
                d_cy = max(d_cy, abs(G.inner(d, phi @ u) + G.inner(cy.val, phi @ G.a(x, u))))
    rep.add("derivative_CY_phi_U", d_cy, TOL_NABLA * scale)

    nf = 0.0
    for x in hs:
        X = G.const(x)
        for y in hs:
            Y = G.hfield(y)
            nxy = G.nabla(X, Y).val
            rhs = -phi @ G.nabla(X, phij @ Y).val + (eta @ nxy) * xi - (eta @ y) * (phi @ x)
            nf = max(nf, _max(nxy - rhs))
    rep.add("nabla_XY_phi_relation", nf, TOL_NABLA * scale)

    tvw = 0.0
    for v in vs:
        for w in vs:
            tvw = max(tvw, _max(G.t(v, phi @ w) - phi @ G.t(v, w)))
    rep.add("T_V_phi_W", tvw, TOL_FIRST * scale)
    _dimension_checks(G, cls, rep)
    return rep


def _dimension_checks(G: PointGeometry, cls, rep: CheckReport):
    rep.add("dim_phi_ker_plus_mu", abs(cls.residuals["phi_ker_dim"] + cls.mu_dim - cls.n), 0.5)
    if cls.dimension_relation_holds is not None:
        rep.add(f"dimension_relation {cls.dimension_relation}", 0.0 if cls.dimension_relation_holds else 1.0, 0.5)
    # TN = F_*(φ ker) ⊕ F_*(μ): the two pushed groups are g_N-orthogonal and span
    phis = [G.phi @ u for u in G.vertical]
    pk = np.array(phis).reshape(len(phis), G.m)
    mu = _mu_basis(G, pk)
    gN = G.F.target.metric.jet(G.F.image(G.x)).val
    a = np.array([G.push(v) for v in phis]).reshape(len(phis), G.F.n)
    b = np.array([G.push(v) for v in mu]).reshape(len(mu), G.F.n)
    cross = _max(a @ gN @ b.T) if a.size and b.size else 0.0
    rank = np.linalg.matrix_rank(np.vstack([a, b]), 1e-9) if len(a) + len(b) else 0
    rep.add("target_split_orthogonal", cross, TOL_FIRST)
    rep.add("target_split_spans", abs(G.F.n - rank), 0.5)


def _mu_basis(G: PointGeometry, phi_ker: np.ndarray) -> list[np.ndarray]:
    """g-orthonormal basis of the complement of φ(ker) inside the horizontal space."""
    from .submersion import gram_schmidt

    seeds = list(phi_ker) + list(G.horizontal)
    ortho = gram_schmidt(seeds, G.g, 1e-9)
    k = np.linalg.matrix_rank(phi_ker, 1e-9) if phi_ker.size else 0
    return ortho[k:]


def mu_basis_at(F: SubmersionSpec, p) -> list[np.ndarray]:
    G = point_geometry(F, p)
    pk = np.array([G.phi @ u for u in G.vertical]).reshape(len(G.vertical), G.m)
    return _mu_basis(G, pk)


def _consistency(rep: CheckReport, name: str, values: dict[str, float], tol: float):
    """Record each side of an equivalence and whether their verdicts agree."""
    verdicts = {k: v <= tol for k, v in values.items()}
    for k, v in values.items():
        rep.add(f"{name}[{k}]", v, tol, kind="info")
    agree = len(set(verdicts.values())) == 1
    rep.add(f"{name}_consistent", 0.0 if agree else 1.0, 0.5,
            note=", ".join(f"{k}={'holds' if h else 'fails'}" for k, h in verdicts.items()))


def distribution_criteria(F: SubmersionSpec, p, scale: float = 1.0) -> CheckReport:
    """Integrability / foliation criteria and the impossibility witnesses."""
    x0 = F.check_guard(p)
    cls = classify_anti_invariance(F, x0)
    if not cls.is_anti_invariant:
        raise PreconditionError(f"map is not anti-invariant at {x0.tolist()}")
    G = point_geometry(F, x0)
    from .harmonic import sff_table_at

    S = sff_table_at(F, x0)
    gN = F.target.metric.jet(F.image(x0)).val
    rep = CheckReport("distribution_criteria")
    tol = TOL_NABLA * scale
    phi, xi, eta = G.phi, G.xi, G.eta
    vs = G.vertical
    hs = G.random_directions(G.horizontal)
    vdirs = G.random_directions(vs)

    X = np.array(hs).reshape(len(hs), G.m)
    Vd = np.array(vdirs).reshape(len(vdirs), G.m)
    A, g = G.A.val, G.g
    PV = Vd @ phi.T @ G.J.val.T  # F_*(φv)
    phiV = Vd @ phi.T
    Axi = np.einsum("kij,xi,j->xk", A, X, xi)
    Axv = np.einsum("kij,xi,vj->xvk", A, X, Vd)
    phiAxv = Axv @ phi.T

    def gpair(u, w):
        # g(u[..., k], w[..., k]) contracted over the last axis
        return np.einsum("...k,kl,...l->...", u, g, w)

    def gn_pv(vals):
        # gN(vals[p, q, a], F_*(φv)) -> [p, q, v]
        return np.einsum("pqa,ab,vb->pqv", vals, gN, PV)

    brackets = [G.V(lie_bracket(G.hfield(x), G.hfield(y)).val) for x in hs for y in hs]
    integ = max((G.norm(b) for b in brackets), default=0.0)

    if cls.xi_position == "vertical":
        BX = X @ phi.T @ G.pv.val.T
        c1 = np.einsum("xk,kl,yvl->xyv", Axi, g, phiAxv)
        cross = c1 - c1.transpose(1, 0, 2)
        q = gn_pv(np.einsum("aij,pi,qj->pqa", S, X, BX))  # q[p, q] pairs S(p, Bq)
        ii = _max(q.transpose(1, 0, 2) - q - cross)
        ab = np.einsum("kij,xi,yj->xyk", A, X, BX)
        iii = _max(np.einsum("xyk,kl,vl->xyv", ab - ab.transpose(1, 0, 2), g, phiV) - cross)
        tg_i = _max(np.einsum("kij,xi,yj,kl,vl->xyv", A, X, X, g, Vd))
        tg_ii = _max(np.einsum("xyk,kl,vl->xyv", ab, g, phiV) + c1.transpose(1, 0, 2))
        ayx = gpair(Axi[:, None, :], X[None, :, :])  # g(A_y ξ, x) at [y, x]
        tg_iii = _max(
            gn_pv(np.einsum("aij,xi,yj->xya", S, X, X @ phi.T))
            - c1.transpose(1, 0, 2)
            + ayx.T[:, :, None] * (Vd @ eta)[None, None, :]
        )
        _consistency(rep, "horizontal_integrable", {"i": integ, "ii": ii, "iii": iii}, tol)
        _consistency(rep, "horizontal_totally_geodesic", {"i": tg_i, "ii": tg_ii, "iii": tg_iii}, tol)
        if cls.phi_ker_equals_complement:
            sphi = np.einsum("aij,xi,yj->xya", S, X, X @ phi.T)  # S(x, φy)
            aphi = np.einsum("kij,xi,yj->xyk", A, X, X @ phi.T)
            c_ii = _max(sphi.transpose(1, 0, 2) - sphi)
            c_iii = _max(aphi - aphi.transpose(1, 0, 2))
            _consistency(rep, "corollary_integrable", {"i": integ, "ii": c_ii, "iii": c_iii}, tol)
            _consistency(rep, "corollary_totally_geodesic",
                         {"i": tg_i, "ii": _max(aphi), "iii": _max(sphi)}, tol)
    else:
        CX = X @ phi.T @ G.ph.val.T
        etaX = X @ eta
        t1 = np.einsum("xk,kl,yvl->xyv", CX, g, phiAxv)
        t2 = np.einsum("xk,kl,vl->xv", Axi, g, Vd)
        tail = (t1 - t1.transpose(1, 0, 2)
                + t2[:, None, :] * etaX[None, :, None] - t2[None, :, :] * etaX[:, None, None])
        q = gn_pv(np.einsum("aij,pi,qj->pqa", S, X, Axi))  # q[p, q] pairs S(p, A_q ξ)
        ii = _max(q.transpose(1, 0, 2) - q - tail)
        aa = np.einsum("kij,xi,yj->xyk", A, X, Axi)  # A_x A_y ξ
        iii = _max(np.einsum("xyk,kl,vl->xyv", aa - aa.transpose(1, 0, 2), g, phiV) - tail)
        _consistency(rep, "horizontal_integrable", {"i": integ, "ii": ii, "iii": iii}, tol)
        rep.add("horizontal_not_integrable", integ, WITNESS_THRESHOLD, kind="witness",
                note="max |V[X,Y]| over horizontal pairs")
        ngeo = max((G.norm(G.V(-(phi @ x))) for x in hs), default=0.0)
        rep.add("horizontal_not_totally_geodesic", ngeo, WITNESS_THRESHOLD, kind="witness",
                note="max |V(∇_X ξ)| over horizontal X")
        R = riemann_tensor_at(F.source.metric, x0)
        curv = 0.0
        for x in G.horizontal:
            for y in G.horizontal:
                rxy = np.einsum("lkij,i,j,k->l", R, x, y, xi)
                aa1 = G.a(x, G.a(y, xi)) - G.a(y, G.a(x, xi))
                curv = max(curv, _max(rxy - aa1))
        rep.add("curvature_A_defect", curv, 0.0, kind="info",
                note="R(X,Y)ξ − (A_X A_Y ξ − A_Y A_X ξ); nonzero unless the horizontal space is integrable")

        mu = _mu_basis(G, np.array([phi @ u for u in vs]).reshape(len(vs), G.m))
        tvw = np.einsum("kij,vi,wj->vwk", G.T.val, Vd, Vd)
        vf_i = float(np.sqrt(max(np.max(gpair(tvw, tvw), initial=0.0), 0.0)))
        svx = np.einsum("aij,vi,xj->vxa", S, Vd, X @ phi.T)  # S(v, φx)
        vf_ii = _max(np.einsum("vxa,ab,wb->vxw", svx, gN, PV))
        BX = X @ phi.T @ G.pv.val.T
        z = (np.einsum("kij,vi,xj->vxk", G.T.val, Vd, BX)
             + np.einsum("kij,xi,vj->vxk", A, CX, Vd))
        if len(mu):
            M = np.array(mu)
            z = z - np.einsum("vxl,lm,em,ek->vxk", z, g, M, M)
        vf_iii = float(np.sqrt(max(np.max(gpair(z, z), initial=0.0), 0.0)))
        _consistency(rep, "vertical_totally_geodesic", {"i": vf_i, "ii": vf_ii, "iii": vf_iii}, tol)
        if cls.mu_dim == 1:
            c_ii = _max(svx)
            c_iii = _max(np.einsum("kij,vi,wj->vwk", G.T.val, Vd, Vd @ phi.T))
            _consistency(rep, "corollary_vertical_totally_geodesic", {"i": vf_i, "ii": c_ii, "iii": c_iii}, tol)
    return rep
