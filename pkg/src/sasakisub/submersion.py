"""Smooth maps between charted manifolds and their vertical/horizontal geometry."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contact import StructuredManifold
from .expr import Expression, derivative, evaluate
from .geometry import (
    ModelError,
    _cached,
    _point,
    christoffel_at,
    christoffel_jet,
    inverse_metric_jet,
    jet_of_expressions,
)
from .jets import ArrayJet, inverse
from .report import CheckReport

TOL_FRAME = 1e-10
TOL_CLASSIFY = 1e-9
TOL_AXIOMS = 1e-9


class GuardError(ModelError):
    """The point lies in a region excluded by the model's domain guards."""


class RankError(ModelError):
    """The differential is rank deficient at the point."""


@dataclass(frozen=True)
class Guard:
    """Admissible iff ``expression`` > 0; evaluated at F(p) when ``on_target``."""

    expression: Expression
    on_target: bool = False
    label: str = ""


@dataclass(frozen=True)
class SubmersionSpec:
    source: StructuredManifold
    target: StructuredManifold
    components: tuple[Expression, ...]
    guards: tuple[Guard, ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        m, n = self.source.dim, self.target.dim
        if len(self.components) != n:
            raise ModelError(f"map has {len(self.components)} components, target dimension is {n}")
        if n > m:
            raise ModelError(f"target dimension {n} exceeds source dimension {m}")
        for c in self.components:
            if c.variables != self.source.chart.var_names:
                raise ModelError("map components must be expressions over the source chart")
        for gd in self.guards:
            chart = self.target.chart if gd.on_target else self.source.chart
            if gd.expression.variables != chart.var_names:
                raise ModelError(f"guard {gd.label!r} is not over the expected chart")

    @property
    def m(self) -> int:
        return self.source.dim

    @property
    def n(self) -> int:
        return self.target.dim

    def jacobian_expressions(self) -> list[list[Expression]]:
        return _cached(
            self._cache,
            "jac",
            lambda: [[derivative(c, k) for k in range(self.m)] for c in self.components],
        )

    def image(self, p) -> np.ndarray:
        x = _point(p, self.source.chart)
        return np.array([evaluate(c, x) for c in self.components])

    def admissible(self, p) -> bool:
        x = _point(p, self.source.chart)
        y = None
        for gd in self.guards:
            if gd.on_target:
                y = self.image(x) if y is None else y
                val = evaluate(gd.expression, y)
            else:
                val = evaluate(gd.expression, x)
            if not val > 0.0:
                return False
        return True

    def check_guard(self, p) -> np.ndarray:
        x = _point(p, self.source.chart)
        if not self.admissible(x):
            raise GuardError(f"point {x.tolist()} is excluded by the domain guards")
        return x


@dataclass(frozen=True)
class SplitFrame:
    point: np.ndarray
    vertical: list[np.ndarray]
    horizontal: list[np.ndarray]
    metric: np.ndarray

    @property
    def vertical_matrix(self) -> np.ndarray:
        return np.array(self.vertical).reshape(len(self.vertical), -1)

    @property
    def horizontal_matrix(self) -> np.ndarray:
        return np.array(self.horizontal).reshape(len(self.horizontal), -1)

    @property
    def basis(self) -> list[np.ndarray]:
        return list(self.vertical) + list(self.horizontal)


@dataclass
class AntiInvarianceReport:
    is_anti_invariant: bool
    xi_position: str  # "vertical" | "horizontal" | "mixed" | "absent"
    phi_ker_equals_complement: bool
    mu_dim: int
    intersection_dim: int
    m: int
    n: int
    dimension_relation: str
    dimension_relation_holds: bool | None
    residuals: dict[str, float]


def gram_schmidt(vectors, g: np.ndarray, tol: float = 1e-12) -> list[np.ndarray]:
    """Orthonormalize in the inner product ``g``; drops dependent vectors."""
    out: list[np.ndarray] = []
    for v in vectors:
        w = np.array(v, dtype=float)
        for _ in range(2):  # second pass restores orthogonality lost to round-off
            for u in out:
                w = w - (u @ g @ w) * u
        norm = np.sqrt(max(w @ g @ w, 0.0))
        if norm > tol:
            out.append(w / norm)
    return out


def nullspace(a: np.ndarray, rtol: float = TOL_FRAME) -> np.ndarray:
    """Rows span the kernel of ``a``; singular values < rtol·max count as zero."""
    _, s, vt = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rtol * smax)) if smax > 0 else 0
    return vt[rank:]


def matrix_rank(a: np.ndarray, rtol: float = TOL_FRAME) -> int:
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rtol * s[0])) if s.size and s[0] > 0 else 0


def differential_at(F: SubmersionSpec, p) -> np.ndarray:
    """Jacobian of the map components at ``p`` (n × m)."""
    return jacobian_jet(F, F.check_guard(p)).val


def jacobian_jet(F: SubmersionSpec, p) -> ArrayJet:
    """Order-2 jet of dF; needs third derivatives of the components."""
    x = _point(p, F.source.chart)
    return _cached(F._cache, ("J", x.tobytes()), lambda: jet_of_expressions(F.jacobian_expressions(), x))


def projector_jets(F: SubmersionSpec, p) -> tuple[ArrayJet, ArrayJet]:
    """Jets of the g_M-orthogonal projectors (P_V, P_H) onto ker dF and its complement."""
    x = _point(p, F.source.chart)

    def build():
        J = jacobian_jet(F, x)
        ginv = inverse_metric_jet(F.source.metric, x)
        gjt = ginv @ J.T
        if matrix_rank(J.val) < F.n:
            raise RankError(f"dF is rank deficient at {x.tolist()}")
        ph = gjt @ inverse(J @ gjt) @ J
        pv = ArrayJet.constant(np.eye(F.m), F.m) - ph
        return pv, ph

    return _cached(F._cache, ("P", x.tobytes()), build)


def split_frame_at(F: SubmersionSpec, p, seed_order=None) -> SplitFrame:
    """g_M-orthonormal bases of ker dF_p and its g_M-orthogonal complement.

    ``seed_order`` permutes the nullspace seed vectors before Gram-Schmidt;
    classification results must not depend on it.
    """
    x = F.check_guard(p)
    key = ("frame", x.tobytes(), None if seed_order is None else tuple(seed_order))

    def build():
        J = jacobian_jet(F, x).val
        g = F.source.metric.jet(x).val
        ker = nullspace(J)
        if ker.shape[0] != F.m - F.n:
            raise RankError(f"dF has rank {F.m - ker.shape[0]} < {F.n} at {x.tolist()}")
        seeds = list(ker)
        if seed_order is not None:
            seeds = [seeds[i] for i in seed_order]
        vertical = gram_schmidt(seeds, g)
        # the complement is spanned by g^{-1} dF^T
        hseeds = np.linalg.solve(g, J.T).T
        horizontal = gram_schmidt(list(vertical) + list(hseeds), g)[len(vertical):]
        return SplitFrame(x, vertical, horizontal, g)

    return _cached(F._cache, key, build)


def project(frame: SplitFrame, v) -> tuple[np.ndarray, np.ndarray]:
    """(vertical part, horizontal part) of ``v``."""
    v = np.asarray(v, dtype=float)
    g = frame.metric
    vert = sum(((u @ g @ v) * u for u in frame.vertical), np.zeros_like(v))
    return vert, v - vert


def gnorm(g: np.ndarray, v) -> float:
    v = np.asarray(v, dtype=float)
    return float(np.sqrt(max(v @ g @ v, 0.0)))


def check_submersion_axioms(F: SubmersionSpec, p, tol: float = TOL_AXIOMS) -> CheckReport:
    """S1 (maximal rank) and S2 (dF is isometric on horizontal vectors)."""
    x = F.check_guard(p)
    rep = CheckReport("submersion_axioms")
    J = jacobian_jet(F, x).val
    rank = matrix_rank(J)
    rep.add("S1_rank_deficit", F.n - rank, 0.5, note=f"rank {rank} of {F.n}")
    if rank < F.n:
        return rep
    frame = split_frame_at(F, x)
    gN = F.target.metric.jet(F.image(x)).val
    H = frame.horizontal_matrix
    pushed = H @ J.T
    gram = pushed @ gN @ pushed.T
    rep.add("S2_isometry", float(np.max(np.abs(gram - np.eye(F.n)))), tol)
    return rep


def _phi_or_none(F: SubmersionSpec, x):
    st = F.source.structure
    return None if st is None else st.at(x)


def classify_anti_invariance(F: SubmersionSpec, p, tol: float = TOL_CLASSIFY) -> AntiInvarianceReport:
    x = F.check_guard(p)
    frame = split_frame_at(F, x)
    g = frame.metric
    data = _phi_or_none(F, x)
    m_src, n = F.m, F.n
    m_half = (m_src - 1) // 2
    if data is None:
        raise ModelError("source carries no almost contact structure")
    phi, xi, _ = data
    residuals: dict[str, float] = {}
    vparts = [project(frame, phi @ u)[0] for u in frame.vertical]
    anti = max((gnorm(g, v) for v in vparts), default=0.0)
    residuals["anti_invariance"] = anti
    xv, xh = project(frame, xi)
    residuals["xi_vertical_part"] = gnorm(g, xv)
    residuals["xi_horizontal_part"] = gnorm(g, xh)
    if gnorm(g, xh) <= tol:
        pos = "vertical"
    elif gnorm(g, xv) <= tol:
        pos = "horizontal"
    else:
        pos = "mixed"
    images = np.array([phi @ u for u in frame.vertical]).reshape(len(frame.vertical), m_src)
    phi_ker_dim = matrix_rank(images, 1e-9) if len(frame.vertical) else 0
    is_anti = anti <= tol
    dim_h = len(frame.horizontal)
    equals = is_anti and phi_ker_dim == dim_h
    mu_dim = dim_h - phi_ker_dim
    # dim(φ(ker) ∩ ker⊥) = rank of φ on K0 = {v in ker : V(φv) = 0}
    inter = 0
    if len(frame.vertical):
        # column j holds the vertical-frame coordinates of V(φ u_j)
        vmat = np.array([[u @ g @ w for u in frame.vertical] for w in vparts]).T
        if np.max(np.abs(vmat)) <= tol:
            k0 = np.eye(len(frame.vertical))
        else:
            k0 = nullspace(vmat, 1e-9)
        if len(k0):
            inter = matrix_rank(k0 @ images, 1e-9)
    relation, holds = "none", None
    if is_anti and pos == "vertical" and equals:
        relation, holds = "m = n", m_half == n
    elif is_anti and pos == "horizontal" and mu_dim == 1:
        relation, holds = "m + 1 = n", m_half + 1 == n
    residuals["phi_ker_dim"] = float(phi_ker_dim)
    return AntiInvarianceReport(
        is_anti_invariant=is_anti,
        xi_position=pos,
        phi_ker_equals_complement=equals,
        mu_dim=mu_dim,
        intersection_dim=inter,
        m=m_half,
        n=n,
        dimension_relation=relation,
        dimension_relation_holds=holds,
        residuals=residuals,
    )


def bc_decompose_at(F: SubmersionSpec, X, p, tol: float = TOL_CLASSIFY) -> tuple[np.ndarray, np.ndarray]:
    """Split φX = BX + CX for horizontal X into vertical B and horizontal C parts."""
    x = F.check_guard(p)
    frame = split_frame_at(F, x)
    X = np.asarray(X, dtype=float)
    vx, _ = project(frame, X)
    if gnorm(frame.metric, vx) > tol * max(1.0, gnorm(frame.metric, X)):
        raise ValueError("X is not horizontal")
    phi = F.source.require_structure().at(x)[0]
    return project(frame, phi @ X)


def target_christoffel_at(F: SubmersionSpec, p) -> np.ndarray:
    """Target Christoffel symbols at F(p)."""
    return christoffel_at(F.target.metric, F.image(p))


def source_christoffel_jet(F: SubmersionSpec, p) -> ArrayJet:
    return christoffel_jet(F.source.metric, p)
