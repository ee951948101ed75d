"""Second fundamental form and tension field of a map; harmonicity criteria."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .oneill import TOL_NABLA, WITNESS_THRESHOLD, PreconditionError, point_geometry
from .report import CheckReport
from .submersion import SubmersionSpec, classify_anti_invariance, target_christoffel_at


def _max(a) -> float:
    a = np.asarray(a, dtype=float)
    return float(np.max(np.abs(a))) if a.size else 0.0


def sff_table_at(F: SubmersionSpec, p) -> np.ndarray:
    """S[a, i, j] = ((∇F_*)(∂_i, ∂_j))^a.

    ∂_i∂_j F^a + Γ_N^a_bc(F(p)) ∂_iF^b ∂_jF^c − ∂_kF^a Γ^k_ij.
    """
    G = point_geometry(F, p)
    key = "sff"
    if key not in G._extra:
        J = G.J.val
        hess = G.J.d1  # hess[a, i, j] = ∂_j ∂_i F^a
        gN = target_christoffel_at(F, G.x)
        G._extra[key] = (
            hess
            + np.einsum("abc,bi,cj->aij", gN, J, J)
            - np.einsum("ak,kij->aij", J, G.gamma.val)
        )
    return G._extra[key]


def sff_apply(S: np.ndarray, X, Y) -> np.ndarray:
    return np.einsum("aij,i,j->a", S, X, Y)


def second_fundamental_form_at(F: SubmersionSpec, X, Y, p) -> np.ndarray:
    """(∇F_*)(X, Y) in target components."""
    return sff_apply(sff_table_at(F, p), np.asarray(X, float), np.asarray(Y, float))


def _target_norm(F: SubmersionSpec, p, v) -> float:
    gN = F.target.metric.jet(F.image(p)).val
    return float(np.sqrt(max(v @ gN @ v, 0.0)))


def tension_at(F: SubmersionSpec, p) -> np.ndarray:
    """τ = Σ (∇F_*)(e_i, e_i) over a g_M-orthonormal frame."""
    G = point_geometry(F, p)
    S = sff_table_at(F, p)
    return sum((sff_apply(S, e, e) for e in G.vertical + G.horizontal), np.zeros(F.n))


@dataclass
class MapHessianReport:
    sff_table: np.ndarray  # [i, j, a] over the frame vertical + horizontal
    tension: np.ndarray
    trace_phi_T: list[float]
    harmonic: bool
    totally_geodesic_map: bool
    checks: CheckReport


def check_harmonicity(F: SubmersionSpec, p, scale: float = 1.0) -> MapHessianReport:
    """Trace criterion, minimal fibres and tension must give the same verdict."""
    x = F.check_guard(p)
    G = point_geometry(F, x)
    S = sff_table_at(F, x)
    tol = TOL_NABLA * scale
    frame = G.vertical + G.horizontal
    table = np.array([[sff_apply(S, e, f) for f in frame] for e in frame])
    rep = CheckReport("harmonicity")

    rep.add("sff_symmetric", _max(table - np.swapaxes(table, 0, 1)), tol)
    nv = len(G.vertical)
    rep.add("sff_horizontal_pairs", _max(table[nv:, nv:]), tol)
    tau = tension_at(F, x)
    tau_v = sum((sff_apply(S, u, u) for u in G.vertical), np.zeros(F.n))
    rep.add("tension_vertical_only", _max(tau - tau_v), tol)

    tau_norm = _target_norm(F, x, tau)
    mean = sum((G.t(u, u) for u in G.vertical), np.zeros(G.m))
    minimal_norm = G.norm(mean)
    rep.add("tension_norm", tau_norm, 0.0, kind="info")
    rep.add("minimal_fiber_norm", minimal_norm, 0.0, kind="info")
    verdicts = {"tension": tau_norm <= tol, "minimal_fibers": minimal_norm <= tol}

    traces: list[float] = []
    if F.source.structure is not None:
        cls = classify_anti_invariance(F, x)
        if cls.is_anti_invariant and cls.xi_position in ("vertical", "horizontal"):
            phi, eta = G.phi, G.eta
            k = nv
            printed = ident = 0.0
            for v in G.vertical:
                # operator trace of φ∘T_V on the vertical space
                tr = sum(G.inner(phi @ G.t(v, u), u) for u in G.vertical)
                traces.append(tr)
                rhs = (2 * cls.m - cls.n) * (eta @ v) if cls.xi_position == "vertical" else 0.0
                printed = max(printed, abs(tr - rhs))
                # what the proof derives for arbitrary fibres; (k − 1) = 2m − n when ξ is vertical
                derived = (k - 1) * (eta @ v) - G.inner(mean, phi @ v)
                ident = max(ident, abs(tr - derived))
            rep.add("trace_phi_T_criterion_defect", printed, 0.0, kind="info",
                    note="max_V |Trace φT_V − right side of the criterion|")
            rep.add("trace_phi_T_identity", ident, tol)
            verdicts["trace_criterion"] = printed <= tol

    agree = len(set(verdicts.values())) == 1
    rep.add("harmonicity_coherent", 0.0 if agree else 1.0, 0.5,
            note=", ".join(f"{k}={'harmonic' if v else 'not harmonic'}" for k, v in verdicts.items()))
    harmonic = verdicts["tension"]
    tg = _max(table) <= tol
    return MapHessianReport(table, tau, traces, harmonic, tg, rep)


def check_totally_geodesic_map(F: SubmersionSpec, p, scale: float = 1.0) -> CheckReport:
    """Witness for ∇F_* ≠ 0 on Sasakian sources, plus the vertical-pair and mixed-pair identities."""
    x = F.check_guard(p)
    G = point_geometry(F, x)
    S = sff_table_at(F, x)
    tol = TOL_NABLA * scale
    rep = CheckReport("totally_geodesic_map")
    dirs = G.random_directions(G.vertical + G.horizontal, 20)
    biggest = max((_target_norm(F, x, sff_apply(S, a, b)) for a in dirs for b in dirs), default=0.0)
    if F.source.structure is None:
        rep.add("max_sff_norm", biggest, 0.0, kind="info")
        return rep
    cls = classify_anti_invariance(F, x)
    if not cls.is_anti_invariant:
        raise PreconditionError(f"map is not anti-invariant at {x.tolist()}")
    rep.add("not_totally_geodesic", biggest, WITNESS_THRESHOLD, kind="witness",
            note="max |(∇F_*)(e_i, e_j)| over frame and random directions")
    phi, xi = G.phi, G.xi

    def vertical_defect(vectors):
        return max((_max(sff_apply(S, w, v) - G.push(phi @ G.t(w, phi @ v))) for w in vectors for v in vectors),
                   default=0.0)

    # the vertical-pair formula assumes η(V) = 0; on a vertical-ξ map restrict to ker ∩ ξ⊥
    perp = [v - G.inner(v, xi) * xi for v in G.vertical]
    rep.add("sff_vertical_pair", vertical_defect(perp), tol, note="vertical vectors orthogonal to ξ")
    rep.add("sff_vertical_pair_full", vertical_defect(G.vertical), 0.0, kind="info")
    mixed = 0.0
    for h in G.horizontal:
        for w in G.vertical:
            rhs = G.push(phi @ G.a(h, phi @ w) - G.inner(w, phi @ h) * xi)
            mixed = max(mixed, _max(sff_apply(S, h, w) - rhs))
    rep.add("sff_mixed_pair", mixed, tol)
    if cls.xi_position == "horizontal" and cls.mu_dim == 1:
        c1 = max((_max(G.t(w, phi @ v)) for w in G.vertical for v in G.vertical), default=0.0)
        c2 = max((_max(G.a(h, phi @ w)) for h in G.horizontal for w in G.vertical), default=0.0)
        crit = max(c1, c2) <= tol
        geo = biggest <= tol
        rep.add("criterion_consistent", 0.0 if crit == geo else 1.0, 0.5,
                note=f"T_W φV = 0 and A_X φW = 0: {'holds' if crit else 'fails'}; "
                     f"totally geodesic: {'yes' if geo else 'no'}")
    return rep
