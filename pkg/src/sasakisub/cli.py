"""Suite orchestration over sampled points, reports, and the ``verify`` command."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .contact import check_almost_contact, check_contact_form, check_sasakian, check_sasakian_curvature
from .geometry import ModelError
from .harmonic import check_harmonicity, check_totally_geodesic_map
from .model import Model, load_model
from .oneill import (
    distribution_criteria,
    fiber_geometry_at,
    fundamental_equations_check,
    lemma_suite_horizontal_xi,
    lemma_suite_vertical_xi,
)
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, combine_verdicts
from .submersion import (
    check_submersion_axioms,
    classify_anti_invariance,
    gnorm,
    jacobian_jet,
    project,
    split_frame_at,
)

SCHEMA = "sasakisub.report/1"
SUITES = ("all", "sasakian", "almost_contact", "axioms", "lemmas", "criteria", "harmonic")
MAX_REJECTIONS = 100_000
EXIT_CODES = {PASS: 0, FAIL: 1, INCONCLUSIVE: 2}
EXIT_USAGE = 3


class SamplingError(ModelError):
    """No admissible sample point could be drawn."""


@dataclass
class AggregateCheck:
    name: str
    kind: str
    value: float
    tolerance: float
    verdict: str
    worst_point: list[float]
    note: str = ""


@dataclass
class SuiteSummary:
    name: str
    checks: list[AggregateCheck] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return combine_verdicts(c.verdict for c in self.checks)

    def __getitem__(self, name: str) -> AggregateCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)


@dataclass
class RunReport:
    model: str
    origin: str
    suite: str
    seed: int
    points: int
    box: tuple[float, float]
    tol_scale: float
    suites: list[SuiteSummary]

    @property
    def verdict(self) -> str:
        return combine_verdicts(s.verdict for s in self.suites)

    def suite_summary(self, name: str) -> SuiteSummary:
        for s in self.suites:
            if s.name == name:
                return s
        raise KeyError(name)


def sample_points(model: Model, points: int, seed: int, low: float, high: float) -> list[np.ndarray]:
    """Uniform points in the box, rejecting those outside the domain guards."""
    rng = np.random.default_rng(seed)
    dim = model.source.dim
    spec = model.submersion
    out, rejected = [], 0
    while len(out) < points:
        p = rng.uniform(low, high, dim)
        if spec is None or spec.admissible(p):
            out.append(p)
            continue
        rejected += 1
        if rejected >= MAX_REJECTIONS:
            raise SamplingError(
                f"only {len(out)} of {points} admissible points after {rejected} rejections"
            )
    return out


def _axioms_report(model: Model, p, scale: float) -> list[CheckReport]:
    F = model.submersion
    rep = check_submersion_axioms(F, p, 1e-9 * scale)
    if rep.failures() and "S2_isometry" not in rep:
        return [rep]
    frame = split_frame_at(F, p)
    basis = np.array(frame.basis)
    gram = basis @ frame.metric @ basis.T
    rep.add("frame_gram", float(np.max(np.abs(gram - np.eye(len(basis))))), 1e-10 * scale)
    dF = jacobian_jet(F, p).val
    kres = max((float(np.max(np.abs(dF @ v))) for v in frame.vertical), default=0.0)
    rep.add("frame_kernel", kres, 1e-10 * scale)
    reps = [rep]
    if F.source.structure is not None:
        c = classify_anti_invariance(F, p)
        cr = CheckReport("classification")
        cr.add("anti_invariance", c.residuals["anti_invariance"], 1e-9 * scale)
        cr.add("xi_vertical_part", c.residuals["xi_vertical_part"], 0.0, kind="info")
        cr.add("xi_horizontal_part", c.residuals["xi_horizontal_part"], 0.0, kind="info")
        cr.add("mu_dim", c.mu_dim, 0.0, kind="info", note=f"xi {c.xi_position}")
        cr.add("phi_ker_cap_horizontal_dim", c.intersection_dim, 0.0, kind="info")
        if c.dimension_relation_holds is not None:
            cr.add(f"dimension_relation {c.dimension_relation}", 0.0 if c.dimension_relation_holds else 1.0, 0.5)
        # shuffled Gram-Schmidt seeds must not change the classification
        k = len(frame.vertical)
        if k > 1:
            order = list(range(k))[::-1]
            alt = split_frame_at(F, p, seed_order=order)
            g = alt.metric
            phi = F.source.structure.at(p)[0]
            alt_anti = max(gnorm(g, project(alt, phi @ u)[0]) for u in alt.vertical) <= 1e-9
            cr.add("frame_independent", 0.0 if alt_anti == c.is_anti_invariant else 1.0, 0.5)
        reps.append(cr)
    return reps


def _lemma_reports(model: Model, p, scale: float) -> list[CheckReport]:
    F = model.submersion
    reps = [fundamental_equations_check(F, p, scale), fiber_geometry_at(F, p, 1e-9 * scale).checks]
    if F.source.structure is not None:
        c = classify_anti_invariance(F, p)
        if c.xi_position == "vertical":
            reps.append(lemma_suite_vertical_xi(F, p, scale))
        elif c.xi_position == "horizontal":
            reps.append(lemma_suite_horizontal_xi(F, p, scale))
    return reps


def _suite_plan(model: Model, suite: str) -> list[str]:
    has_map = model.submersion is not None
    has_structure = model.source.structure is not None
    if suite == "all":
        plan = []
        if has_structure:
            plan.append("sasakian")
        if has_map:
            plan += ["axioms", "lemmas", "harmonic"]
            if has_structure:
                plan.insert(plan.index("harmonic"), "criteria")
        return plan
    needs_map = suite in ("axioms", "lemmas", "criteria", "harmonic")
    if needs_map and not has_map:
        raise ModelError(f"suite {suite!r} needs a map, model {model.name!r} has none")
    if suite in ("sasakian", "almost_contact", "criteria") and not has_structure:
        raise ModelError(f"suite {suite!r} needs an almost contact structure")
    return [suite]


def _run_one(model: Model, suite: str, p, scale: float) -> list[CheckReport]:
    sm = model.source
    if suite == "almost_contact":
        return [check_almost_contact(sm, p, 1e-9 * scale)]
    if suite == "sasakian":
        return [
            check_almost_contact(sm, p, 1e-9 * scale),
            check_contact_form(sm, p, 1e-9 * scale),
            check_sasakian(sm, p, 1e-8 * scale),
            check_sasakian_curvature(sm, p, 1e-7 * scale),
        ]
    if suite == "axioms":
        return _axioms_report(model, p, scale)
    if suite == "lemmas":
        return _lemma_reports(model, p, scale)
    if suite == "criteria":
        return [distribution_criteria(model.submersion, p, scale)]
    if suite == "harmonic":
        F = model.submersion
        return [check_harmonicity(F, p, scale).checks, check_totally_geodesic_map(F, p, scale)]
    raise ValueError(f"unknown suite {suite!r}")


def _merge(summary: SuiteSummary, index: dict, rep: CheckReport, p: np.ndarray):
    for c in rep.checks:
        key = f"{rep.name}.{c.name}"
        agg = index.get(key)
        if agg is None:
            agg = index[key] = AggregateCheck(key, c.kind, c.value, c.tolerance, c.verdict, p.tolist(), c.note)
            summary.checks.append(agg)
        elif c.value > agg.value:
            # identities keep the worst residual, witnesses the strongest witness
            agg.value, agg.worst_point, agg.note = c.value, p.tolist(), c.note
        if c.kind == "witness":
            agg.verdict = PASS if agg.value > agg.tolerance else INCONCLUSIVE
        elif c.kind == "identity":
            agg.verdict = PASS if agg.value <= agg.tolerance else FAIL
        else:
            agg.verdict = c.verdict


def run_suite(
    model: Model,
    suite: str = "all",
    points: int | None = None,
    seed: int | None = None,
    tol_scale: float | None = None,
    box: tuple[float, float] | None = None,
) -> RunReport:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    points = model.sample.points if points is None else points
    seed = model.sample.seed if seed is None else seed
    scale = model.tol_scale if tol_scale is None else tol_scale
    low, high = box if box is not None else (model.sample.low, model.sample.high)
    plan = _suite_plan(model, suite)
    pts = sample_points(model, points, seed, low, high)
    summaries = []
    for name in plan:
        summary, index = SuiteSummary(name), {}
        for p in pts:
            try:
                reports = _run_one(model, name, p, scale)
            except ModelError as e:
                err = CheckReport("error")
                err.add(type(e).__name__, 1.0, 0.5, note=str(e))
                reports = [err]
            for rep in reports:
                _merge(summary, index, rep, p)
        summaries.append(summary)
    return RunReport(model.name, model.origin, suite, seed, points, (low, high), scale, summaries)


def report_dict(report: RunReport) -> dict:
    return {
        "schema": SCHEMA,
        "model": report.model,
        "origin": report.origin,
        "suite": report.suite,
        "verdict": report.verdict,
        "environment": {
            "version": __version__,
            "seed": report.seed,
            "points": report.points,
            "box": list(report.box),
            "tol_scale": report.tol_scale,
        },
        "suites": [
            {
                "name": s.name,
                "verdict": s.verdict,
                "checks": [
                    {
                        "name": c.name,
                        "kind": c.kind,
                        "value": c.value,
                        "tolerance": c.tolerance,
                        "verdict": c.verdict,
                        "worst_point": c.worst_point,
                        "note": c.note,
                    }
                    for c in s.checks
                ],
            }
            for s in report.suites
        ],
    }


def emit_report(report: RunReport, fmt: str = "text") -> bytes:
    if fmt == "json":
        return (json.dumps(report_dict(report), indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    lines = [
        f"model {report.model} ({report.origin})",
        f"suite {report.suite}, {report.points} points, seed {report.seed}, "
        f"box [{report.box[0]}, {report.box[1]}], tolerance scale {report.tol_scale}",
        "",
    ]
    width = max((len(c.name) for s in report.suites for c in s.checks), default=10)
    for s in report.suites:
        lines.append(f"[{s.name}] {s.verdict.upper()}")
        for c in s.checks:
            rel = {"identity": "<=", "witness": ">", "info": "  "}[c.kind]
            tol = f"{c.tolerance:.1e}" if c.kind != "info" else ""
            lines.append(f"  {c.verdict.upper():<12} {c.name:<{width}}  {c.value:11.3e} {rel} {tol:>8}"
                         + (f"  {c.note}" if c.note and c.verdict != PASS else ""))
        lines.append("")
    failing = [c for s in report.suites for c in s.checks if c.verdict in (FAIL, INCONCLUSIVE)]
    if failing:
        lines.append("failing checks:")
        for c in failing:
            lines.append(f"  {c.name}: {c.value:.6g} at {[round(v, 6) for v in c.worst_point]}")
    lines.append(f"verdict: {report.verdict.upper()}")
    return ("\n".join(lines) + "\n").encode("utf-8")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="verify", description="Check Sasakian and anti-invariant submersion identities at sampled points.")
    ap.add_argument("model", help="path to a .model file or a fixture name")
    ap.add_argument("--suite", default="all", choices=SUITES)
    ap.add_argument("--points", type=int, default=None, help="sample count (default: model's, else 50)")
    ap.add_argument("--seed", type=int, default=None, help="sampling seed (default: model's, else 42)")
    ap.add_argument("--tol-scale", type=float, default=None, help="multiply every tolerance")
    ap.add_argument("--report", default="text", choices=("text", "json"))
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        model = load_model(args.model)
        if args.points is not None and args.points < 1:
            raise ModelError("--points must be at least 1")
        report = run_suite(model, args.suite, args.points, args.seed, args.tol_scale)
    except (ModelError, FileNotFoundError, ValueError) as e:
        print(f"verify: {e}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.buffer.write(emit_report(report, args.report))
    sys.stdout.flush()
    return EXIT_CODES[report.verdict]


if __name__ == "__main__":
    sys.exit(main())
