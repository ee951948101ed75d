"""Text model files and the shipped fixture registry.

A model file is INI-style (read with :mod:`configparser`)::

    [model]
    name = example2

    [source]
    coordinates = x1 x2 y1 y2 z

    [source.metric]            # "a b = expr" sets g[a,b] and g[b,a]
    x1 x1 = 1/4 + y1^2/4

    [source.phi]               # "i j = expr": component i of phi(d/dj)
    y1 x1 = -1

    [source.xi]                # components; missing ones are zero
    z = 2

    [source.eta]
    z = 1/2

    [target]
    coordinates = u1 u2

    [target.metric]
    u1 u1 = 1/8

    [map]                      # one entry per target coordinate
    u1 = x1 + y1

    [guard]                    # "source.label" or "target.label"; keep expr > 0
    target.inside = 2 - u1^2

    [sample]
    low = -0.9
    high = 0.9
    points = 50
    seed = 42

    [tolerance]
    scale = 1

Only ``[model]`` and ``[source]``/``[source.metric]`` are required.
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .contact import AlmostContactStructure, StructuredManifold
from .expr import Expression, ExpressionError
from .geometry import Chart, MetricField, ModelError, VectorField
from .submersion import Guard, SubmersionSpec


class ModelFileError(ModelError):
    """Malformed or inconsistent model file."""


@dataclass(frozen=True)
class SampleSpec:
    low: float = -0.9
    high: float = 0.9
    points: int = 50
    seed: int = 42


@dataclass(frozen=True)
class Model:
    name: str
    source: StructuredManifold
    submersion: SubmersionSpec | None = None
    sample: SampleSpec = SampleSpec()
    tol_scale: float = 1.0
    description: str = ""
    origin: str = ""

    def with_sample(self, **kw) -> "Model":
        return replace(self, sample=replace(self.sample, **kw))


FIXTURES = {
    "example1": "example1.model",
    "example1_n3": "example1_n3.model",
    "example1_printed": "example1_printed.model",
    "example2": "example2.model",
    "example3": "example3.model",
    "example4": "example4.model",
    "flat_projection": "flat_projection.model",
    "warped_projection": "warped_projection.model",
}


def fixture_names() -> list[str]:
    return list(FIXTURES)


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(FIXTURES)}")
    return resources.files("sasakisub").joinpath("models", FIXTURES[name]).read_text(encoding="utf-8")


def load_fixture(name: str) -> Model:
    return parse_model(fixture_text(name), origin=f"fixture:{name}")


def load_model(path_or_name) -> Model:
    """Load a model file by path, or a shipped fixture by name."""
    p = Path(path_or_name)
    if p.is_file():
        return parse_model(p.read_text(encoding="utf-8"), origin=str(p))
    if str(path_or_name) in FIXTURES:
        return load_fixture(str(path_or_name))
    raise FileNotFoundError(f"no model file or fixture named {path_or_name!r}")


def _parser() -> configparser.ConfigParser:
    cp = configparser.ConfigParser(
        interpolation=None, inline_comment_prefixes=("#",), strict=True, delimiters=("=",)
    )
    cp.optionxform = str  # coordinate names are case sensitive
    return cp


def _expr(chart: Chart, text: str, where: str) -> Expression:
    try:
        return chart.parse(text)
    except ExpressionError as e:
        raise ModelFileError(f"{where}: {e}") from None


def _coords(cp, section: str) -> Chart:
    if not cp.has_option(section, "coordinates"):
        raise ModelFileError(f"[{section}] needs a 'coordinates' entry")
    try:
        return Chart(tuple(cp.get(section, "coordinates").split()))
    except ModelError as e:
        raise ModelFileError(f"[{section}]: {e}") from None


def _index(chart: Chart, name: str, where: str) -> int:
    try:
        return chart.var_names.index(name)
    except ValueError:
        raise ModelFileError(f"{where}: {name!r} is not a coordinate of {chart.var_names}") from None


def _pair(chart: Chart, key: str, where: str) -> tuple[int, int]:
    parts = key.split()
    if len(parts) != 2:
        raise ModelFileError(f"{where}: key {key!r} must name two coordinates")
    return _index(chart, parts[0], where), _index(chart, parts[1], where)


def _metric(cp, section: str, chart: Chart) -> MetricField:
    if not cp.has_section(section):
        raise ModelFileError(f"missing [{section}]")
    entries: dict[tuple[int, int], tuple[str, Expression]] = {}
    for key, text in cp.items(section):
        i, j = _pair(chart, key, f"[{section}] {key}")
        e = _expr(chart, text, f"[{section}] {key}")
        other = entries.get((j, i))
        if other is not None and other[1].root != e.root:
            a, b = chart.var_names[i], chart.var_names[j]
            raise ModelFileError(
                f"[{section}]: asymmetric metric entries g[{a},{b}] = {text!r} "
                f"and g[{b},{a}] = {other[0]!r}"
            )
        entries[(i, j)] = (text, e)
    sym = {}
    for (i, j), (_, e) in entries.items():
        sym.setdefault((min(i, j), max(i, j)), e)
    return MetricField.from_upper(chart, sym)


def _vector(cp, section: str, chart: Chart) -> tuple[Expression, ...]:
    comps = [chart.zero()] * chart.dim
    for key, text in cp.items(section):
        comps[_index(chart, key, f"[{section}]")] = _expr(chart, text, f"[{section}] {key}")
    return tuple(comps)


def _structure(cp, chart: Chart) -> AlmostContactStructure | None:
    names = ("source.phi", "source.xi", "source.eta")
    present = [cp.has_section(s) for s in names]
    if not any(present):
        return None
    if not all(present):
        raise ModelFileError("[source.phi], [source.xi] and [source.eta] must appear together")
    n = chart.dim
    zero = chart.zero()
    phi = [[zero] * n for _ in range(n)]
    for key, text in cp.items("source.phi"):
        i, j = _pair(chart, key, f"[source.phi] {key}")
        phi[i][j] = _expr(chart, text, f"[source.phi] {key}")
    xi = VectorField(chart, _vector(cp, "source.xi", chart))
    eta = _vector(cp, "source.eta", chart)
    return AlmostContactStructure(chart, tuple(tuple(r) for r in phi), xi, eta)


def parse_model(text: str, origin: str = "<string>") -> Model:
    cp = _parser()
    try:
        cp.read_string(text, source=origin)
    except configparser.Error as e:
        raise ModelFileError(f"{origin}: {e}") from None
    try:
        return _build(cp, origin)
    except ModelFileError as e:
        raise ModelFileError(f"{origin}: {e}") from None


def _build(cp, origin: str) -> Model:
    name = cp.get("model", "name", fallback=Path(origin).stem)
    description = cp.get("model", "description", fallback="")
    src_chart = _coords(cp, "source")
    source = StructuredManifold(src_chart, _metric(cp, "source.metric", src_chart), _structure(cp, src_chart))

    spec = None
    if cp.has_section("target"):
        tgt_chart = _coords(cp, "target")
        target = StructuredManifold(tgt_chart, _metric(cp, "target.metric", tgt_chart))
        if not cp.has_section("map"):
            raise ModelFileError("a [target] needs a [map]")
        comps = {}
        for key, expr_text in cp.items("map"):
            comps[_index(tgt_chart, key, "[map]")] = _expr(src_chart, expr_text, f"[map] {key}")
        if len(comps) != tgt_chart.dim:
            missing = [v for k, v in enumerate(tgt_chart.var_names) if k not in comps]
            raise ModelFileError(f"[map] is missing components for {missing}")
        guards = []
        if cp.has_section("guard"):
            for key, expr_text in cp.items("guard"):
                where, _, label = key.partition(".")
                if where not in ("source", "target") or not label:
                    raise ModelFileError(f"[guard] key {key!r} must look like source.<label> or target.<label>")
                chart = tgt_chart if where == "target" else src_chart
                guards.append(Guard(_expr(chart, expr_text, f"[guard] {key}"), where == "target", label))
        try:
            spec = SubmersionSpec(source, target, tuple(comps[k] for k in range(tgt_chart.dim)), tuple(guards))
        except ModelError as e:
            raise ModelFileError(str(e)) from None
    elif cp.has_section("map"):
        raise ModelFileError("[map] given without a [target]")

    try:
        sample = SampleSpec(
            low=cp.getfloat("sample", "low", fallback=SampleSpec.low),
            high=cp.getfloat("sample", "high", fallback=SampleSpec.high),
            points=cp.getint("sample", "points", fallback=SampleSpec.points),
            seed=cp.getint("sample", "seed", fallback=SampleSpec.seed),
        )
        scale = cp.getfloat("tolerance", "scale", fallback=1.0)
    except ValueError as e:
        raise ModelFileError(f"[sample]/[tolerance]: {e}") from None
    if not sample.low < sample.high or sample.points < 1 or scale <= 0:
        raise ModelFileError("sample box must be nonempty, points >= 1, tolerance scale > 0")
    return Model(name, source, spec, sample, scale, description, origin)
