import pytest

from sasakisub import fixtures
from sasakisub.model import (
    ModelFileError,
    fixture_names,
    fixture_text,
    load_model,
    parse_model,
)

BASE = """
[model]
name = tiny

[source]
coordinates = a b

[source.metric]
a a = 1
b b = 1
"""


def test_registry_contents():
    assert set(fixture_names()) == {
        "example1", "example1_n3", "example1_printed", "example2", "example3", "example4",
        "flat_projection", "warped_projection",
    }


@pytest.mark.parametrize("name", sorted(fixtures.GENERATORS))
def test_shipped_files_match_generators(name):
    assert fixture_text(name) == fixtures.GENERATORS[name]()


def test_example2_dimensions():
    m = load_model("example2")
    assert m.source.dim == 5 and m.submersion.n == 2
    assert m.source.structure is not None


def test_example4_dimensions_and_guard():
    m = load_model("example4")
    assert m.source.dim == 7 and m.submersion.n == 5
    assert [g.label for g in m.submersion.guards] == ["minor3", "minor4"]
    assert all(g.on_target for g in m.submersion.guards)


def test_example1_variants():
    assert load_model("example1").source.dim == 5
    assert load_model("example1_n3").source.dim == 7
    assert load_model("example1").submersion is None


def test_load_from_path(tmp_path):
    path = tmp_path / "tiny.model"
    path.write_text(BASE, encoding="utf-8")
    m = load_model(path)
    assert m.name == "tiny" and m.origin == str(path)
    assert m.sample.points == 50 and m.sample.seed == 42


def test_unknown_model():
    with pytest.raises(FileNotFoundError):
        load_model("no_such_fixture")


def test_asymmetric_metric_names_entries():
    text = BASE + "a b = 1/2\nb a = 1/3\n"
    with pytest.raises(ModelFileError, match=r"g\[b,a\].*g\[a,b\]"):
        parse_model(text)


def test_mirrored_entry_is_accepted():
    m = parse_model(BASE + "a b = 1/2\nb a = 1/2\n")
    assert m.source.metric.jet([0, 0]).val[0, 1] == 0.5


def test_parse_error_carries_location():
    with pytest.raises(ModelFileError, match=r"\[source.metric\] a a.*offset 3 in 'b \+'"):
        parse_model(BASE.replace("a a = 1", "a a = b +"))


def test_undeclared_coordinate():
    with pytest.raises(ModelFileError, match="'c'"):
        parse_model(BASE + "a c = 1\n")


def test_map_dimension_mismatch():
    text = BASE + "[target]\ncoordinates = u v w\n[target.metric]\nu u = 1\nv v = 1\nw w = 1\n[map]\nu = a\nv = b\nw = a\n"
    with pytest.raises(ModelFileError, match="exceeds source dimension"):
        parse_model(text)


def test_missing_map_component():
    text = BASE + "[target]\ncoordinates = u v\n[target.metric]\nu u = 1\nv v = 1\n[map]\nu = a\n"
    with pytest.raises(ModelFileError, match="missing components"):
        parse_model(text)


def test_partial_structure_rejected():
    with pytest.raises(ModelFileError, match="must appear together"):
        parse_model(BASE + "[source.xi]\nb = 1\n")


def test_bad_guard_key():
    text = fixture_text("example3").replace("target.spd", "elsewhere")
    with pytest.raises(ModelFileError, match="guard"):
        parse_model(text)


def test_sample_and_tolerance_blocks():
    m = parse_model(BASE + "[sample]\nlow = -0.5\nhigh = 0.5\npoints = 7\nseed = 3\n[tolerance]\nscale = 10\n")
    assert (m.sample.low, m.sample.high, m.sample.points, m.sample.seed) == (-0.5, 0.5, 7, 3)
    assert m.tol_scale == 10
    with pytest.raises(ModelFileError):
        parse_model(BASE + "[sample]\nlow = 1\nhigh = 0\n")
