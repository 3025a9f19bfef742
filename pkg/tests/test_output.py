import json

import numpy as np

from railyard import output
from railyard.frozen import CurveSample, ParametricCurve


def _curve():
    samples = [CurveSample(u, 0.1 * k, 0.3 * k, 1) for k, u in enumerate((-3.0, -2.0, -1.0))]
    samples += [CurveSample(u, 0.2 * k, -0.1 * k, 2) for k, u in enumerate((1.0, 2.0))]
    return ParametricCurve(samples, (0.0,))


def test_fmt():
    assert output.fmt(3) == "3"
    assert output.fmt("L+") == "L+"
    assert output.fmt(0.1) == "0.10000000000000001"
    assert output.fmt(np.float64(2.5)) == "2.5"


def test_csv_values_read_back_exactly(tmp_path):
    values = np.random.default_rng(0).normal(size=(20, 2))
    path = output.write_csv(tmp_path / "sub" / "t.csv", ("a", "b"), values)
    header, rows = output.read_csv(path)
    assert header == ["a", "b"]
    np.testing.assert_array_equal(np.array(rows, dtype=float), values)


def test_curve_rows():
    rows = output.curve_rows(_curve())
    assert rows[0] == (-3.0, 0.0, 0.0, 1, 1)
    assert output.CURVE_HEADER[:4] == ("u", "chi", "kappa", "branch")
    assert len(rows) == 5


def test_polylines_split_by_branch_and_clip():
    lines = output.polylines(_curve())
    assert [branch for branch, _ in lines] == [1, 2]
    assert lines[0][1] == [(0.0, 0.0), (0.3, 0.1), (0.6, 0.2)]
    clipped = output.polylines(_curve(), box=(0.0, 0.35, 0.0, 1.0))
    assert [len(pts) for _, pts in clipped] == [2]


def test_svg(tmp_path):
    path = output.write_svg(tmp_path / "c.svg", output.polylines(_curve()), title="demo")
    text = path.read_text()
    assert text.startswith("<?xml")
    assert text.count("<polyline") == 2
    assert "demo" in text
    empty = output.write_svg(tmp_path / "e.svg", [])
    assert "<polyline" not in empty.read_text()


def test_png_and_json(tmp_path):
    png = output.write_png(tmp_path / "c.png", output.polylines(_curve()))
    assert png.read_bytes()[:4] == b"\x89PNG"
    density = output.write_density_png(tmp_path / "d.png", [0.0, 1.0], [1.0, 0.0])
    assert density.exists()
    js = output.write_json(tmp_path / "s.json", {"b": 1, "a": [1.5]})
    assert json.loads(js.read_text()) == {"a": [1.5], "b": 1}


def test_svg_uses_chi_box(tmp_path):
    path = output.write_svg(tmp_path / "c.svg", output.polylines(_curve()), chi_range=(0.0, 1.0))
    text = path.read_text(encoding="utf-8")
    assert 'viewBox="0 0 600 600"' in text
    assert "χ ∈ [0, 1]" in text
