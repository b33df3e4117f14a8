import io
import json
import warnings

import numpy as np
import pytest

from stableproj.io import (
    MeasureFormatError,
    dumps_measure,
    format_number,
    load_measure,
    measure_from_dict,
    measure_to_dict,
    write_csv,
)
from stableproj.spectral import DiscreteSpectralMeasure


def doc(**over):
    base = {
        "alpha": 1.4,
        "representation": "A",
        "dim": 2,
        "atoms": [{"s": [1.0, 0.0], "w": 1.0}, {"s": [0.0, 1.0], "w": 0.5}],
        "shift": [0.3, -0.2],
    }
    base.update(over)
    return base


def test_round_trip():
    m = measure_from_dict(doc())
    assert measure_from_dict(json.loads(dumps_measure(m))) == m
    assert measure_to_dict(m) == doc()


def test_shift_defaults_to_zero():
    d = doc()
    del d["shift"]
    np.testing.assert_array_equal(measure_from_dict(d).shift, [0.0, 0.0])


def test_renormalisation_warns():
    d = doc(atoms=[{"s": [1.0 + 1e-10, 0.0], "w": 1.0}, {"s": [0.0, 1.0], "w": 1.0}])
    with pytest.warns(UserWarning, match="renormalised"):
        m = measure_from_dict(d)
    assert np.linalg.norm(m.points[0]) == pytest.approx(1.0, abs=1e-15)


def test_tiny_deviation_is_silent():
    d = doc(atoms=[{"s": [1.0 + 1e-13, 0.0], "w": 1.0}, {"s": [0.0, 1.0], "w": 1.0}])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        measure_from_dict(d)


@pytest.mark.parametrize("bad, field", [
    (doc(atoms=[{"s": [1.0 + 1e-6, 0.0], "w": 1.0}]), r"atoms\[0\]\.s"),
    (doc(atoms=[{"s": [1.0, 0.0], "w": -1.0}]), r"atoms\[0\]\.w"),
    (doc(atoms=[{"s": [1.0, 0.0, 0.0], "w": 1.0}]), r"atoms\[0\]\.s"),
    (doc(atoms=[{"s": [1.0, "x"], "w": 1.0}]), r"atoms\[0\]\.s\[1\]"),
    (doc(atoms=[{"w": 1.0}]), r"atoms\[0\]"),
    (doc(atoms=[]), "atoms"),
    (doc(alpha=2.5), "alpha"),
    (doc(alpha=True), "alpha"),
    (doc(representation="B"), "representation"),
    (doc(dim=1), "dim"),
    (doc(shift=[0.0]), "shift"),
    ({"alpha": 1.0}, "missing"),
    ([1, 2], "top level"),
])
def test_diagnostics(bad, field):
    with pytest.raises(MeasureFormatError, match=field):
        measure_from_dict(bad)


def test_json_syntax_error_location(tmp_path):
    p = tmp_path / "m.json"
    p.write_text('{\n  "alpha": 1.0,\n  "dim": 2,,\n}\n')
    with pytest.raises(MeasureFormatError, match="line 3, column"):
        load_measure(p)


def test_format_number():
    assert format_number(0.1) == "0.10000000000000001"
    assert float(format_number(1 / 3)) == 1 / 3
    assert format_number(3) == "3"
    assert format_number("AA") == "AA"


def test_csv_line_endings():
    buf = io.StringIO()
    write_csv(buf, ["a", "b"], [(1.5, "x"), (2.0, "y")])
    assert buf.getvalue() == "a,b\n1.5,x\n2,y\n"


def test_measure_equality_after_load(tmp_path):
    m = DiscreteSpectralMeasure([[0.6, 0.8], [0.0, -1.0]], [0.2, 0.9], 0.7, [1.0, 2.0], "M")
    p = tmp_path / "m.json"
    p.write_text(dumps_measure(m))
    assert load_measure(p) == m
