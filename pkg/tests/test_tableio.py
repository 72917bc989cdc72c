"""CSV emission: formatting, quoting, atomicity, round trips."""

import json
import os

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from acfshape import tableio


def test_format_cell_rules():
    assert tableio.format_cell(None) == ""
    assert tableio.format_cell("text") == "text"
    assert tableio.format_cell(True) == "true"
    assert tableio.format_cell(7) == "7"
    assert tableio.format_cell(0.1) == "0.1"
    assert tableio.format_cell(np.float64(1.0 / 3.0)) == repr(1.0 / 3.0)
    with pytest.raises(ValueError, match="non-finite"):
        tableio.format_cell(float("nan"))
    with pytest.raises(ValueError, match="non-finite"):
        tableio.format_cell(float("inf"))


def test_emit_and_read_back(tmp_path):
    path = tmp_path / "t.csv"
    tableio.emit_csv(path, ["a", "b"], [[1, 0.5], [2, None]])
    header, rows = tableio.read_csv(path)
    assert header == ["a", "b"]
    assert rows == [["1", "0.5"], ["2", ""]]
    raw = path.read_bytes()
    assert raw == b"a,b\n1,0.5\n2,\n"


def test_header_only_table(tmp_path):
    path = tmp_path / "empty.csv"
    tableio.emit_csv(path, ["x", "y"], [])
    assert path.read_text() == "x,y\n"


def test_quoting_of_awkward_strings(tmp_path):
    path = tmp_path / "q.csv"
    tableio.emit_csv(path, ["name"], [['with,comma'], ['say "hi"']])
    header, rows = tableio.read_csv(path)
    assert rows == [['with,comma'], ['say "hi"']]
    assert b'"with,comma"' in path.read_bytes()


def test_width_mismatch_rejected(tmp_path):
    with pytest.raises(ValueError, match="width"):
        tableio.emit_csv(tmp_path / "w.csv", ["a", "b"], [[1]])


def test_nan_rejected_and_no_partial_file(tmp_path):
    path = tmp_path / "bad.csv"
    with pytest.raises(ValueError, match="non-finite"):
        tableio.emit_csv(path, ["v"], [[float("nan")]])
    assert not path.exists()
    assert [p for p in os.listdir(tmp_path) if p.endswith(".part")] == []


def test_manifest_sidecar(tmp_path):
    path = tmp_path / "data.csv"
    tableio.emit_csv(path, ["v"], [[1]])
    tableio.write_manifest(path, "acf-theory", {"n": 8}, seed=3, wall_time_s=0.25)
    sidecar = tmp_path / "data.csv.manifest.json"
    assert str(sidecar) == tableio.manifest_path(path)
    payload = json.loads(sidecar.read_text())
    assert payload["command"] == "acf-theory"
    assert payload["parameters"] == {"n": 8}
    assert payload["seed"] == 3
    assert payload["wall_time_s"] == 0.25
    assert "version" in payload


@settings(max_examples=200, deadline=None)
@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_float_round_trip_property(value):
    assert float(tableio.format_cell(value)) == value
