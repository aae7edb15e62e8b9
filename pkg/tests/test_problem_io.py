import json

import numpy as np
import pytest

import minsection as ms
from minsection.problem_io import ProblemFileError


def write_exp_fit_inputs(tmp_path, **overrides):
    t = np.arange(10.0)
    d = 2.0 * np.exp(-0.5 * t)
    lines = ["t,d"] + [f"{float(tk)!r},{float(dk)!r}" for tk, dk in zip(t, d)]
    (tmp_path / "obs.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    doc = {
        "dimension": 2,
        "split": {"x_indices": [0], "y_indices": [1]},
        "domain_box": [[-2.0, 0.5], [-5.0, 5.0]],
        "model": {
            "kind": "partially_linear",
            "basis": [{"type": "exponential", "rate_index": 0}],
        },
        "data_file": "obs.csv",
    }
    doc.update(overrides)
    path = tmp_path / "problem.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


def test_load_partially_linear(tmp_path):
    definition = ms.load_problem_file(write_exp_fit_inputs(tmp_path))
    assert definition.merit.structure == "partially_linear"
    assert definition.split == ms.ParameterSplit((0,), (1,))
    assert definition.merit([-0.5, 2.0]) == pytest.approx(0.0, abs=1e-20)


def test_load_catalog_problem(tmp_path):
    path = tmp_path / "quad.json"
    path.write_text(
        json.dumps({"dimension": 2, "model": {"kind": "catalog", "name": "QUAD"}}),
        encoding="utf-8",
    )
    definition = ms.load_problem_file(path)
    assert definition.name == "QUAD"
    assert definition.entry is not None
    assert definition.merit([1.0, 1.0]) == 2.0


def test_load_catalog_with_box_override(tmp_path):
    path = tmp_path / "quad.json"
    path.write_text(
        json.dumps(
            {
                "dimension": 2,
                "domain_box": [[-1.0, 1.0], [-1.0, 1.0]],
                "model": {"kind": "catalog", "name": "QUAD"},
            }
        ),
        encoding="utf-8",
    )
    definition = ms.load_problem_file(path)
    assert np.allclose(definition.merit.domain_box, [[-1.0, 1.0], [-1.0, 1.0]])


def test_basis_expression_set(tmp_path):
    t = np.linspace(0.0, 1.0, 8)
    d = 3.0 + 2.0 * t + 0.5 * np.sin(1.3 * t)
    lines = ["t,d"] + [f"{float(tk)!r},{float(dk)!r}" for tk, dk in zip(t, d)]
    (tmp_path / "obs.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    doc = {
        "dimension": 4,
        "model": {
            "kind": "partially_linear",
            "basis": [
                {"type": "constant"},
                {"type": "polynomial", "degree": 1},
                {"type": "sinusoid", "fn": "sin", "frequency_index": 0},
            ],
        },
        "data_file": "obs.csv",
    }
    path = tmp_path / "mix.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    definition = ms.load_problem_file(path)
    assert definition.merit.dimension == 4
    # generating parameters reproduce the data exactly
    assert definition.merit([1.3, 3.0, 2.0, 0.5]) == pytest.approx(0.0, abs=1e-18)


def test_offset_terms(tmp_path):
    t = np.arange(6.0)
    d = 5.0 * np.ones(6) + 2.0 * t
    lines = ["t,d"] + [f"{tk},{dk}" for tk, dk in zip(t, d)]
    (tmp_path / "obs.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    doc = {
        "dimension": 2,
        "model": {
            "kind": "partially_linear",
            "basis": [{"type": "constant"}],
            "offset": [{"type": "polynomial", "degree": 1, "scale": 2.0}],
        },
        "data_file": "obs.csv",
    }
    path = tmp_path / "offset.json"
    path.write_text(json.dumps(doc), encoding="utf-8")
    definition = ms.load_problem_file(path)
    assert definition.merit([0.0, 5.0]) == pytest.approx(0.0, abs=1e-20)


def test_missing_field_reported(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"model": {"kind": "catalog", "name": "QUAD"}}))
    with pytest.raises(ProblemFileError, match="dimension"):
        ms.load_problem_file(path)


def test_bad_json_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"dimension": 2,\n  "model": }')
    with pytest.raises(ProblemFileError, match="line 2"):
        ms.load_problem_file(path)


def test_unknown_model_kind(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dimension": 2, "model": {"kind": "magic"}}))
    with pytest.raises(ProblemFileError, match="model.kind"):
        ms.load_problem_file(path)


def test_unknown_basis_type(tmp_path):
    path = write_exp_fit_inputs(
        tmp_path, model={"kind": "partially_linear", "basis": [{"type": "spline"}]}
    )
    with pytest.raises(ProblemFileError, match=r"model.basis\[0\].type"):
        ms.load_problem_file(path)


def test_split_mismatch_reported(tmp_path):
    path = write_exp_fit_inputs(tmp_path, split={"x_indices": [0], "y_indices": [2]})
    with pytest.raises(ProblemFileError, match="split"):
        ms.load_problem_file(path)


def test_data_csv_header_enforced(tmp_path):
    (tmp_path / "obs.csv").write_text("time,obs\n0,1\n", encoding="utf-8")
    path = write_exp_fit_inputs(tmp_path)
    (tmp_path / "obs.csv").write_text("time,obs\n0,1\n", encoding="utf-8")
    with pytest.raises(ProblemFileError, match="expected header 't,d'"):
        ms.load_problem_file(path)


def test_data_csv_bad_cell_reports_line(tmp_path):
    (tmp_path / "data.csv").write_text("t,d\n0,1.0\n1,oops\n", encoding="utf-8")
    with pytest.raises(ProblemFileError, match="line 3"):
        ms.load_data_csv(tmp_path / "data.csv")


def test_data_csv_round_trip(tmp_path):
    (tmp_path / "data.csv").write_text("t,d\n0,1.5\n2,-0.25\n", encoding="utf-8")
    t, d = ms.load_data_csv(tmp_path / "data.csv")
    assert np.array_equal(t, [0.0, 2.0])
    assert np.array_equal(d, [1.5, -0.25])
