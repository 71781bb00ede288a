import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bellkit import serialization as ser
from bellkit.classical import random_model
from bellkit.errors import TraceNotOne
from bellkit.measurements import spin_observable
from bellkit.states import rho_zero, rho_zero_representation, same_state, assemble

from conftest import DATA


@pytest.mark.parametrize(
    "x, text",
    [
        (0.5, "0.500000000"),
        (-1e-12, "0.000000000"),
        (2.5e-9, "0.000000002"),
        (3.5e-9, "0.000000004"),
        (1.0, "1.000000000"),
        (-0.25, "-0.250000000"),
    ],
)
def test_fixed(x, text):
    assert ser.fixed(x) == text


@given(st.floats(-1e6, 1e6, allow_nan=False))
def test_fixed_parses_back(x):
    assert abs(float(ser.fixed(x)) - x) <= 5e-10 + 1e-15 * abs(x)


def test_dumps_is_valid_json():
    doc = {"a": [1.0, 2.0], "b": {"c": True, "d": None}, "e": [{"x": 1}], "f": "s"}
    assert json.loads(ser.dumps(doc)) == doc


def test_round_trips():
    rho = ser.density_from_json(json.loads(ser.dumps(ser.density_to_json(rho_zero()))))
    assert same_state(rho, rho_zero())
    assert rho.factor_dims == (2, 2)
    rep = ser.representation_from_json(ser.representation_to_json(rho_zero_representation(True)))
    assert rep.symmetrized and same_state(assemble(rep), rho_zero())
    p = ser.povm_from_json(ser.povm_to_json(spin_observable(0.4, "a")))
    assert p.label == "a" and p.bound == 1.0
    m = random_model(1, 3, {"A": 1.0})
    assert ser.model_from_json(ser.model_to_json(m)).probabilities == m.probabilities


def test_validation_names_json_path():
    doc = ser.density_to_json(rho_zero())
    doc["matrix"][1][2] = [0.0]
    with pytest.raises(ser.InputError, match=r"\$\.matrix\[1\]\[2\]"):
        ser.density_from_json(doc)


def test_semantic_validation_from_file():
    with pytest.raises(TraceNotOne):
        ser.state_from_json(ser.load_json(DATA / "bad_trace.json"))


def test_state_kind_dispatch():
    with pytest.raises(ser.InputError):
        ser.state_from_json({"kind": "povm"})


def test_load_json_errors(tmp_path):
    with pytest.raises(ser.InputError):
        ser.load_json(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ser.InputError):
        ser.load_json(bad)


def test_schemas_are_valid():
    import jsonschema

    for schema in ser.SCHEMAS.values():
        jsonschema.Draft202012Validator.check_schema(schema)


def test_canned_inputs_validate():
    for name in ("rho0.json", "rho0_rep_sym.json", "spin_a.json", "sweep_bell.json"):
        doc = ser.load_json(DATA / name)
        ser.validate(doc, doc["kind"] if doc["kind"] != "lhv-model" else "lhv-model")
    assert np.isclose(ser.povm_from_json(ser.load_json(DATA / "spin_b.json")).effects[0][0, 0], 0.75)
