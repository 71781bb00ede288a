"""
JSON (de)serialization.

Complex numbers are written as ``[re, im]`` and matrices as row-major lists
of rows. Every document carries ``"schema": "bellkit/1"`` and a ``"kind"``.
Output floats use fixed-point notation with nine decimals (round half to
even), so identical inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path
from typing import Any

import jsonschema
import numpy as np

from .classical import LhvModel, Observable
from .errors import BellkitError
from .measurements import DiscretePovm, OutcomeSet
from .states import DensityOperator, SeparableRepresentation, Term

SCHEMA_TAG = "bellkit/1"
DECIMALS = 9
_QUANTUM = Decimal(1).scaleb(-DECIMALS)


class InputError(BellkitError):
    """A JSON document failed schema or semantic validation."""


def fixed(x: float) -> str:
    """Nine-decimal fixed-point text, round half to even, no negative zero."""
    if not math.isfinite(x):
        raise ValueError(f"cannot format non-finite value {x}")
    # round the shortest repr so that written halves (2.5e-9) go to even
    d = Decimal(repr(float(x))).quantize(_QUANTUM, rounding=ROUND_HALF_EVEN)
    if d == 0:
        d = abs(d)
    return f"{d:f}"


def dumps(obj: Any, indent: int = 2) -> str:
    """``json.dumps`` with fixed-point floats and insertion-ordered keys."""

    def emit(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, bool) or o is None or isinstance(o, str):
            return json.dumps(o)
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            return fixed(float(o))
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {emit(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple)):
            if not o:
                return "[]"
            if all(isinstance(v, (int, float, str, np.number)) for v in o):
                return "[" + ", ".join(emit(v, level) for v in o) + "]"
            return "[\n" + ",\n".join(pad + emit(v, level + 1) for v in o) + "\n" + end + "]"
        raise TypeError(f"cannot serialize {type(o).__name__}")

    return emit(obj, 0) + "\n"


# ---------------------------------------------------------------- schemas

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_MATRIX = {"type": "array", "minItems": 1, "items": {"type": "array", "minItems": 1, "items": _COMPLEX}}
_HEADER = {"schema": {"const": SCHEMA_TAG}}

SCHEMAS: dict[str, dict] = {
    "density": {
        "type": "object",
        "required": ["schema", "kind", "matrix"],
        "properties": {
            **_HEADER,
            "kind": {"const": "density"},
            "label": {"type": "string"},
            "factor_dims": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 2, "maxItems": 2},
            "matrix": _MATRIX,
        },
    },
    "representation": {
        "type": "object",
        "required": ["schema", "kind", "terms"],
        "properties": {
            **_HEADER,
            "kind": {"const": "representation"},
            "label": {"type": "string"},
            "symmetrized": {"type": "boolean"},
            "terms": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["weight", "left", "right"],
                    "properties": {"weight": {"type": "number"}, "left": _MATRIX, "right": _MATRIX},
                },
            },
        },
    },
    "povm": {
        "type": "object",
        "required": ["schema", "kind", "label", "outcomes", "effects"],
        "properties": {
            **_HEADER,
            "kind": {"const": "povm"},
            "label": {"type": "string"},
            "outcomes": {"type": "array", "minItems": 1, "items": {"type": "number"}},
            "bound": {"type": "number", "exclusiveMinimum": 0},
            "effects": {"type": "array", "minItems": 1, "items": _MATRIX},
        },
    },
    "lhv-model": {
        "type": "object",
        "required": ["schema", "kind", "points", "probabilities", "observables"],
        "properties": {
            **_HEADER,
            "kind": {"const": "lhv-model"},
            "points": {"type": "array", "minItems": 1, "items": {"type": "string"}},
            "probabilities": {"type": "array", "minItems": 1, "items": {"type": "number"}},
            "observables": {
                "type": "object",
                "minProperties": 1,
                "additionalProperties": {
                    "type": "object",
                    "required": ["values", "bound"],
                    "properties": {
                        "values": {"type": "array", "items": {"type": "number"}},
                        "bound": {"type": "number"},
                    },
                },
            },
        },
    },
    "sweep": {
        "type": "object",
        "required": ["schema", "kind", "target"],
        "properties": {
            **_HEADER,
            "kind": {"const": "sweep"},
            "target": {"enum": ["bell-original", "chsh", "quantum-analogue", "extended-chsh", "soundness"]},
            "resolution": {"type": "integer", "minimum": 2},
            "seed": {"type": "integer"},
            "sample_count": {"type": "integer", "minimum": 1},
            "gamma": {"type": "array", "items": {"type": "number"}, "minItems": 4, "maxItems": 4},
            "symmetrized": {"type": "boolean"},
            "retain": {"type": "integer", "minimum": 0},
            "state": {"type": ["object", "string"]},
        },
    },
    "report": {
        "type": "object",
        "required": ["name", "lhs", "rhs", "slack", "violated", "tol"],
        "properties": {
            "name": {"type": "string"},
            "lhs": {"type": "number"},
            "rhs": {"type": "number"},
            "slack": {"type": "number"},
            "violated": {"type": "boolean"},
            "tol": {"type": "number"},
            "inputs": {
                "type": "array",
                "items": {
                    "type": "object",
                    "properties": {
                        "state": {"type": "string"},
                        "settings": {"type": "array", "items": {"type": "string"}},
                        "symmetrized": {"type": "boolean"},
                        "value": {"type": "number"},
                    },
                },
            },
            "notes": {"type": "array", "items": {"type": "string"}},
        },
    },
}


def validate(doc: Any, kind: str) -> None:
    """Schema-check ``doc``; the error names the failing JSON path."""
    try:
        jsonschema.validate(doc, SCHEMAS[kind])
    except jsonschema.ValidationError as e:
        raise InputError(f"{kind} document invalid at {e.json_path}: {e.message}") from None


# ---------------------------------------------------------------- encoders


def matrix_to_json(m) -> list:
    a = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def matrix_from_json(rows) -> np.ndarray:
    a = np.array(rows, dtype=float)
    if a.ndim != 3 or a.shape[2] != 2:
        raise InputError(f"matrix must be rows of [re, im] pairs, got shape {a.shape}")
    return a[..., 0] + 1j * a[..., 1]


def density_to_json(rho: DensityOperator) -> dict:
    doc = {"schema": SCHEMA_TAG, "kind": "density", "label": rho.label}
    if rho.factor_dims is not None:
        doc["factor_dims"] = list(rho.factor_dims)
    doc["matrix"] = matrix_to_json(rho.matrix)
    return doc


def density_from_json(doc: dict) -> DensityOperator:
    validate(doc, "density")
    dims = doc.get("factor_dims")
    return DensityOperator(
        matrix_from_json(doc["matrix"]), tuple(dims) if dims else None, doc.get("label", "rho")
    )


def representation_to_json(rep: SeparableRepresentation) -> dict:
    return {
        "schema": SCHEMA_TAG,
        "kind": "representation",
        "label": rep.label,
        "symmetrized": rep.symmetrized,
        "terms": [
            {"weight": t.weight, "left": matrix_to_json(t.left.matrix), "right": matrix_to_json(t.right.matrix)}
            for t in rep.terms
        ],
    }


def representation_from_json(doc: dict) -> SeparableRepresentation:
    validate(doc, "representation")
    terms = tuple(
        Term(
            float(t["weight"]),
            DensityOperator(matrix_from_json(t["left"]), None, f"left[{i}]"),
            DensityOperator(matrix_from_json(t["right"]), None, f"right[{i}]"),
        )
        for i, t in enumerate(doc["terms"])
    )
    return SeparableRepresentation(terms, bool(doc.get("symmetrized", False)), doc.get("label", "rho_s"))


def povm_to_json(p: DiscretePovm) -> dict:
    return {
        "schema": SCHEMA_TAG,
        "kind": "povm",
        "label": p.label,
        "outcomes": list(p.outcomes.values),
        "bound": p.bound,
        "effects": [matrix_to_json(e) for e in p.effects],
    }


def povm_from_json(doc: dict) -> DiscretePovm:
    validate(doc, "povm")
    values = tuple(float(v) for v in doc["outcomes"])
    outcomes = OutcomeSet(values, doc["bound"]) if "bound" in doc else OutcomeSet.of(values)
    return DiscretePovm(doc["label"], outcomes, tuple(matrix_from_json(e) for e in doc["effects"]))


def model_to_json(m: LhvModel) -> dict:
    return {
        "schema": SCHEMA_TAG,
        "kind": "lhv-model",
        "points": list(m.theta_points),
        "probabilities": list(m.probabilities),
        "observables": {k: {"values": list(o.values), "bound": o.bound} for k, o in m.observables.items()},
    }


def model_from_json(doc: dict) -> LhvModel:
    validate(doc, "lhv-model")
    obs = {k: Observable(tuple(v["values"]), float(v["bound"])) for k, v in doc["observables"].items()}
    return LhvModel(tuple(doc["points"]), tuple(doc["probabilities"]), obs)


def state_from_json(doc: dict) -> DensityOperator | SeparableRepresentation:
    kind = doc.get("kind") if isinstance(doc, dict) else None
    if kind == "density":
        return density_from_json(doc)
    if kind == "representation":
        return representation_from_json(doc)
    raise InputError(f"state document at $.kind must be 'density' or 'representation', got {kind!r}")


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"{path} is not valid JSON: {e}") from None
