"""JSON Schemas for state files and for the ``--json`` output of each command."""

from __future__ import annotations

import json
from pathlib import Path

from .serialize import STATE_FILE_SCHEMA

_num = {"type": "number"}
_prob = {"type": "number", "minimum": 0, "maximum": 1}
_fid = {"type": "number", "minimum": 0, "maximum": 1}
_pair = {"type": "array", "items": _num, "minItems": 2, "maxItems": 2}
_vector = {"type": "array", "items": _pair}
_matrix = {"type": "array", "items": _vector}
_digest = {"type": "string", "pattern": "^[0-9a-f]{64}$"}

_oracle = {
    "type": "object",
    "required": ["probability_delta", "fidelity_defect", "tol", "passed"],
    "properties": {
        "probability_delta": {"type": "number", "minimum": 0},
        "fidelity_defect": _num,
        "tol": {"type": "number", "exclusiveMinimum": 0},
        "passed": {"type": "boolean"},
        "probability": _prob,
    },
    "additionalProperties": False,
}


def _report(command: str, props: dict) -> dict:
    props = {"command": {"const": command}, "wall_time_s": {"type": "number", "minimum": 0}, **props}
    return {
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "title": f"RunReport[{command}]",
        "type": "object",
        "required": sorted(props),
        "properties": props,
        "additionalProperties": False,
    }


REPORT_SCHEMAS = {
    "teleport": _report(
        "teleport",
        {
            "inputs": {
                "type": "object",
                "required": ["shared", "outcome", "input"],
                "properties": {"shared": _digest, "outcome": _digest, "input": _digest},
            },
            "probability": _prob,
            "fidelity_raw": _fid,
            "fidelity_corrected": {"oneOf": [_fid, {"type": "null"}]},
            "linear": {"type": "boolean"},
            "reversible": {"type": "boolean"},
            "matching": {"type": "boolean"},
            "recovery_unitary": {"oneOf": [_matrix, {"type": "null"}]},
            "output_state": {"oneOf": [_vector, _matrix]},
            "oracle": {"oneOf": [_oracle, {"type": "null"}]},
        },
    ),
    "match": _report(
        "match",
        {
            "inputs": {"type": "object", "required": ["shared"], "properties": {"shared": _digest}},
            "dim": {"type": "integer", "minimum": 1},
            "probability": _prob,
            "outcomes": {
                "type": "array",
                "minItems": 1,
                "items": {
                    "type": "object",
                    "required": ["outcome_file", "recovery_file", "member"],
                    "properties": {
                        "outcome_file": {"type": "string"},
                        "recovery_file": {"type": "string"},
                        "member": {"type": "boolean"},
                    },
                },
            },
            "all_members": {"type": "boolean"},
            "orbit_check": {"type": "boolean"},
            "seed": {"type": "integer"},
        },
    ),
    "bell": _report(
        "bell",
        {
            "dim": {"type": "integer", "minimum": 2, "maximum": 8},
            "files": {"type": "array", "items": {"type": "string"}},
            "gram_defect": {"type": "number", "minimum": 0},
            "all_maximally_entangled": {"type": "boolean"},
        },
    ),
    "oracle-check": _report(
        "oracle-check",
        {
            "n_trials": {"type": "integer", "minimum": 0},
            "dim": {"type": "integer", "minimum": 1},
            "seed": {"type": "integer"},
            "skipped_zero_probability": {"type": "integer", "minimum": 0},
            "max_probability_delta": {"type": "number", "minimum": 0},
            "max_fidelity_defect": _num,
            "tol": {"type": "number"},
            "passed": {"type": "boolean"},
        },
    ),
    "example": _report(
        "example",
        {
            "alphas": _vector,
            "shared_operator": _matrix,
            "matching_outcome": _matrix,
            "success_probability": _prob,
            "probability": _prob,
            "matching": {"type": "boolean"},
            "fidelity_raw": _fid,
            "fidelity_corrected": {"oneOf": [_fid, {"type": "null"}]},
            "oracle": _oracle,
            "seed": {"type": "integer"},
        },
    ),
}


def export(directory) -> list[Path]:
    """Write every schema as ``<name>.schema.json`` into ``directory``."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, schema in {"state_file": STATE_FILE_SCHEMA, **{f"report_{k}": v for k, v in REPORT_SCHEMAS.items()}}.items():
        path = out / f"{name.replace('-', '_')}.schema.json"
        path.write_text(json.dumps(schema, indent=2) + "\n")
        written.append(path)
    return written
