"""JSON Schemas for everything the CLI prints with --format json."""

from __future__ import annotations

_CHART = {"type": "object", "required": ["n", "k"],
          "properties": {"n": {"type": "integer", "minimum": 1}, "k": {"type": "integer", "minimum": 1}}}

_FACTOR = {"type": "array", "prefixItems": [{"type": "array", "items": {"type": "integer"}},
                                            {"type": "integer", "minimum": 1},
                                            {"type": "integer", "minimum": 1}],
           "minItems": 3, "maxItems": 3}

ELEMENT = {
    "type": "object",
    "required": ["kind", "chart", "terms"],
    "properties": {
        "kind": {"enum": ["form", "polyvector"]},
        "chart": _CHART,
        "text": {"type": "string"},
        "terms": {"type": "array", "items": {
            "type": "object", "required": ["coeff", "factors"],
            "properties": {"coeff": {"type": "string"},
                           "factors": {"type": "array", "items": _FACTOR},
                           "wedge": {"type": "array", "items": _FACTOR}}}},
    },
}

TENSOR = {
    "oneOf": [
        {"type": "array", "items": {"type": "array", "items": {"type": ["string", "integer"]}}},
        {"type": "object", "required": ["entries"],
         "properties": {"entries": {"type": "array", "items": {"type": "array"}}}},
    ]
}

DIFFOP = {
    "type": "object",
    "required": ["kind", "chart", "text", "terms"],
    "properties": {
        "kind": {"const": "diffop"},
        "chart": _CHART,
        "text": {"type": "string"},
        "terms": {"type": "array", "items": {
            "type": "object", "required": ["coeff", "form", "ops", "contract"],
            "properties": {"coeff": {"type": "string"},
                           "form": {"type": "array", "items": _FACTOR},
                           "ops": {"type": "array", "items": _FACTOR},
                           "contract": {"type": "array", "items": _FACTOR}}}},
    },
}

HOMOLOGY = {
    "type": "object",
    "required": ["params", "dims", "witnesses"],
    "properties": {
        "params": {"type": "object", "required": ["n", "k"]},
        "dims": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "witnesses": {"type": "array", "items": {"type": "string"}},
    },
}

TRACE = {
    "type": "object",
    "required": ["trace", "diagonal_sum", "tensor"],
    "properties": {"trace": {"type": "string"}, "diagonal_sum": {"type": "string"},
                   "tensor": {"type": "object"}},
}

CHECK = {
    "type": "object",
    "required": ["passed", "suites"],
    "properties": {
        "passed": {"type": "boolean"},
        "seed": {"type": "integer"},
        "suites": {"type": "array", "items": {
            "type": "object", "required": ["suite", "passed", "cases", "failures"],
            "properties": {"suite": {"type": "string"}, "passed": {"type": "boolean"},
                           "cases": {"type": "integer", "minimum": 0},
                           "failures": {"type": "array", "items": {"type": "string"}}}}},
    },
}

ERROR = {
    "type": "object",
    "required": ["error"],
    "properties": {"error": {"type": "object", "required": ["type", "message", "exit_code"],
                             "properties": {"type": {"type": "string"}, "message": {"type": "string"},
                                            "exit_code": {"enum": [1, 2, 3]}}}},
}

BY_COMMAND = {
    "eval": ELEMENT,
    "d": ELEMENT,
    "hatd": ELEMENT,
    "trace": TRACE,
    "berezinian": DIFFOP,
    "homology": HOMOLOGY,
    "cohomology-window": HOMOLOGY,
    "check": CHECK,
}
