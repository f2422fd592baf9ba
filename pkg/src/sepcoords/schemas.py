"""JSON Schemas for every document the package emits."""

RATIONAL_STRING = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}

POLY = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["exponents", "numerator", "denominator"],
        "additionalProperties": False,
        "properties": {
            "exponents": {"type": "array", "items": {"type": "integer", "minimum": 0}},
            "numerator": {"type": "integer"},
            "denominator": {"type": "integer", "minimum": 1},
        },
    },
}

TREE = {
    "$defs": {
        "node": {
            "oneOf": [
                {"const": "L"},
                {"type": "array", "minItems": 2, "items": {"$ref": "#/$defs/node"}},
            ]
        }
    },
    "$ref": "#/$defs/node",
}

LABELED_TREE = {
    "$defs": {
        "node": {
            "oneOf": [
                {"const": "L"},
                {
                    "type": "object",
                    "required": ["children", "params"],
                    "additionalProperties": False,
                    "properties": {
                        "children": {"type": "array", "minItems": 2, "items": {"$ref": "#/$defs/node"}},
                        "params": {
                            "type": "array",
                            "minItems": 2,
                            "items": {"oneOf": [{"type": "number"}, RATIONAL_STRING]},
                        },
                    },
                },
            ]
        }
    },
    "$ref": "#/$defs/node",
}

SPAN = {
    "type": "object",
    "required": ["N", "basis"],
    "additionalProperties": False,
    "properties": {
        "N": {"type": "integer", "minimum": 1},
        "basis": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["i", "j", "coeff_num", "coeff_den"],
                    "additionalProperties": False,
                    "properties": {
                        "i": {"type": "integer", "minimum": 1},
                        "j": {"type": "integer", "minimum": 2},
                        "coeff_num": {"type": "integer"},
                        "coeff_den": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
    },
}

_PAIRS = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}}

SPAN_REPORT = {
    "type": "object",
    "required": [
        "N", "dimension", "rank", "expected_rank", "poisson_commute",
        "commutator_commute", "metric_member", "poisson_failures",
        "commutator_failures", "status",
    ],
    "additionalProperties": False,
    "properties": {
        "N": {"type": "integer"},
        "dimension": {"type": "integer"},
        "rank": {"type": "integer"},
        "expected_rank": {"type": "integer"},
        "poisson_commute": {"type": "boolean"},
        "commutator_commute": {"type": "boolean"},
        "metric_member": {"type": "boolean"},
        "poisson_failures": _PAIRS,
        "commutator_failures": _PAIRS,
        "status": {"enum": ["pass", "fail"]},
    },
}

RELATION_REPORT = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["relation", "indices", "status", "residual_term_count"],
        "additionalProperties": False,
        "properties": {
            "relation": {"enum": ["disjoint", "overlapping"]},
            "indices": {"type": "array", "items": {"type": "integer"}, "minItems": 3, "maxItems": 4},
            "status": {"enum": ["pass", "fail"]},
            "residual_term_count": {"type": "integer", "minimum": 0},
        },
    },
}

ENUMERATION = {
    "type": "object",
    "required": ["sphere", "leaves", "counts", "total"],
    "properties": {
        "sphere": {"type": "integer"},
        "leaves": {"type": "integer"},
        "counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "total": {"type": "integer"},
        "bruteforce": {
            "type": "object",
            "required": ["counts", "total"],
            "properties": {
                "counts": {"type": "array", "items": {"type": "integer"}},
                "total": {"type": "integer"},
            },
        },
        "agree": {"type": "boolean"},
    },
    "additionalProperties": False,
}

COORDS = {
    "type": "object",
    "required": ["coords"],
    "additionalProperties": False,
    "properties": {
        "coords": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["path", "values"],
                "additionalProperties": False,
                "properties": {
                    "path": {"type": "array", "items": {"type": "integer", "minimum": 0}},
                    "values": {"type": "array", "items": {"type": "number"}},
                },
            },
        }
    },
}

POINT = {
    "type": "object",
    "required": ["x"],
    "additionalProperties": False,
    "properties": {"x": {"type": "array", "items": {"type": "number"}}},
}

NUMERIC_CHECK = {
    "type": "object",
    "required": ["samples", "tolerance", "status"],
    "properties": {
        "samples": {"type": "integer"},
        "max_error": {"type": "number"},
        "max_offdiag": {"type": "number"},
        "tolerance": {"type": "number"},
        "status": {"enum": ["pass", "fail"]},
    },
    "additionalProperties": False,
}
