"""Canonical machine-readable rendering and small text-format helpers.

The JSON form is deterministic: floats are rounded to 12 significant digits
before serialization, keys are sorted, and containers are normalized to
plain lists and dicts, so identical inputs yield byte-identical output.
"""

from __future__ import annotations

import json
import math

import numpy as np

__all__ = [
    "canonical",
    "render_json",
    "format_complex",
    "format_set",
]


def canonical(value):
    """Normalize a report value tree for deterministic JSON output.

    Floats are rounded to 12 significant digits (nonfinite values become the
    strings "inf", "-inf", "nan"), complex numbers become [re, im] pairs, and
    numpy scalars and arrays become Python scalars and lists.
    """
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(f"{value:.12g}")
    if isinstance(value, (complex, np.complexfloating)):
        return [canonical(value.real), canonical(value.imag)]
    if isinstance(value, np.ndarray):
        return [canonical(item) for item in value.tolist()]
    if isinstance(value, dict):
        return {str(key): canonical(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [canonical(item) for item in value]
    if value is None or isinstance(value, str):
        return value
    return str(value)


def render_json(report: dict) -> str:
    """Serialize a report dict to the canonical JSON text."""
    return json.dumps(canonical(report), sort_keys=True, indent=2) + "\n"


def format_complex(value: complex) -> str:
    return f"{value.real:.6f}{value.imag:+.6f}i"


def format_set(values) -> str:
    inner = ", ".join(f"{v:.6f}" for v in values)
    return "{ " + inner + " }" if inner else "{ }"
