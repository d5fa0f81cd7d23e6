"""State file reading and writing.

A state file is a UTF-8 JSON document with exactly one of two shapes::

    {"hbar": 1.0, "levels": [{"energy": -1.0, "re": 0.7071, "im": 0.0}, ...]}
    {"hbar": 1.0, "nodes":  [{"energy": 0.25, "weight": 0.5}, ...]}

Unknown keys are rejected. A machine-readable analysis report (see
:mod:`orthotime.report`) embeds its input under ``"state"`` and is accepted
wherever a state file is.
"""

from __future__ import annotations

import json
import math
from numbers import Real
from pathlib import Path

from .exceptions import ParseError
from .spectral_state import DiscreteSpectralState, QuadratureSpectralState, SpectralState

REPORT_KIND = "orthotime.analysis"

_LEVEL_KEYS = {"energy", "re", "im"}
_NODE_KEYS = {"energy", "weight"}


def reject_json_constant(name):
    raise ParseError(f"non-standard JSON constant {name}")


def _number(entry: dict, key: str, where: str) -> float:
    value = entry[key]
    if isinstance(value, bool) or not isinstance(value, Real):
        raise ParseError(f"{where}.{key} must be a number, got {value!r}")
    return float(value)


def _entries(doc: dict, key: str, allowed: set[str], required: set[str]) -> list[dict]:
    items = doc[key]
    if not isinstance(items, list) or not items:
        raise ParseError(f"'{key}' must be a non-empty list")
    for i, item in enumerate(items):
        if not isinstance(item, dict):
            raise ParseError(f"{key}[{i}] must be an object")
        extra = set(item) - allowed
        if extra:
            raise ParseError(f"{key}[{i}] has unknown fields {sorted(extra)}")
        missing = required - set(item)
        if missing:
            raise ParseError(f"{key}[{i}] is missing {sorted(missing)}")
    return items


def state_from_dict(doc) -> SpectralState:
    """Build a state from a parsed document; schema errors raise :class:`ParseError`.

    Physical invariant breaches (non-positive ``hbar``, zero norm, negative
    weights, ...) surface as :class:`~orthotime.exceptions.ValidationError`.
    """
    if not isinstance(doc, dict):
        raise ParseError("state document must be a JSON object")
    if doc.get("kind") == REPORT_KIND:
        return state_from_dict(doc.get("state"))
    extra = set(doc) - {"hbar", "levels", "nodes"}
    if extra:
        raise ParseError(f"unknown top-level fields {sorted(extra)}")
    if "hbar" not in doc:
        raise ParseError("missing 'hbar'")
    if ("levels" in doc) == ("nodes" in doc):
        raise ParseError("exactly one of 'levels' or 'nodes' is required")
    hbar = _number(doc, "hbar", "state")
    if "levels" in doc:
        items = _entries(doc, "levels", _LEVEL_KEYS, {"energy", "re"})
        energies = [_number(it, "energy", f"levels[{i}]") for i, it in enumerate(items)]
        amps = [complex(_number(it, "re", f"levels[{i}]"),
                        _number(it, "im", f"levels[{i}]") if "im" in it else 0.0)
                for i, it in enumerate(items)]
        return DiscreteSpectralState(hbar, energies, amps)
    items = _entries(doc, "nodes", _NODE_KEYS, _NODE_KEYS)
    energies = [_number(it, "energy", f"nodes[{i}]") for i, it in enumerate(items)]
    weights = [_number(it, "weight", f"nodes[{i}]") for i, it in enumerate(items)]
    return QuadratureSpectralState(hbar, energies, weights)


def loads_state(text: str) -> SpectralState:
    try:
        doc = json.loads(text, parse_constant=reject_json_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return state_from_dict(doc)


def load_state(path) -> SpectralState:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return loads_state(text)


def state_to_dict(state: SpectralState) -> dict:
    if isinstance(state, DiscreteSpectralState):
        return {"hbar": state.hbar,
                "levels": [{"energy": float(e), "re": float(c.real), "im": float(c.imag)}
                           for e, c in zip(state.energies, state.amplitudes)]}
    return {"hbar": state.hbar,
            "nodes": [{"energy": float(e), "weight": float(w)}
                      for e, w in zip(state.energies, state.weights)]}


def dump_state(state: SpectralState, path) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state), indent=2) + "\n", encoding="utf-8")


def fmt_machine(x) -> str:
    """17 significant digits; ``inf`` spelled ``Infinite``; ``None`` empty."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    x = float(x)
    if math.isinf(x):
        return "Infinite" if x > 0 else "-Infinite"
    return f"{x:.17g}"


def fmt_human(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, bool):
        return "yes" if x else "no"
    x = float(x)
    if math.isinf(x):
        return "Infinite"
    return f"{x:.6g}"
