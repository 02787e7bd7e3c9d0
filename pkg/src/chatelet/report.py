"""Report documents: a JSON form with integers as decimal strings, and a text form."""
from __future__ import annotations

import hashlib
import json
import sys
from fractions import Fraction

from . import __version__

SCHEMA = "chatelet-report/1"


def _plain(obj):
    """Recursively convert to JSON-native values; every number becomes a string."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [_plain(v) for v in items]
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def make_report(command: list, verdict: str, result: dict | None = None, spec=None,
                timings: dict | None = None, error: str | None = None) -> dict:
    doc = {
        "schema": SCHEMA,
        "command": list(command),
        "verdict": verdict,
        "result": result or {},
        "timings": timings or {},
        "versions": {"chatelet": __version__, "python": sys.version.split()[0]},
    }
    if spec is not None:
        doc["spec"] = {"a": spec.a, "factors": [list(f) for f in spec.factors],
                       "digest": spec.digest}
    if error is not None:
        doc["error"] = error
    return _plain(doc)


def emit_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def parse_json(text: str) -> dict:
    return json.loads(text)


def determinism_hash(doc: dict) -> str:
    """Digest of the machine form with the timings field removed."""
    stripped = {k: v for k, v in doc.items() if k != "timings"}
    return hashlib.sha256(emit_json(stripped).encode()).hexdigest()


def emit_text(doc: dict) -> str:
    lines = [f"verdict: {doc['verdict']}"]
    if "spec" in doc:
        lines.append(f"spec: a = {doc['spec']['a']}, factors = {doc['spec']['factors']}")
    if "error" in doc:
        lines.append(f"error: {doc['error']}")
    for key in sorted(doc.get("result", {})):
        lines.extend(_text_lines(key, doc["result"][key], 0))
    return "\n".join(lines) + "\n"


def _text_lines(key, value, depth):
    pad = "  " * depth
    if isinstance(value, dict):
        if not value:
            return [f"{pad}{key}: {{}}"]
        out = [f"{pad}{key}:"]
        for k in sorted(value):
            out.extend(_text_lines(k, value[k], depth + 1))
        return out
    if isinstance(value, list):
        flat = all(not isinstance(v, (dict, list)) for v in value)
        if flat or len(json.dumps(value)) <= 72:
            return [f"{pad}{key}: {_short(value)}"]
        out = [f"{pad}{key}:"]
        for v in value:
            out.extend(_text_lines("-", v, depth + 1))
        return out
    return [f"{pad}{key}: {value}"]


def _short(value) -> str:
    if isinstance(value, list):
        return "[" + ", ".join(_short(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_short(v)}" for k, v in sorted(value.items())) + "}"
    return "null" if value is None else str(value)
