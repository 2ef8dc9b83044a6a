"""JSON schemas for operators, multivectors, paravectors and reports.

Floats are written with 17 significant digits so every emitted value
re-parses to the same double; NaN and infinities become null.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .clifford import MAX_GENERATORS, Multivector, Paravector, blade_table
from .errors import DimensionError, SchemaError
from .operators import CliffordOperator


def _float(x: float) -> str:
    return format(x, ".17g") if math.isfinite(x) else "null"


def _encode(obj: Any, indent: int | None, level: int) -> str:
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if hasattr(obj, "to_json"):
        return _encode(obj.to_json(), indent, level)
    if isinstance(obj, dict):
        items = [(json.dumps(str(k)), _encode(v, indent, level + 1)) for k, v in obj.items()]
        if indent is None or not items:
            return "{" + ", ".join(f"{k}: {v}" for k, v in items) + "}"
        pad, end = "\n" + " " * (indent * (level + 1)), "\n" + " " * (indent * level)
        return "{" + ",".join(f"{pad}{k}: {v}" for k, v in items) + end + "}"
    if isinstance(obj, (list, tuple)):
        parts = [_encode(v, indent, level + 1) for v in obj]
        flat = all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj)
        if indent is None or flat or not parts:
            return "[" + ", ".join(parts) + "]"
        pad, end = "\n" + " " * (indent * (level + 1)), "\n" + " " * (indent * level)
        return "[" + ",".join(pad + p for p in parts) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int | None = 2) -> str:
    return _encode(obj, indent, 0)


def canonical(obj: Any) -> str:
    """Compact form with sorted keys, used for digests."""
    return dumps(_sorted(obj), None)


def _sorted(obj):
    if isinstance(obj, dict):
        return {k: _sorted(obj[k]) for k in sorted(obj, key=str)}
    if isinstance(obj, (list, tuple)):
        return [_sorted(v) for v in obj]
    if hasattr(obj, "to_json"):
        return _sorted(obj.to_json())
    return obj


def digest(obj: Any) -> str:
    return hashlib.sha256(canonical(obj).encode()).hexdigest()


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path} is not valid JSON: {exc}") from exc


# operators

def operator_to_json(T: CliffordOperator) -> dict:
    return {"kind": "operator", "n": T.n, "d": T.d, "entries": T.entries}


def operator_from_json(data: Any) -> CliffordOperator:
    """Accepts {"n", "d", "entries": d x d x 2^n} or {"n", "components": [T_0, ..., T_n]}.

    ``components`` may also be a mapping from index strings to matrices.
    """
    if not isinstance(data, dict):
        raise SchemaError("operator JSON must be an object")
    try:
        n = int(data["n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError("operator JSON needs an integer field 'n'") from exc
    if not 1 <= n <= MAX_GENERATORS:
        raise SchemaError(f"n must lie in 1..{MAX_GENERATORS}, got {n}")
    try:
        if "entries" in data:
            E = np.asarray(data["entries"], dtype=float)
            if E.ndim != 3 or E.shape[0] != E.shape[1] or E.shape[2] != blade_table(n).dim:
                raise SchemaError(f"entries must have shape (d, d, {1 << n}), got {E.shape}")
            T = CliffordOperator(n, E)
        elif "components" in data:
            comps = data["components"]
            if isinstance(comps, dict):
                comps = {int(k): np.asarray(v, dtype=float) for k, v in comps.items()}
            else:
                comps = [np.asarray(v, dtype=float) for v in comps]
            T = CliffordOperator.from_components(n, comps)
        else:
            raise SchemaError("operator JSON needs 'entries' or 'components'")
    except (TypeError, ValueError, DimensionError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"malformed operator: {exc}") from exc
    if "d" in data and int(data["d"]) != T.d:
        raise SchemaError(f"declared d = {data['d']} but entries have d = {T.d}")
    if not np.all(np.isfinite(T.entries)):
        raise SchemaError("operator entries must be finite")
    return T


def load_operator(path: str | Path) -> CliffordOperator:
    return operator_from_json(read_json(path))


def multivector_from_json(n: int, data: Any) -> Multivector:
    try:
        if isinstance(data, (int, float)):
            return Multivector.scalar(n, float(data))
        c = np.asarray(data, dtype=float)
        if c.shape != (1 << n,):
            raise SchemaError(f"multivector needs {1 << n} coefficients, got shape {c.shape}")
        return Multivector(n, c)
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"malformed multivector: {exc}") from exc


def paravector_from_json(data: Any) -> Paravector:
    try:
        return Paravector(float(data["s0"]), data["vec"])
    except (KeyError, TypeError, ValueError, DimensionError) as exc:
        raise SchemaError(f"malformed paravector: {exc}") from exc
