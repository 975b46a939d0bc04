"""Structure files, run configs and byte-deterministic CSV/JSON output.

Structure schema (JSON)::

    {"radii": [2.0, 1.5, 1.0],
     "layers": [{"mu": 1.4905, "eps": 1.09271}, {"mu": 0.27594, "eps": 1.6702}],
     "core": {"type": "neumann"}            # or {"type": "penetrable", "mu": .., "eps": ..}
     "background": {"mu": 1.0, "eps": 1.0}}

``core`` and ``background`` are optional.  Unknown keys are rejected.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from .errors import CloakforgeError, ConfigError
from .layered import LayeredStructure, Medium, NeumannCore, PenetrableCore

FLOAT_FMT = ".17g"


def _fail(where: str, msg: str):
    raise ConfigError(f"{where}: {msg}")


def check_keys(d, allowed, where: str, required=()):
    if not isinstance(d, dict):
        _fail(where, f"expected an object, got {type(d).__name__}")
    extra = sorted(set(d) - set(allowed))
    if extra:
        _fail(where, f"unknown key(s) {extra}; allowed: {sorted(allowed)}")
    missing = [k for k in required if k not in d]
    if missing:
        _fail(where, f"missing required key(s) {missing}")


def as_float(v, where: str, positive: bool = False) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        _fail(where, f"expected a number, got {v!r}")
    v = float(v)
    if not math.isfinite(v) or (positive and v <= 0):
        _fail(where, f"expected a finite{' positive' if positive else ''} number, got {v!r}")
    return v


def as_int(v, where: str, lo: int | None = None) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        _fail(where, f"expected an integer, got {v!r}")
    if lo is not None and v < lo:
        _fail(where, f"expected an integer >= {lo}, got {v}")
    return v


def as_float_list(v, where: str, positive: bool = False) -> list:
    if not isinstance(v, list) or not v:
        _fail(where, f"expected a non-empty list of numbers, got {v!r}")
    return [as_float(x, f"{where}[{i}]", positive) for i, x in enumerate(v)]


def _medium(d, where: str) -> Medium:
    check_keys(d, ("mu", "eps"), where, required=("mu", "eps"))
    return Medium(as_float(d["mu"], f"{where}.mu", True), as_float(d["eps"], f"{where}.eps", True))


def structure_from_dict(d, where: str = "structure") -> LayeredStructure:
    check_keys(d, ("radii", "layers", "core", "background"), where, required=("radii",))
    radii = as_float_list(d["radii"], f"{where}.radii", positive=True)
    raw_layers = d.get("layers", [])
    if not isinstance(raw_layers, list):
        _fail(f"{where}.layers", "expected a list")
    layers = tuple(_medium(m, f"{where}.layers[{i}]") for i, m in enumerate(raw_layers))
    core_d = d.get("core", {"type": "neumann"})
    check_keys(core_d, ("type", "mu", "eps"), f"{where}.core", required=("type",))
    kind = core_d["type"]
    if kind == "neumann":
        if set(core_d) - {"type"}:
            _fail(f"{where}.core", "a neumann core takes no material values")
        core = NeumannCore()
    elif kind == "penetrable":
        m = _medium({k: v for k, v in core_d.items() if k != "type"}, f"{where}.core")
        core = PenetrableCore(m.mu, m.eps)
    else:
        _fail(f"{where}.core.type", f"expected 'neumann' or 'penetrable', got {kind!r}")
    background = _medium(d["background"], f"{where}.background") if "background" in d else Medium(1.0, 1.0)
    try:
        return LayeredStructure(radii=tuple(radii), layers=layers, core=core, background=background)
    except CloakforgeError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def structure_to_dict(s: LayeredStructure) -> dict:
    if isinstance(s.core, PenetrableCore):
        core = {"type": "penetrable", "mu": s.core.mu, "eps": s.core.eps}
    else:
        core = {"type": "neumann"}
    return {
        "radii": list(s.radii),
        "layers": [{"mu": m.mu, "eps": m.eps} for m in s.layers],
        "core": core,
        "background": {"mu": s.background.mu, "eps": s.background.eps},
    }


def load_json(path) -> dict:
    """Parse a JSON file, reporting the line and column of syntax errors."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read ({exc.strerror})") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def resolve_structure(v, where: str, base: Path | None = None) -> LayeredStructure:
    """An inline structure object, or a path (relative to the config file) to one."""
    if isinstance(v, str):
        p = Path(v)
        if base is not None and not p.is_absolute():
            p = base / p
        return structure_from_dict(load_json(p), where=str(p))
    return structure_from_dict(v, where)


# --- deterministic output ------------------------------------------------------

def fmt(v) -> str:
    if hasattr(v, "item") and not isinstance(v, (str, bytes)):  # numpy scalar
        v = v.item()
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v + 0.0, FLOAT_FMT)  # + 0.0 folds -0.0 into 0
    return str(v)


def to_csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for v in row:
            s = fmt(v)
            if any(c in s for c in ',"\n'):
                s = '"' + s.replace('"', '""') + '"'
            cells.append(s)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _json(v, indent: int) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v + 0.0, FLOAT_FMT) if math.isfinite(v) else "null"
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=False)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {_json(x, indent + 1)}" for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(v, (list, tuple)):
        if not v:
            return "[]"
        if all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
            return "[" + ", ".join(_json(x, 0) for x in v) + "]"
        return "[\n" + ",\n".join(inner + _json(x, indent + 1) for x in v) + "\n" + pad + "]"
    if hasattr(v, "item"):  # numpy scalar
        return _json(v.item(), indent)
    raise TypeError(f"cannot serialize {type(v).__name__}")


def to_json(obj) -> str:
    """Fixed key order (insertion), floats at 17 significant digits, non-finite as null."""
    return _json(obj, 0) + "\n"


def write_text(path, text: str):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
