"""Run configuration: JSON parsing with field-level diagnostics."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .curve import CurveModel, fermat_quartic, make_hyperelliptic, make_plane_quartic
from .errors import ConfigInvalid, RHMapError
from .integrate import IntegratorConfig
from .path import LoopPath, compose, default_base, invert, make_loop, pair_loop
from .serialize import parse_complex, parse_gaussian
from .transport import ConnectionForm

COMMANDS = ("monodromy", "derivative", "injectivity", "rauch-scan", "noether-scan", "selftest")
ENV_PREFIX = "RHMAP_"

_REQUIRED = {
    "monodromy": ("curve", "connection", "loops"),
    "derivative": ("curve", "connection", "direction", "loops"),
    "injectivity": ("curve", "connection"),
    "rauch-scan": ("genus",),
    "noether-scan": (),
    "selftest": (),
}


@dataclass
class RunConfig:
    command: str
    raw: dict
    curve: CurveModel | None = None
    connection: ConnectionForm | None = None
    direction: ConnectionForm | None = None
    loops: list = field(default_factory=list)
    cfg: IntegratorConfig = field(default_factory=IntegratorConfig)
    eps: float = 1e-4
    seed: int = 1
    mode: str = "exact"
    genus: int | None = None
    trials: int = 20
    out: str | None = None
    svg: str | None = None


def parse_curve(data: Any) -> CurveModel:
    if not isinstance(data, dict):
        raise ValueError("must be an object")
    kind = data.get("kind", "hyperelliptic")
    if kind == "hyperelliptic":
        return make_hyperelliptic([parse_complex(c) for c in data["coeffs"]])
    if kind == "fermat":
        return fermat_quartic()
    if kind == "quartic":
        terms = {}
        for t in data["terms"]:
            terms[(int(t[0]), int(t[1]))] = parse_complex(t[2])
        return make_plane_quartic(terms)
    raise ValueError(f"unknown curve kind {kind!r}")


def parse_connection(data: Any, curve: CurveModel) -> ConnectionForm:
    if not isinstance(data, dict):
        raise ValueError("must be an object with alpha, beta, gamma")
    entries = []
    for name in ("alpha", "beta", "gamma"):
        if name not in data:
            raise ValueError(f"missing entry {name!r}")
        entries.append([parse_gaussian(c) for c in data[name]])
    return ConnectionForm.from_coeffs(curve, *entries)


def parse_loops(data: Any, curve: CurveModel) -> list[LoopPath]:
    """Loops may refer to earlier ones by label for ``compose`` / ``invert``."""
    if not isinstance(data, list) or not data:
        raise ValueError("must be a non-empty list")
    by_label: dict[str, LoopPath] = {}
    out = []
    for k, item in enumerate(data):
        kind = item.get("type")
        sheet = int(item.get("sheet", 1))
        label = item.get("label")
        if kind == "pair":
            base = parse_complex(item["base"]) if "base" in item else default_base(curve)
            lp = pair_loop(curve, int(item["i"]), int(item["j"]), base, sheet,
                           label or f"pair({item['i']},{item['j']})")
        elif kind == "polyline":
            verts = [parse_complex(v) for v in item["vertices"]]
            lp = make_loop(curve, verts, sheet, label or f"loop{k}")
        elif kind == "compose":
            lp = compose([by_label[name] for name in item["of"]], label)
        elif kind == "invert":
            lp = invert(by_label[item["of"]], label)
        else:
            raise ValueError(f"loop {k}: unknown type {kind!r}")
        if lp.label in by_label:
            raise ValueError(f"duplicate loop label {lp.label!r}")
        by_label[lp.label] = lp
        out.append(lp)
    return out


def _field(errors, name, fn, *args):
    try:
        return fn(*args)
    except (RHMapError, ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        errors[name] = str(exc) or type(exc).__name__
        return None


def build_run_config(raw: dict, overrides: dict | None = None) -> RunConfig:
    """Validate a config dict; ``overrides`` (from flags / env) take precedence."""
    raw = dict(raw)
    for k, v in (overrides or {}).items():
        if v is not None:
            raw[k] = v
    errors: dict[str, str] = {}
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigInvalid({"command": f"must be one of {', '.join(COMMANDS)}"})
    for name in _REQUIRED[command]:
        if name not in raw:
            errors[name] = f"required for command {command!r}"
    if errors:
        raise ConfigInvalid(errors)

    rc = RunConfig(command=command, raw=raw)
    tol = raw.get("tolerances", {})
    rc.cfg = _field(errors, "tolerances", lambda: IntegratorConfig(
        rel_tol=float(raw.get("rel_tol", tol.get("rel_tol", 1e-12))),
        abs_tol=float(tol.get("abs_tol", 1e-14)),
        max_steps=int(tol.get("max_steps", 1_000_000)),
    )) or IntegratorConfig()
    rc.eps = _field(errors, "tolerances.eps", float, tol.get("eps", 1e-4))
    if rc.eps is not None and not 1e-6 <= rc.eps <= 1e-2:
        errors["tolerances.eps"] = "must lie in [1e-6, 1e-2]"
    rc.seed = _field(errors, "seed", int, raw.get("seed", 1))
    if rc.seed is not None and not 0 <= rc.seed < 2**64:
        errors["seed"] = "must be an unsigned 64-bit integer"
    rc.mode = raw.get("mode", "exact")
    if rc.mode not in ("exact", "float"):
        errors["mode"] = "must be 'exact' or 'float'"
    rc.trials = _field(errors, "trials", int, raw.get("trials", 20))
    if rc.trials is not None and rc.trials < 0:
        errors["trials"] = "must be non-negative"
    if "genus" in raw:
        rc.genus = _field(errors, "genus", int, raw["genus"])
    rc.out = raw.get("out")
    rc.svg = raw.get("svg")

    if "curve" in raw:
        rc.curve = _field(errors, "curve", parse_curve, raw["curve"])
    elif command == "noether-scan":
        rc.curve = fermat_quartic()
    if rc.curve is not None:
        if "connection" in raw:
            rc.connection = _field(errors, "connection", parse_connection, raw["connection"], rc.curve)
        if "direction" in raw:
            rc.direction = _field(errors, "direction", parse_connection, raw["direction"], rc.curve)
        if "loops" in raw:
            if not rc.curve.is_hyperelliptic:
                errors["loops"] = "loops need a hyperelliptic curve"
            else:
                rc.loops = _field(errors, "loops", parse_loops, raw["loops"], rc.curve) or []
    if errors:
        raise ConfigInvalid(errors)
    return rc


def load_config(path: str | Path) -> dict:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigInvalid({"config": str(exc)}) from None
    if not isinstance(data, dict):
        raise ConfigInvalid({"config": "top level must be a JSON object"})
    return data
