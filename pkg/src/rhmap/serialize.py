"""JSON encodings: complex numbers as [re, im] pairs, exact values as decimal strings."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .exact import GaussianRational
from .integrate import IntegratorConfig
from .transport import MonodromyResult


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise TypeError("boolean is not a number")
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, (int, str)):
        return Fraction(value.strip() if isinstance(value, str) else value)
    raise TypeError(f"not a number: {value!r}")


def parse_gaussian(value) -> GaussianRational:
    """Accepts ``[re, im]`` (decimal strings or numbers) or a single real value."""
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex values must be [re, im] pairs")
        return GaussianRational(parse_rational(value[0]), parse_rational(value[1]))
    return GaussianRational(parse_rational(value))


def parse_complex(value) -> complex:
    return complex(parse_gaussian(value))


def complex_json(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def matrix_json(m) -> list:
    m = np.asarray(m)
    return [[complex_json(v) for v in row] for row in m]


def matrix_from_json(data) -> np.ndarray:
    return np.array([[complex(v[0], v[1]) for v in row] for row in data], dtype=complex)


def config_json(cfg: IntegratorConfig) -> dict:
    return {"rel_tol": cfg.rel_tol, "abs_tol": cfg.abs_tol, "max_steps": cfg.max_steps}


def monodromy_json(res: MonodromyResult) -> dict:
    loop = res.loop
    return {
        "label": loop.label,
        "loop_hash": loop.digest(),
        "basepoint": complex_json(loop.base_point),
        "sheet": loop.start_sheet,
        "winding": list(loop.winding),
        "clearance": loop.clearance,
        "matrix": matrix_json(res.matrix),
        "det_defect": res.det_defect,
        "err_estimate": res.err_estimate,
        "cfg": config_json(res.cfg),
    }


def cocycle_json(eta) -> dict:
    return {
        "basepoint": complex_json(eta.basepoint),
        "sheet": eta.sheet,
        "loops": {k: {"eta": matrix_json(v), "rho": matrix_json(eta.rho[k])} for k, v in eta.values.items()},
    }


def cocycle_from_json(data):
    from .cohomology import Cocycle

    values = {k: matrix_from_json(v["eta"]) for k, v in data["loops"].items()}
    rho = {k: matrix_from_json(v["rho"]) for k, v in data["loops"].items()}
    bp = data.get("basepoint", [0, 0])
    return Cocycle(values, rho, complex(bp[0], bp[1]), data.get("sheet", 1))
