"""Command-line entry point.

    rhmap [COMMAND] --config run.json [--out report.json] [--svg loops.svg]
          [--seed N] [--mode exact|float] [--rel-tol X]

Every flag can also be given through an environment variable RHMAP_<FLAG>
(e.g. RHMAP_SEED, RHMAP_REL_TOL); flags win over the environment, which wins
over the config file.  Exit codes: 0 success, 1 selftest failures,
2 invalid input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import warnings

import numpy as np

from . import __version__
from .checks import run_all
from .cohomology import check_cocycle
from .config import COMMANDS, ENV_PREFIX, RunConfig, build_run_config, load_config
from .errors import ConfigInvalid, NumericalFailure, RHMapError
from .serialize import cocycle_json, complex_json, config_json, matrix_json, monodromy_json
from .span import RankMode, injectivity_verdict, noether_scan, rauch_check
from .svg import emit_svg
from .transport import irreducible, monodromy
from .variation import TangentDirection, cocycle_from_direction, derivative_monodromy, finite_difference_oracle

EXIT_OK, EXIT_CHECKS, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2, 3


def _versions():
    return {"rhmap": __version__, "numpy": np.__version__, "python": platform.python_version()}


def _composite_pairs(loops):
    """(l1, l2, l12) for every composite of exactly two other loops in the list."""
    labels = {lp.label for lp in loops}
    out = []
    for lp in loops:
        parts = lp.label.split("*")
        if len(parts) == 2 and all(p in labels for p in parts):
            out.append((parts[0], parts[1], lp.label))
    return out


def cmd_monodromy(rc: RunConfig) -> dict:
    results = [monodromy(rc.curve, rc.connection, lp, rc.cfg) for lp in rc.loops]
    by_label = {r.loop.label: r.matrix for r in results}
    hom = {}
    for l1, l2, l12 in _composite_pairs(rc.loops):
        hom[l12] = float(np.linalg.norm(by_label[l12] - by_label[l1] @ by_label[l2]))
    return {
        "monodromy": [monodromy_json(r) for r in results],
        "irreducible": irreducible([r.matrix for r in results]) if len(results) >= 2 else None,
        "homomorphism_defects": hom,
    }


def cmd_derivative(rc: RunConfig) -> dict:
    direction = TangentDirection(rc.direction)
    per_loop = []
    for lp in rc.loops:
        d = derivative_monodromy(rc.curve, rc.connection, direction, lp, rc.cfg)
        fd = finite_difference_oracle(rc.curve, rc.connection, direction, lp, rc.eps, rc.cfg)
        scale = max(np.linalg.norm(d.rho_dot), 1e-300)
        per_loop.append({
            "label": lp.label,
            "loop_hash": lp.digest(),
            "rho": matrix_json(d.rho),
            "rho_dot": matrix_json(d.rho_dot),
            "eta": matrix_json(d.rho_dot @ np.linalg.inv(d.rho)),
            "oracle_rel_defect": float(np.linalg.norm(fd - d.rho_dot) / scale),
            "err_estimate": d.err_estimate,
        })
    out = {"eps": rc.eps, "loops": per_loop}
    base = {(lp.base_point, lp.start_sheet) for lp in rc.loops}
    if len(base) == 1:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            eta = cocycle_from_direction(rc.curve, rc.connection, direction, rc.loops, rc.cfg)
        out["cocycle"] = cocycle_json(eta)
        out["reducible_warning"] = bool(caught)
        pairs = _composite_pairs(rc.loops)
        if pairs:
            out["cocycle_defect"] = check_cocycle(eta, pairs)
    return out


def cmd_injectivity(rc: RunConfig) -> dict:
    report = injectivity_verdict(rc.curve, rc.connection, RankMode(rc.mode))
    out = {"span": report.to_json(include_matrix=report.mode is RankMode.EXACT)}
    if rc.loops:
        mats = [monodromy(rc.curve, rc.connection, lp, rc.cfg).matrix for lp in rc.loops]
        out["irreducible"] = irreducible(mats) if len(mats) >= 2 else None
    return out


def cmd_rauch(rc: RunConfig) -> dict:
    return rauch_check(rc.genus, rc.trials, rc.seed).to_json()


def cmd_noether(rc: RunConfig) -> dict:
    return noether_scan(rc.curve, rc.trials, rc.seed).to_json()


def cmd_selftest(rc: RunConfig) -> dict:
    results = run_all(rc.seed, rc.cfg)
    for r in results:
        print(r.line(), file=sys.stderr)
    return {"checks": [r.to_json() for r in results], "all_passed": all(r.passed for r in results)}


HANDLERS = {
    "monodromy": cmd_monodromy,
    "derivative": cmd_derivative,
    "injectivity": cmd_injectivity,
    "rauch-scan": cmd_rauch,
    "noether-scan": cmd_noether,
    "selftest": cmd_selftest,
}


def run(rc: RunConfig) -> dict:
    """Dispatch a validated config and return the JSON report."""
    report = {
        "command": rc.command,
        "inputs": rc.raw,
        "versions": _versions(),
        "seed": rc.seed,
        "integrator": config_json(rc.cfg),
    }
    if rc.curve is not None and rc.curve.is_hyperelliptic:
        report["branch_points"] = [complex_json(b) for b in rc.curve.branch_points]
    report["result"] = HANDLERS[rc.command](rc)
    return report


def _parser():
    p = argparse.ArgumentParser(prog="rhmap", description=__doc__.split("\n\n")[0])
    p.add_argument("command", nargs="?", choices=COMMANDS)
    p.add_argument("--config")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=("exact", "float"))
    p.add_argument("--rel-tol", type=float, dest="rel_tol")
    return p


def _env_overrides(environ):
    out = {}
    for key, conv in (("config", str), ("out", str), ("svg", str), ("seed", int), ("mode", str),
                      ("rel_tol", float), ("command", str)):
        val = environ.get(ENV_PREFIX + key.upper())
        if val is not None:
            try:
                out[key] = conv(val)
            except ValueError:
                raise ConfigInvalid({ENV_PREFIX + key.upper(): f"cannot parse {val!r}"}) from None
    return out


def main(argv=None, environ=None) -> int:
    args = _parser().parse_args(argv)
    environ = os.environ if environ is None else environ
    try:
        opts = _env_overrides(environ)
        opts.update({k: v for k, v in vars(args).items() if v is not None})
        raw = load_config(opts.pop("config")) if opts.get("config") else {}
        rc = build_run_config(raw, opts)
        report = run(rc)
        if rc.svg and rc.curve is not None and rc.curve.is_hyperelliptic:
            with open(rc.svg, "w", encoding="utf-8") as fh:
                fh.write(emit_svg(rc.curve, rc.loops))
    except ConfigInvalid as exc:
        print(json.dumps({"error": "ConfigInvalid", "fields": exc.errors}, indent=2), file=sys.stderr)
        return EXIT_INVALID
    except NumericalFailure as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_NUMERIC
    except RHMapError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(report, indent=2, default=str)
    if rc.out:
        with open(rc.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if rc.command == "selftest" and not report["result"]["all_passed"]:
        return EXIT_CHECKS
    return EXIT_OK
