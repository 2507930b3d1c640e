"""Invariant suites run by ``rhmap selftest``.

Each check returns a CheckResult with the measured quantity and the
threshold it is held to.  The standard fixture is y^2 = x^6 - 1 with base
point 3, the five pair loops around consecutive branch points, and a
connection with random Gaussian-rational entries drawn from the seed.
"""

from __future__ import annotations

import cmath
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cohomology import Cocycle, check_cocycle, coboundary, same_class, solve_coboundary
from .curve import fermat_quartic, make_hyperelliptic
from .integrate import IntegratorConfig
from .path import compose, make_loop, pair_loop, sheet_of
from .periods import form_periods
from .rng import SplitMix64, derive_seed
from .span import (
    conjugation_invariance,
    hyperelliptic_injectivity_scan,
    noether_scan,
    random_connection,
    rauch_check,
)
from .transport import ConnectionForm, monodromy, transport_path
from .variation import TangentDirection, cocycle_from_direction, derivative_monodromy


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark}  {self.name:<4} value={self.value:.3e}  threshold={self.threshold:.1e}  {self.detail}"

    def to_json(self):
        return {"name": self.name, "passed": self.passed, "value": self.value,
                "threshold": self.threshold, "detail": self.detail}


def random_traceless(rng: SplitMix64) -> np.ndarray:
    a, b, c = (complex(rng.small_gaussian_rational()) for _ in range(3))
    return np.array([[a, b], [c, -a]])


def random_sl2_float(rng: SplitMix64) -> np.ndarray:
    m = np.array([[complex(rng.small_gaussian_rational()) for _ in range(2)] for _ in range(2)])
    m = m + 1.5 * np.eye(2)
    return m / cmath.sqrt(np.linalg.det(m))


@dataclass
class Genus2Fixture:
    seed: int = 1
    base: complex = 3.0
    cfg: IntegratorConfig = field(default_factory=IntegratorConfig)

    def __post_init__(self):
        self.curve = make_hyperelliptic([-1, 0, 0, 0, 0, 0, 1])
        self.rng = SplitMix64(self.seed)
        self.form = ConnectionForm.from_coeffs(
            self.curve, *([self.rng.small_gaussian_rational() for _ in range(2)] for _ in range(3))
        )
        self.loops = [pair_loop(self.curve, k, k + 1, self.base, label=f"g{k}") for k in range(5)]

    @cached_property
    def composites(self):
        return [compose([a, b]) for a, b in zip(self.loops, self.loops[1:])]

    @cached_property
    def rho(self):
        return {r.loop.label: r for r in
                (monodromy(self.curve, self.form, lp, self.cfg) for lp in self.loops + self.composites)}

    def random_direction(self) -> TangentDirection:
        return TangentDirection(ConnectionForm.from_coeffs(
            self.curve, *([self.rng.small_gaussian_rational() for _ in range(2)] for _ in range(3))))


# -- transport -------------------------------------------------------------------


def check_t1(fx: Genus2Fixture) -> CheckResult:
    worst, worst_ratio = 0.0, 0.0
    for r in fx.rho.values():
        bound = max(1e-9, 100 * r.err_estimate)
        worst = max(worst, r.det_defect)
        worst_ratio = max(worst_ratio, r.det_defect / bound)
    return CheckResult("T1", worst_ratio <= 1.0, worst, 1e-9, "|det - 1| vs max(1e-9, 100 err)")


def homomorphism_defect(fx: Genus2Fixture) -> float:
    out = 0.0
    for a, b in zip(fx.loops, fx.loops[1:]):
        m12 = fx.rho[f"{a.label}*{b.label}"].matrix
        out = max(out, float(np.linalg.norm(m12 - fx.rho[a.label].matrix @ fx.rho[b.label].matrix)))
    return out


def check_t2(fx: Genus2Fixture) -> CheckResult:
    d = homomorphism_defect(fx)
    return CheckResult("T2", d <= 1e-8, d, 1e-8, "rho(g1 g2) vs rho(g1) rho(g2)")


def jitter_loop(curve, loop, rng: SplitMix64, fraction: float = 0.19):
    verts = [loop.vertices[0]]
    for v in loop.vertices[1:]:
        r = fraction * loop.clearance * rng.uniform()
        verts.append(v + r * cmath.exp(2j * cmath.pi * rng.uniform()))
    return make_loop(curve, verts, loop.start_sheet, loop.label + "~")


def check_t3(fx: Genus2Fixture) -> CheckResult:
    rng = SplitMix64(derive_seed(fx.seed, 3))
    worst = 0.0
    for lp in fx.loops:
        moved = monodromy(fx.curve, fx.form, jitter_loop(fx.curve, lp, rng), fx.cfg)
        worst = max(worst, float(np.linalg.norm(moved.matrix - fx.rho[lp.label].matrix)))
    return CheckResult("T3", worst <= 1e-8, worst, 1e-8, "vertex jitter < 0.2 clearance")


TOLERANCE_LADDER = (1e-8, 5e-9, 1e-10, 5e-11, 1e-12, 5e-13, 1e-13)


def tolerance_defects(fx: Genus2Fixture, ladder=TOLERANCE_LADDER):
    a, b = fx.loops[0], fx.loops[1]
    ab = compose([a, b])
    out = []
    for tol in ladder:
        cfg = IntegratorConfig(rel_tol=tol)
        ra, rb, rab = (monodromy(fx.curve, fx.form, lp, cfg) for lp in (a, b, ab))
        hom = float(np.linalg.norm(rab.matrix - ra.matrix @ rb.matrix))
        out.append(max(hom, ra.det_defect, rb.det_defect, rab.det_defect))
    return out


def check_t4(fx: Genus2Fixture) -> CheckResult:
    defects = tolerance_defects(fx)
    steps_ok = all(d1 <= 10 * max(d0, 1e-13) for d0, d1 in zip(defects, defects[1:]))
    converged = defects[-1] < defects[0]
    ratio = max(d1 / max(d0, 1e-13) for d0, d1 in zip(defects, defects[1:]))
    return CheckResult("T4", steps_ok and converged, ratio, 10.0,
                       "defects " + ", ".join(f"{d:.1e}" for d in defects))


# -- variation ----------------------------------------------------------------------


def check_v1(fx: Genus2Fixture) -> CheckResult:
    eta = cocycle_from_direction(fx.curve, fx.form, fx.random_direction(),
                                 fx.loops + fx.composites, fx.cfg)
    pairs = [(a.label, b.label) for a, b in zip(fx.loops, fx.loops[1:])]
    d = check_cocycle(eta, pairs)
    return CheckResult("V1", d <= 1e-7, d, 1e-7, "cocycle identity on generator pairs")


def check_v2(fx: Genus2Fixture) -> CheckResult:
    d1, d2 = fx.random_direction(), fx.random_direction()
    a, b = complex(fx.rng.small_gaussian_rational()), complex(fx.rng.small_gaussian_rational())
    combo = TangentDirection(d1.a_dot.scale(a) + d2.a_dot.scale(b))
    loops = fx.loops[:3]
    e1, e2, e12 = (cocycle_from_direction(fx.curve, fx.form, d, loops, fx.cfg) for d in (d1, d2, combo))
    worst = max(float(np.linalg.norm(e12.values[k] - a * e1.values[k] - b * e2.values[k])) for k in e1.values)
    return CheckResult("V2", worst <= 1e-8, worst, 1e-8, "complex linearity in A_dot")


def coboundary_recovery(fx: Genus2Fixture):
    t0 = random_traceless(fx.rng)
    direction = TangentDirection(fx.form.commutator(t0))
    eta = cocycle_from_direction(fx.curve, fx.form, direction, fx.loops, fx.cfg)
    sol = solve_coboundary(eta)
    return t0, sol, eta


def check_v3(fx: Genus2Fixture) -> CheckResult:
    t0, sol, _ = coboundary_recovery(fx)
    err = float(np.linalg.norm(sol.T - t0))
    value = max(err, sol.residual)
    return CheckResult("V3", value <= 1e-6, value, 1e-6, f"|T - T0|={err:.1e} residual={sol.residual:.1e}")


def abelian_sign_defects(fx: Genus2Fixture):
    """Distances of eta from -periods and from +periods at A = 0."""
    zero = ConnectionForm.zero(fx.curve)
    direction = fx.random_direction()
    minus, plus = 0.0, 0.0
    for lp in fx.loops:
        d = derivative_monodromy(fx.curve, zero, direction, lp, fx.cfg)
        eta = d.rho_dot @ np.linalg.inv(d.rho)
        per = form_periods(fx.curve, direction.a_dot, lp)
        minus = max(minus, float(np.max(np.abs(eta + per))))
        plus = max(plus, float(np.max(np.abs(eta - per))))
    return minus, plus


def check_v4(fx: Genus2Fixture) -> CheckResult:
    minus, plus = abelian_sign_defects(fx)
    return CheckResult("V4", minus <= 1e-8, minus, 1e-8,
                       f"eta = -periods at A=0 (distance to +periods: {plus:.1e})")


# -- cohomology -----------------------------------------------------------------------


def check_c1(seed: int) -> CheckResult:
    rng = SplitMix64(derive_seed(seed, 11))
    worst = 0.0
    for _ in range(10):
        rho = {f"r{k}": random_sl2_float(rng) for k in range(4)}
        t = random_traceless(rng)
        sol = solve_coboundary(coboundary(rho, t))
        worst = max(worst, sol.residual, float(np.linalg.norm(sol.T - t)))
    return CheckResult("C1", worst <= 1e-10, worst, 1e-10, "solve(coboundary(T)) = T")


def check_c2(fx: Genus2Fixture) -> CheckResult:
    eta = cocycle_from_direction(fx.curve, fx.form, fx.random_direction(), fx.loops, fx.cfg)
    shifted = eta + coboundary(eta.rho, random_traceless(fx.rng))
    doubled = eta.scale(2.0)
    cases = [eta, shifted, doubled]
    ok = True
    for a in cases:
        ok &= same_class(a, a)[0]
        for b in cases:
            ok &= same_class(a, b)[0] == same_class(b, a)[0]
    ok &= same_class(eta, shifted)[0] and not same_class(eta, doubled)[0]
    return CheckResult("C2", bool(ok), float(not ok), 0.0, "reflexive and symmetric on test set")


def basepoint_change(fx: Genus2Fixture, new_base: complex = 3.0 + 1.0j):
    """Cocycle at the fixture base and the transported cocycle from ``new_base``."""
    direction = fx.random_direction()
    curve = fx.curve
    y_new = cmath.sqrt(curve.p(new_base))
    p_c, y_base, _ = transport_path(curve, fx.form, [new_base, fx.base], y_new, fx.cfg)
    sheet = sheet_of(curve, fx.base, y_base)
    loops = [pair_loop(curve, k, k + 1, fx.base, sheet, label=f"g{k}") for k in range(4)]
    moved = [make_loop(curve, [new_base, *lp.vertices, fx.base], 1, lp.label) for lp in loops]
    eta = cocycle_from_direction(curve, fx.form, direction, loops, fx.cfg)
    eta_new = cocycle_from_direction(curve, fx.form, direction, moved, fx.cfg)
    back = eta_new.conjugate(p_c)
    back = Cocycle(back.values, eta.rho, eta.basepoint, eta.sheet)
    raw = max(float(np.linalg.norm(back.values[k] - eta.values[k])) for k in eta.values)
    return eta, back, raw


def check_c3(fx: Genus2Fixture) -> CheckResult:
    eta, back, raw = basepoint_change(fx)
    same, residual = same_class(eta, back)
    return CheckResult("C3", bool(same), residual, 1e-6 * max(1.0, eta.norm() + back.norm()),
                       f"raw values differ by {raw:.1e}")


# -- span -----------------------------------------------------------------------------


def check_s1(seed: int) -> CheckResult:
    scans = [rauch_check(g, 20, seed) for g in (2, 3, 4, 5)]
    scans += [noether_scan(fermat_quartic(), 100, seed)]
    scans += [hyperelliptic_injectivity_scan(g, 50, seed) for g in (2, 3)]
    bad = sum(s.disagreements for s in scans)
    return CheckResult("S1", bad == 0, float(bad), 0.0, "exact vs float rank disagreements")


def check_s2(seed: int) -> CheckResult:
    bad = 0
    for g in (3, 4, 5):
        scan = hyperelliptic_injectivity_scan(g, 20, seed)
        bad += sum(not t.detail["dx2_over_y_zero"] or t.rank > 2 * g - 1 for t in scan.trials)
    return CheckResult("S2", bad == 0, float(bad), 0.0, "rows vanish on dx^2/y block, rank <= 2g-1")


def check_s3(seed: int) -> CheckResult:
    scan = hyperelliptic_injectivity_scan(2, 50, seed)
    bad = sum(t.valid and not t.detail["injective"] for t in scan.trials)
    return CheckResult("S3", bad == 0, float(bad), 0.0,
                       f"{len(scan.valid_trials)} genus-2 samples with two independent entries")


def check_s4(seed: int) -> CheckResult:
    rng = SplitMix64(derive_seed(seed, 44))
    bad = 0
    for curve in (make_hyperelliptic([-1, 0, 0, 0, 0, 0, 1]), make_hyperelliptic([-1] + [0] * 7 + [1]),
                  fermat_quartic()):
        for _ in range(10):
            before, after = conjugation_invariance(curve, random_connection(curve, rng), rng)
            bad += before != after
    return CheckResult("S4", bad == 0, float(bad), 0.0, "rank invariant under g A g^-1")


def run_all(seed: int = 1, cfg: IntegratorConfig | None = None) -> list[CheckResult]:
    fx = Genus2Fixture(seed=seed, cfg=cfg or IntegratorConfig())
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        for check in (check_t1, check_t2, check_t3, check_t4, check_v1, check_v2, check_v3, check_v4,
                      check_c2, check_c3):
            results.append(check(fx))
        for check in (check_c1, check_s1, check_s2, check_s3, check_s4):
            results.append(check(seed))
    order = ["T1", "T2", "T3", "T4", "V1", "V2", "V3", "V4", "C1", "C2", "C3", "S1", "S2", "S3", "S4"]
    return sorted(results, key=lambda r: order.index(r.name))

