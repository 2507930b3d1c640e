import numpy as np
import pytest

from rhmap import ConnectionForm, TangentDirection, cocycle_from_direction, derivative_monodromy, finite_difference_oracle
from rhmap.checks import random_traceless
from rhmap.cohomology import check_cocycle, coboundary
from rhmap.curve import AbelianDifferential
from rhmap.errors import ValidationError
from rhmap.periods import form_periods
from rhmap.rng import SplitMix64

# periods of dx/y and x dx/y over pair_loop(0, 1, base=3) on y^2 = x^6 - 1 (quadrature oracle)
PI01 = complex(-2.103273157988182, -1.2143253239437908)
Q01 = complex(-1.2143253239437906, -2.1032731579881814)


def _diag(curve, w):
    z = AbelianDifferential.zero(curve)
    return ConnectionForm(w, z, z)


def test_zero_direction(fixture):
    d = derivative_monodromy(fixture.curve, fixture.form, TangentDirection(ConnectionForm.zero(fixture.curve)),
                             fixture.loops[0], fixture.cfg)
    assert np.array_equal(d.rho_dot, np.zeros((2, 2)))
    eta = cocycle_from_direction(fixture.curve, fixture.form,
                                 TangentDirection(ConnectionForm.zero(fixture.curve)), fixture.loops[:2],
                                 fixture.cfg)
    assert eta.norm() == 0.0


def test_mu_must_vanish(fixture):
    with pytest.raises(ValidationError):
        TangentDirection(ConnectionForm.zero(fixture.curve), mu=1)


def test_diagonal_closed_form(sextic, omega, loop01):
    d = derivative_monodromy(sextic, _diag(sextic, omega[0]), TangentDirection(_diag(sextic, omega[1])), loop01)
    expect = np.diag([Q01 * np.exp(PI01), -Q01 * np.exp(-PI01)])
    assert np.linalg.norm(d.rho_dot - expect) <= 1e-9 * np.linalg.norm(expect)
    assert np.allclose(d.rho, np.diag([np.exp(PI01), np.exp(-PI01)]), rtol=1e-10)


def test_abelian_periods_sign(sextic, omega, loop01, loop12):
    # at A = 0 the variation cocycle is the period map of A_dot, with a plus sign
    direction = TangentDirection(ConnectionForm(omega[0], omega[1], omega[0].scale(2j)))
    zero = ConnectionForm.zero(sextic)
    for lp in (loop01, loop12):
        d = derivative_monodromy(sextic, zero, direction, lp)
        assert np.array_equal(d.rho, np.eye(2))
        per = form_periods(sextic, direction.a_dot, lp)
        assert np.max(np.abs(d.rho_dot - per)) <= 1e-9


def test_abelian_additive(sextic, omega, loop01, loop12):
    from rhmap import compose
    direction = TangentDirection(ConnectionForm(omega[1], omega[0], omega[0]))
    loops = [loop01, loop12, compose([loop01, loop12])]
    with pytest.warns(RuntimeWarning, match="reducible"):
        eta = cocycle_from_direction(sextic, ConnectionForm.zero(sextic), direction, loops)
    assert np.linalg.norm(eta.values["a*b"] - eta.values["a"] - eta.values["b"]) <= 1e-9


def test_commutator_is_coboundary(fixture):
    t = random_traceless(SplitMix64(5))
    eta = cocycle_from_direction(fixture.curve, fixture.form, TangentDirection(fixture.form.commutator(t)),
                                 fixture.loops, fixture.cfg)
    expect = coboundary(eta.rho, t)
    for k in eta.values:
        assert np.linalg.norm(eta.values[k] - expect.values[k]) <= 1e-7


def test_cocycle_identity(fixture):
    eta = cocycle_from_direction(fixture.curve, fixture.form, fixture.random_direction(),
                                 fixture.loops[:3] + fixture.composites[:2], fixture.cfg)
    assert check_cocycle(eta, [("g0", "g1"), ("g1", "g2")]) <= 1e-7
    assert max(eta.meta["trace_defect"].values()) <= 1e-8


def test_finite_differences(fixture):
    direction = fixture.random_direction()
    lp = fixture.loops[1]
    d = derivative_monodromy(fixture.curve, fixture.form, direction, lp, fixture.cfg)
    fd = finite_difference_oracle(fixture.curve, fixture.form, direction, lp, 1e-4, fixture.cfg)
    assert np.linalg.norm(fd - d.rho_dot) <= 1e-6 * np.linalg.norm(d.rho_dot)


def test_finite_difference_zero(fixture):
    fd = finite_difference_oracle(fixture.curve, fixture.form, TangentDirection(ConnectionForm.zero(fixture.curve)),
                                  fixture.loops[0], 1e-4, fixture.cfg)
    assert np.linalg.norm(fd) == 0.0


@pytest.mark.parametrize("eps", [1e-7, 0.1])
def test_eps_range(fixture, eps):
    with pytest.raises(ValidationError):
        finite_difference_oracle(fixture.curve, fixture.form, fixture.random_direction(), fixture.loops[0], eps)


def test_loops_must_share_base(fixture):
    from rhmap import pair_loop
    other = pair_loop(fixture.curve, 0, 1, 3.0 + 1.0j, label="x")
    with pytest.raises(ValidationError):
        cocycle_from_direction(fixture.curve, fixture.form, fixture.random_direction(),
                               [fixture.loops[0], other], fixture.cfg)
