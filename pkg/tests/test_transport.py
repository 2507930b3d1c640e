import numpy as np
import pytest

from rhmap import ConnectionForm, circle_loop, compose, invert, irreducible, monodromy, transport_frame
from rhmap.curve import AbelianDifferential
from rhmap.integrate import IntegratorConfig
from rhmap.periods import form_periods, period
from rhmap.transport import frames_along, monodromy_batch

# Period of dx/y over pair_loop(0, 1, base=3) on y^2 = x^6 - 1, from scipy quadrature
# along the continuation trace.  Its modulus was confirmed independently with mpmath
# as 2 * |int dx/y| along the chord between the two enclosed roots (30 digits).
PI01 = complex(-2.103273157988182, -1.2143253239437908)
PI01_ABS_MPMATH = 2.4286506478875817


def _diag(curve, w):
    z = AbelianDifferential.zero(curve)
    return ConnectionForm(w, z, z)


def _nilpotent(curve, w):
    z = AbelianDifferential.zero(curve)
    return ConnectionForm(z, w, z)


def test_period_oracle(sextic, omega, loop01):
    p = period(sextic, omega[0], loop01)
    assert abs(p - PI01) <= 1e-12 * abs(PI01)
    assert abs(abs(p) - PI01_ABS_MPMATH) <= 1e-12


def test_zero_connection(sextic, loop01):
    P, err = transport_frame(sextic, ConnectionForm.zero(sextic), loop01)
    assert np.array_equal(P, np.eye(2))
    assert err == 0.0


def test_diagonal_closed_form(sextic, omega, loop01):
    P, _ = transport_frame(sextic, _diag(sextic, omega[0]), loop01)
    expect = np.diag([np.exp(-PI01), np.exp(PI01)])
    assert np.linalg.norm(P - expect) <= 1e-9 * np.linalg.norm(expect)


def test_nilpotent_closed_form(sextic, omega, loop01):
    form = _nilpotent(sextic, omega[0])
    P, _ = transport_frame(sextic, form, loop01)
    assert np.linalg.norm(P - np.array([[1, -PI01], [0, 1]])) <= 1e-9 * abs(PI01)
    rho = monodromy(sextic, form, loop01).matrix
    assert np.linalg.norm(rho - np.array([[1, PI01], [0, 1]])) <= 1e-9 * abs(PI01)


def test_form_periods_shape(sextic, omega, loop01):
    per = form_periods(sextic, _nilpotent(sextic, omega[0]), loop01)
    assert per[0, 1] == pytest.approx(PI01, rel=1e-12) and per[1, 0] == 0 and per[0, 0] == 0


def test_contractible(fixture):
    lp = fixture.loops[0]
    r = monodromy(fixture.curve, fixture.form, compose([lp, invert(lp)]), fixture.cfg)
    assert np.linalg.norm(r.matrix - np.eye(2)) <= 1e-9


def test_power(fixture):
    lp = fixture.loops[1]
    r2 = monodromy(fixture.curve, fixture.form, compose([lp, lp]), fixture.cfg).matrix
    r = fixture.rho[lp.label].matrix
    assert np.linalg.norm(r2 - r @ r) <= 1e-8 * max(1, np.linalg.norm(r) ** 2)


def test_inverse_loop(fixture):
    lp = fixture.loops[2]
    ri = monodromy(fixture.curve, fixture.form, invert(lp), fixture.cfg).matrix
    assert np.linalg.norm(ri @ fixture.rho[lp.label].matrix - np.eye(2)) <= 1e-9


def test_unimodular(fixture):
    for r in fixture.rho.values():
        assert r.det_defect <= max(1e-9, 100 * r.err_estimate)
        assert r.err_estimate > 0


def test_batch_matches_serial(fixture):
    loops = fixture.loops[:3]
    serial = [monodromy(fixture.curve, fixture.form, lp, fixture.cfg).matrix for lp in loops]
    batch = monodromy_batch(fixture.curve, fixture.form, loops, fixture.cfg, workers=3)
    assert [b.loop.label for b in batch] == [lp.label for lp in loops]
    for s, b in zip(serial, batch):
        assert np.array_equal(s, b.matrix)


def test_sheet_flip_changes_monodromy(fixture):
    # on the other sheet A is paired with -y, so transport runs with -A
    from rhmap import pair_loop
    lp = pair_loop(fixture.curve, 0, 1, 3.0, sheet=-1)
    neg = ConnectionForm(*(e.scale(-1) for e in fixture.form.entries))
    a = monodromy(fixture.curve, fixture.form, lp, fixture.cfg).matrix
    b = monodromy(fixture.curve, neg, fixture.loops[0], fixture.cfg).matrix
    assert np.linalg.norm(a - b) <= 1e-9 * np.linalg.norm(a)


def test_big_circle_is_trivial(fixture):
    # a circle around every root of an even-degree p only encircles infinity,
    # which is a regular point: the loop is null-homotopic on the curve
    r = monodromy(fixture.curve, fixture.form, circle_loop(fixture.curve, 0, 10.0), fixture.cfg)
    assert np.linalg.norm(r.matrix - np.eye(2)) <= 1e-9


def test_frames_along_end(fixture):
    lp = fixture.loops[0]
    frames = frames_along(fixture.curve, fixture.form, lp, fixture.cfg)
    assert np.allclose(np.linalg.inv(frames[-1]), fixture.rho[lp.label].matrix, rtol=1e-12, atol=1e-12)


def test_irreducible_examples():
    assert not irreducible([np.diag([2, 0.5]), np.diag([3, 1 / 3])])
    assert not irreducible([np.diag([2, 0.5]), np.array([[1, 1], [0, 1]])])
    assert irreducible([np.array([[1, 1], [0, 1]]), np.array([[1, 0], [1, 1]])])
    assert not irreducible([np.eye(2)])


def test_fixture_irreducible(fixture):
    assert irreducible([fixture.rho[lp.label].matrix for lp in fixture.loops])


def test_tolerance_reported(sextic, omega, loop01):
    form = _diag(sextic, omega[1])
    loose = monodromy(sextic, form, loop01, IntegratorConfig(rel_tol=1e-6))
    tight = monodromy(sextic, form, loop01, IntegratorConfig(rel_tol=1e-12))
    assert loose.err_estimate > tight.err_estimate
