import cmath

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhmap import circle_loop, compose, continue_y, invert, make_hyperelliptic, make_loop, pair_loop
from rhmap.checks import jitter_loop
from rhmap.errors import BasepointMismatch, OpenLift, PathBlocked, ValidationError
from rhmap.path import continue_open, default_base, polyline_clearance, sheet_of, winding_numbers
from rhmap.rng import SplitMix64


def test_pair_loop_winding(sextic, loop01):
    assert loop01.winding == (1, 1, 0, 0, 0, 0)
    assert loop01.base_point == 3.0
    assert loop01.clearance >= 0.1 * sextic.min_branch_gap


@pytest.mark.parametrize("i,j", [(0, 3), (2, 5), (4, 1), (5, 0)])
def test_pair_loop_any_pair(sextic, i, j):
    lp = pair_loop(sextic, i, j, 3.0)
    assert lp.winding == tuple(int(k in (i, j)) for k in range(6))


def test_pair_loop_detour():
    # branch point 0.5 sits right on the straight corridor from base to 2
    curve = make_hyperelliptic(np.polynomial.polynomial.polyfromroots([0.5, 2, -1, 1j, -1j, 3j]))
    idx = int(np.argmin(np.abs(np.asarray(curve.branch_points) - 2)))
    far = int(np.argmin(np.abs(np.asarray(curve.branch_points) - 3j)))
    lp = pair_loop(curve, idx, far, -3.0)
    assert sum(lp.winding) == 2 and lp.winding[idx] == 1 and lp.winding[far] == 1


def test_pair_loop_same_index(sextic):
    with pytest.raises(ValidationError):
        pair_loop(sextic, 1, 1, 3.0)


def test_pair_loop_base_too_close(sextic):
    with pytest.raises(PathBlocked):
        pair_loop(sextic, 0, 1, 1.1)


def test_open_lift_rejected(sextic):
    with pytest.raises(OpenLift):
        circle_loop(sextic, 1.0, 0.4)


def test_loop_through_branch_point_rejected(sextic):
    with pytest.raises(ValidationError):
        make_loop(sextic, [0.0, 2.0, 2.0j])


def test_circle_all_points_closes(sextic):
    lp = circle_loop(sextic, 0, 3.0)
    assert lp.winding == (1,) * 6
    trace = continue_y(sextic, lp)
    ys = [y for _, y in trace.samples]
    assert abs(ys[-1] - ys[0]) <= 1e-10 * abs(ys[0])


def test_pair_trace_closes(sextic, loop01):
    trace = continue_y(sextic, loop01)
    xs, ys = map(np.array, zip(*trace.samples))
    assert abs(ys[-1] - ys[0]) <= 1e-10 * abs(ys[0])
    assert np.allclose(ys ** 2, [sextic.p(x) for x in xs], rtol=1e-10)


def test_trace_passes_sheet_change(sextic):
    # the lasso around one branch point flips the sheet at its return to base
    lp = pair_loop(sextic, 0, 1, 3.0)
    seg_starts = [s.ys[0] for s in continue_y(sextic, lp).segments]
    y0 = seg_starts[0]
    first_return = lp.vertices.index(lp.base_point, 1)
    assert abs(seg_starts[first_return] + y0) <= 1e-10 * abs(y0)


def test_invert_twice(loop01):
    assert invert(invert(loop01)).vertices == loop01.vertices
    assert invert(loop01).label == "inv(a)"
    assert invert(loop01).winding == (-1, -1, 0, 0, 0, 0)


def test_compose_labels_and_mismatch(sextic, loop01, loop12):
    ab = compose([loop01, loop12])
    assert ab.label == "a*b"
    assert ab.winding == (1, 2, 1, 0, 0, 0)
    other = pair_loop(sextic, 0, 1, 3.0 + 1.0j)
    with pytest.raises(BasepointMismatch):
        compose([loop01, other])
    with pytest.raises(BasepointMismatch):
        compose([loop01, pair_loop(sextic, 0, 1, 3.0, sheet=-1)])


def test_winding_oracle():
    square = [1 + 1j, -1 + 1j, -1 - 1j, 1 - 1j]
    w, defect = winding_numbers(square, [0, 5, 0.5j])
    assert list(w) == [1, 0, 1] and defect < 1e-12
    assert polyline_clearance(square, [0]) == pytest.approx(1.0)


def test_continue_open_and_sheet(sextic):
    y0 = cmath.sqrt(sextic.p(3.0))
    trace = continue_open(sextic, [3.0, 3.0 + 3.0j, 3.0j], y0)
    xs, ys = zip(*trace.samples)
    assert abs(ys[-1] ** 2 - sextic.p(3.0j)) <= 1e-10 * abs(ys[-1]) ** 2
    assert sheet_of(sextic, 3.0, y0) == 1 and sheet_of(sextic, 3.0, -y0) == -1


def test_default_base(sextic):
    assert sextic.dist_to_branch(default_base(sextic)) >= 1.0


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32))
def test_jitter_keeps_homotopy_class(sextic, seed):
    lp = pair_loop(sextic, seed % 6, (seed + 1 + seed // 6 % 5) % 6, 3.0)
    moved = jitter_loop(sextic, lp, SplitMix64(seed))
    assert moved.winding == lp.winding
