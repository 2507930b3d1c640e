import json
from fractions import Fraction

import numpy as np

from rhmap import make_hyperelliptic, monodromy, pair_loop
from rhmap.serialize import (
    cocycle_from_json,
    cocycle_json,
    matrix_from_json,
    matrix_json,
    monodromy_json,
    parse_complex,
    parse_gaussian,
)
from rhmap.svg import emit_svg


def test_parse():
    assert parse_gaussian(["0.1", "-2/3"]).re == Fraction(1, 10)
    assert parse_gaussian(["0.1", "-2/3"]).im == Fraction(-2, 3)
    assert parse_gaussian("3").im == 0
    assert parse_complex(["1.5", "2"]) == 1.5 + 2j


def test_matrix_roundtrip():
    m = np.array([[1 + 2j, 0.1], [-3j, 1e-300]])
    assert np.array_equal(matrix_from_json(json.loads(json.dumps(matrix_json(m)))), m)


def test_monodromy_json(fixture):
    r = fixture.rho["g0"]
    js = monodromy_json(r)
    assert js["label"] == "g0" and js["loop_hash"] == fixture.loops[0].digest()
    assert np.array_equal(matrix_from_json(js["matrix"]), r.matrix)


def test_cocycle_roundtrip(fixture):
    from rhmap.cohomology import coboundary
    eta = coboundary({k: v.matrix for k, v in fixture.rho.items()}, np.array([[1, 2], [3, -1]]))
    back = cocycle_from_json(json.loads(json.dumps(cocycle_json(eta))))
    for k in eta.values:
        assert np.array_equal(back.values[k], eta.values[k])


def test_svg_markers(sextic, loop01):
    doc = emit_svg(sextic, [loop01])
    assert doc.count('class="branch"') == 6
    assert doc.count('class="loop"') == 1 and ' Z"' in doc
    assert doc.count('class="clearance"') == 6


def test_svg_empty(sextic):
    doc = emit_svg(sextic, [])
    assert doc.count('class="branch"') == 6 and "<path" not in doc


def test_svg_deterministic(sextic):
    a = emit_svg(sextic, [pair_loop(sextic, 0, 1, 3.0)])
    b = emit_svg(make_hyperelliptic([-1, 0, 0, 0, 0, 0, 1]), [pair_loop(sextic, 0, 1, 3.0)])
    assert a.encode() == b.encode()
