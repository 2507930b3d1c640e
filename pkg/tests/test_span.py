from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rhmap import ConnectionForm, RankMode, fermat_quartic, injectivity_verdict, make_hyperelliptic, noether_scan, product_matrix, rauch_check
from rhmap.curve import AbelianDifferential
from rhmap.errors import ExactModeUnavailable, GenusTooSmall, ValidationError
from rhmap.exact import GaussianRational
from rhmap.rng import SplitMix64
from rhmap.span import (
    conjugation_invariance,
    dx2_over_y_block_is_zero,
    float_rank,
    hyperelliptic_injectivity_scan,
    product_rows,
    random_connection,
    rauch_trial,
)


def _gr(*vals):
    return tuple(GaussianRational.coerce(Fraction(v)) for v in vals)


def _hyp(g):
    return make_hyperelliptic([-1] + [0] * (2 * g + 1) + [1])


def test_genus2_standard(sextic):
    a, b, z = (AbelianDifferential.on(sextic, _gr(*c)) for c in ((1, 0), (0, 1), (0, 0)))
    m = product_matrix(sextic, a, b, z)
    assert m.shape == (6, 3) and m.dtype == object
    assert float_rank(m)[0] == 3
    rep = injectivity_verdict(sextic, ConnectionForm(a, b, z))
    assert rep.rank_products == 3 and rep.dim_qd == 3 and rep.injective


def test_genus2_single_form(sextic):
    a = AbelianDifferential.on(sextic, _gr(1, 0))
    rep = injectivity_verdict(sextic, ConnectionForm(a, a, a))
    assert rep.rank_products == 2 and not rep.injective


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_single_form_rank_is_g(g):
    curve = _hyp(g)
    a = AbelianDifferential.on(curve, _gr(*range(1, g + 1)))
    assert injectivity_verdict(curve, ConnectionForm(a, a, a)).rank_products == g


def test_genus3_never_injective(octic):
    rng = SplitMix64(8)
    for _ in range(10):
        form = random_connection(octic, rng)
        rep = injectivity_verdict(octic, form)
        assert rep.rank_products <= 5 and not rep.injective
        assert dx2_over_y_block_is_zero(octic, rep.matrix)


def test_quartic_basis_rank6():
    q = fermat_quartic()
    a, b, c = (AbelianDifferential.on(q, _gr(*row)) for row in np.eye(3, dtype=int).tolist())
    assert injectivity_verdict(q, ConnectionForm(a, b, c)).rank_products == 6


def test_quartic_engineered_triple():
    q = fermat_quartic()
    a = AbelianDifferential.on(q, _gr(1, 2, -1))
    rep = injectivity_verdict(q, ConnectionForm(a, a, a))
    assert rep.rank_products == 3 and not rep.injective


def test_float_input_rejected_in_exact_mode(sextic):
    a = AbelianDifferential.on(sextic, (0.1 + 0j, 0.2 + 0j))
    with pytest.raises(ExactModeUnavailable):
        injectivity_verdict(sextic, ConnectionForm(a, a, a), RankMode.EXACT)
    assert injectivity_verdict(sextic, ConnectionForm(a, a, a), "float").rank_products == 2


def test_genus1_rejected():
    e = make_hyperelliptic([-1, 0, 0, 1])
    a = AbelianDifferential.on(e, _gr(1))
    with pytest.raises(GenusTooSmall):
        product_rows(e, (a, a, a))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.lists(st.integers(-3, 3), min_size=12, max_size=12))
def test_rank_matches_convolution_oracle(g, ints):
    curve = _hyp(g)
    coeff = [ints[(k * 5) % 12 :][:g] + ints[:max(0, g - len(ints[(k * 5) % 12 :]))] for k in range(3)]
    forms = [AbelianDifferential.on(curve, _gr(*c)) for c in coeff]
    # independent oracle: rows are numpy convolutions of the coefficient vectors
    rows = []
    for f in forms:
        for k in range(g):
            e = np.zeros(g)
            e[k] = 1
            r = np.convolve(np.array([float(complex(c).real) for c in f.coeffs]), e)
            rows.append(np.pad(r, (0, 3 * g - 3 - len(r))))
    oracle = np.linalg.matrix_rank(np.array(rows)) if np.any(rows) else 0
    assert injectivity_verdict(curve, ConnectionForm(*forms)).rank_products == oracle


def test_rauch_examples():
    for g in (2, 5):
        rep = rauch_check(g, 5, 1)
        assert all(t.rank == 2 * g - 1 for t in rep.trials)
    with pytest.raises(ValidationError):
        rauch_check(1, 1, 1)


def test_rauch_degenerate_trial_invalid():
    curve = _hyp(3)
    xi = AbelianDifferential.on(curve, _gr(1, 2, 3))
    valid, rank, _ = rauch_trial(curve, [xi, xi, AbelianDifferential.on(curve, _gr(0, 0, 1))])
    assert not valid and rank < 5


def test_noether_examples():
    rep = noether_scan(fermat_quartic(), 10, 1)
    assert rep.fraction_full == 1.0 and rep.disagreements == 0
    empty = noether_scan(fermat_quartic(), 0, 1)
    assert empty.trials == () and empty.to_json()["trials"] == []
    with pytest.raises(ValidationError):
        noether_scan(_hyp(2), 1, 1)


def test_scans_deterministic():
    a = hyperelliptic_injectivity_scan(2, 5, 7).to_json()
    b = hyperelliptic_injectivity_scan(2, 5, 7).to_json()
    assert a == b


def test_conjugation_invariance(sextic):
    rng = SplitMix64(10)
    for _ in range(5):
        before, after = conjugation_invariance(sextic, random_connection(sextic, rng), rng)
        assert before == after


def test_report_json(sextic):
    a = AbelianDifferential.on(sextic, _gr(1, 0))
    js = injectivity_verdict(sextic, ConnectionForm(a, a, a)).to_json()
    assert js["mode"] == "exact" and len(js["matrix"]) == 6
