from fractions import Fraction

import pytest

from gccert.gcdiagram import center_point, gamma, segment_point, segment_point_symbolic
from gccert.novikov import NovikovSeries, constant
from gccert.potential import (
    BulkParameter,
    apply_bulk,
    build_potential,
    evaluate,
    log_gradient,
    potential_to_json,
    render,
)

FL3_DISPLAY = (
    r"\left( \frac{y_{1,2}}{y_{1,1}} + \frac{y_{1,1}}{y_{2,1}} + y_{1,2} + \frac{1}{y_{2,1}} \right) T^{1-t}"
    r" + \left( \frac{1}{y_{1,2}} + y_{2,1} \right) T^{1+t}"
)


def test_fl3_symbolic_display():
    assert render(build_potential(segment_point_symbolic(3, 2))) == FL3_DISPLAY


def _hand_gradient(n, i, j):
    """The textbook four-term log-derivative, as a set of terms."""
    def mono(num, den):
        parts = []
        for v, e in ((num, 1), (den, -1)):
            if v[0] >= 1 and v[1] >= 1 and v[0] + v[1] <= n:
                parts.append((v, e))
        return tuple(sorted(parts))

    out = {(-1, mono((i, j + 1), (i, j)), ("ver", j))}
    out.add((1, mono((i, j), (i + 1, j)), ("hor", i)))
    if i > 1:
        out.add((-1, mono((i - 1, j), (i, j)), ("hor", i - 1)))
    if j > 1:
        out.add((1, mono((i, j), (i, j - 1)), ("ver", j - 1)))
    return out


@pytest.mark.parametrize("n", range(3, 7))
def test_gradient_matches_hand_formula(n):
    Wb = apply_bulk(build_potential(center_point(n)))
    for ij in gamma(n):
        got = {(int(x.coeff), x.monomial, x.bulk[0]) for x in log_gradient(Wb, ij).terms}
        assert len(log_gradient(Wb, ij).terms) == len(got)
        assert got == _hand_gradient(n, *ij)


def test_fl4_center_gradient_term_counts():
    # the c^ver_{j,j-1} term needs a column to the left
    Wb = apply_bulk(build_potential(center_point(4)))
    assert len(log_gradient(Wb, (2, 1)).terms) == 3
    assert len(log_gradient(Wb, (2, 2)).terms) == 4


@pytest.mark.parametrize("n", range(3, 8))
def test_one_term_per_facet(n):
    W = build_potential(segment_point(n, 2, Fraction(1, 3)))
    facets = [x.facet for x in W.terms]
    assert len(facets) == len(set(facets)) == 2 * len(gamma(n))
    assert not W.flagged


def test_center_flags_zero_gaps():
    W = build_potential(center_point(4))
    assert W.flagged == ()
    W = build_potential(segment_point(4, 2, 1))
    assert W.flagged


def test_all_ones_bulk_is_the_undeformed_potential():
    n, t = 5, Fraction(1, 3)
    W = build_potential(segment_point(n, 2, t))
    y = {ij: constant(Fraction(ij[0] + 1, ij[1] + 2), 4) for ij in gamma(n)}
    ones = BulkParameter(hor={i: constant(1, 4) for i in range(1, n)},
                         ver={j: constant(1, 4) for j in range(1, n)})
    assert evaluate(apply_bulk(W, ones), y, ones) == evaluate(W, y)


def test_bulk_must_be_units():
    W = build_potential(segment_point(4, 2, Fraction(1, 2)))
    with pytest.raises(ValueError):
        apply_bulk(W, BulkParameter(hor={2: NovikovSeries({1: 1}, 3)}))


def test_log_gradient_rejects_outside_index():
    W = build_potential(center_point(4))
    with pytest.raises(ValueError):
        log_gradient(W, (3, 2))


def test_json_is_stable():
    W = apply_bulk(build_potential(segment_point_symbolic(4, 2)))
    assert potential_to_json(W) == potential_to_json(W)
    assert potential_to_json(W)["terms"][0]["t_exp"] == {"const": "1/1", "t": "-1/1"}
