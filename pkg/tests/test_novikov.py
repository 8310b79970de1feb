import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gccert import _pykernel
from gccert.novikov import (
    NotAUnit,
    NovikovSeries,
    constant,
    equals_mod,
    from_json,
    from_text,
    invert_unit,
    is_unit,
    monomial,
    sqrt_unit,
    to_json,
    to_text,
    truncate,
    valuation,
)

from conftest import series, square_units

F = Fraction


def same_mod(x, y):
    """Agreement on everything both sides know."""
    return equals_mod(x, y, min(x.cap, y.cap))


@given(series(), series(), series())
def test_addition_is_associative_and_commutative(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)


@given(series(), series(), series())
def test_multiplication_ring_axioms(a, b, c):
    assert a * b == b * a
    assert same_mod((a * b) * c, a * (b * c))
    assert same_mod(a * (b + c), a * b + a * c)


@given(series())
def test_additive_inverse_and_identities(a):
    assert (a - a).is_zero()
    assert a + constant(0, a.cap) == a
    assert a * constant(1, a.cap) == a


@given(series(min_exp=0), series(min_exp=0))
def test_valuation_is_multiplicative(a, b):
    p = a * b
    if a.is_zero() or b.is_zero():
        assert p.is_zero()
        return
    if valuation(a) + valuation(b) < p.cap:
        assert valuation(p) == valuation(a) + valuation(b)


@given(series(unit=True))
def test_invert_round_trip(u):
    inv = invert_unit(u)
    assert inv.cap == u.cap
    assert (u * inv) == constant(1, u.cap)


@given(square_units(), st.sampled_from((1, -1)))
def test_sqrt_round_trip(u, sign):
    r = sqrt_unit(u, sign)
    assert r * r == u
    assert r.constant_term() * sign > 0


def test_unit_checks():
    x = NovikovSeries({F(1, 2): 3}, 2)
    assert not is_unit(x)
    with pytest.raises(NotAUnit):
        invert_unit(x)
    with pytest.raises(ValueError):
        sqrt_unit(constant(2, 1))


def test_cap_bookkeeping():
    a = NovikovSeries({0: 1, 1: 2}, 3)
    b = NovikovSeries({F(-1, 2): 1}, 4)
    # negative valuation lowers what the product knows
    assert (a * b).cap == F(5, 2)
    assert a.shift(F(1, 3)).cap == F(10, 3)
    assert truncate(a, 1) == NovikovSeries({0: 1}, 1)


def test_fl3_square_root_leading_terms():
    for t in (F(1, 4), F(1, 2), F(3, 4)):
        y = sqrt_unit(constant(1, 3) + monomial(1, 2 * t, 3), -1)
        assert y.coefficient(0) == -1
        assert y.coefficient(2 * t) == F(-1, 2)
        assert y.coefficient(4 * t) == F(1, 8) or 4 * t >= 3


@given(series())
def test_text_round_trip(a):
    assert from_text(to_text(a)) == a


@given(series())
def test_json_round_trip(a):
    assert from_json(json.loads(json.dumps(to_json(a)))) == a


@pytest.mark.parametrize("bad", [
    "1/1*T^(0/1)",
    "1/1*T^(1/1) + 2/1*T^(0/1) (mod T^(2/1))",
    "0/1*T^(0/1) (mod T^(2/1))",
    "1/1*T^(3/1) (mod T^(2/1))",
])
def test_text_rejects_non_canonical(bad):
    with pytest.raises(ValueError):
        from_text(bad)


def test_json_rejects_malformed():
    with pytest.raises(ValueError):
        from_json({"terms": [[1, 0, 1, 1]], "cap": [1, 1]})
    with pytest.raises(ValueError):
        from_json({"terms": [[0, 1, 1, 1]]})


@settings(max_examples=200)
@given(st.lists(st.tuples(st.integers(0, 30), st.integers(-50, 50)), max_size=8),
       st.lists(st.tuples(st.integers(0, 30), st.integers(-50, 50)), min_size=1, max_size=8),
       st.integers(1, 40))
def test_kernels_agree(xs, ys, cap):
    from gccert import _kernel
    xs = sorted(dict(xs).items())
    ys = sorted(dict(ys).items())
    xe, xc = [e for e, _ in xs], [c for _, c in xs]
    ye, yc = [e for e, _ in ys], [c for _, c in ys]
    assert _kernel.convolve(xe, xc, ye, yc, cap) == _pykernel.convolve(xe, xc, ye, yc, cap)
    idx = [e for e in sorted(set(ye)) if e > 0]
    alpha = [(e % 7) - 3 or 1 for e in idx]
    assert (_kernel.inverse_monic(idx, alpha, 5, cap)
            == _pykernel.inverse_monic(idx, alpha, 5, cap))


def test_pure_python_switch():
    code = "import gccert; print(gccert.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True,
                         env={"GCCERT_PURE_PYTHON": "1", "PATH": ""}, check=True)
    assert out.stdout.strip() == "python"
