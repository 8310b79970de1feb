import json
from fractions import Fraction

import pytest

from gccert.lift import (
    CertificateFormatError,
    CertifyError,
    certificate_from_json,
    certificate_to_json,
    certify,
    certify_fl3,
    lift_inside,
    load_certificate,
    save_certificate,
    verify_certificate,
)
from gccert.novikov import NovikovSeries, constant, valuation
from gccert.potential import BulkParameter
from gccert.sltsolve import find_generic_seed, symmetric_inner_solution

F = Fraction


@pytest.mark.parametrize("n,m", [(5, 2), (7, 3), (6, 3), (8, 3), (9, 4)])
def test_inner_lift_precision_loss(n, m):
    seed = find_generic_seed(n, m)
    t = F(1, 5)
    lift = lift_inside(n, m, t, 3, seed.d)
    inner = symmetric_inner_solution(m, seed.d[(m, m)])
    for (i, j), v in lift.z.items():
        if i <= m and j <= m:
            diff = v - constant(inner[(i, j)], v.cap)
            if i + j <= m + 1:
                assert diff.is_zero()
            else:
                # diagonal m+1+s moves at order (m-s+1)t
                s = i + j - m - 1
                assert valuation(diff) == (m - s + 1) * t


@pytest.mark.parametrize("n,m", [(5, 2), (7, 3), (9, 4)])
def test_inner_lift_link_congruence(n, m):
    seed = find_generic_seed(n, m)
    lift = lift_inside(n, m, F(1, 4), 2, seed.d)
    dmm = seed.d[(m, m)]
    for l in range(1, m + 1):
        want = (-1) ** (m - l) * dmm * dmm / seed.d[(l, m + 1)]
        assert lift.z[(m + 1, l)].constant_term() == want


def test_inner_multipliers():
    n, m = 7, 3
    seed = find_generic_seed(n, m)
    lift = lift_inside(n, m, F(1, 4), 2, seed.d)
    inner = symmetric_inner_solution(m, seed.d[(m, m)])
    assert lift.a[0] is None
    for j in range(2, m + 1):
        assert lift.a[j - 1].constant_term() == seed.d[(j, m + 1)] / inner[(j - 1, m)]


@pytest.mark.parametrize("t", [F(1, 4), F(1, 2), F(3, 4)])
def test_fl3_certificate(t):
    cert = certify_fl3(t, 3)
    assert cert.report.ok, cert.report.summary()
    assert cert.bulk.ver[1] == NovikovSeries({0: 1, 2 * t: 1}, 3)
    y11 = cert.point[(1, 1)]
    assert y11.coefficient(0) == -1 and y11.coefficient(2 * t) == F(-1, 2)
    assert cert.bulk.ver[2].constant_term() == F(-1, 2)
    assert cert.bulk.hor[2].constant_term() == F(1, 2)


def test_certificate_round_trip_is_idempotent(tmp_path):
    cert = certify(6, 2, F(1, 3), 2)
    path = tmp_path / "c.json"
    save_certificate(cert, path)
    text = path.read_text()
    again = load_certificate(path)
    assert verify_certificate(again).ok
    save_certificate(again, path)
    assert path.read_text() == text


def test_tampered_certificate_fails():
    cert = certify(5, 2, F(1, 2), 2)
    obj = certificate_to_json(cert)
    obj["point"]["2,3"]["terms"][0][2] += 1
    report = verify_certificate(certificate_from_json(obj))
    assert not report.ok
    assert any(e.check == "gradient" for e in report.failures())
    assert any(e.check == "leading" for e in report.failures())


def test_non_unit_bulk_is_reported():
    cert = certify(5, 2, F(1, 2), 2)
    obj = certificate_to_json(cert)
    bad = certificate_from_json(obj)
    hor = dict(bad.bulk.hor)
    hor[3] = NovikovSeries({1: 1}, 2)
    bad = type(bad)(**{**bad.__dict__, "bulk": BulkParameter(hor=hor, ver=bad.bulk.ver)})
    report = verify_certificate(bad)
    assert any(e.check == "unit" and not e.ok for e in report.entries)


@pytest.mark.parametrize("mutate", [
    lambda o: o.pop("point"),
    lambda o: o.update(format="other"),
    lambda o: o.update(n="7"),
    lambda o: o["bulk"]["hor"].update({"3": {"terms": [[1, 0, 1, 1]], "cap": [2, 1]}}),
])
def test_malformed_certificates(mutate):
    obj = json.loads(json.dumps(certificate_to_json(certify(5, 2, F(1, 2), 2))))
    mutate(obj)
    with pytest.raises(CertificateFormatError):
        certificate_from_json(obj)


def test_certify_validates_input():
    with pytest.raises(ValueError):
        certify(3, 2, F(1, 2), 2)
    with pytest.raises(ValueError):
        certify(7, 4, F(1, 2), 2)
    with pytest.raises(ValueError):
        certify(7, 2, F(3, 2), 2)


def test_certify_stage_is_tagged():
    from gccert.sltsolve import Seed
    with pytest.raises(CertifyError) as info:
        certify(7, 2, F(1, 2), 2, seed=Seed.from_values(7, 2, [-1, 1, 1, 1, 1]))
    assert info.value.stage == "slt"


def test_even_half_box_note():
    cert = certify(6, 3, F(1, 4), 2)
    assert cert.notes and cert.report.ok
