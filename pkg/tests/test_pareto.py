from fractions import Fraction

import pytest

from pdakit import ParameterOutOfRange, pareto_check_mn, pareto_check_p1, pareto_check_p2


def test_p1_certificate_k4_t2():
    cert = pareto_check_p1(4, 2)
    assert cert.holds
    assert cert.rate == Fraction(2, 3)
    fewer_rows = sorted({c.label.split(":")[0] for c in cert.checks if "rate floor" in c.label})
    # Z' = F'/2 integral and 0 < Z' < F' leaves F' in {2, 4}
    assert fewer_rows == ["F'=2, Z'=1", "F'=4, Z'=2"]
    assert "verified" in cert.to_text()


def test_p1_certificate_k5_t3():
    cert = pareto_check_p1(5, 3)
    assert cert.holds
    assert cert.rate == Fraction(1, 2)


@pytest.mark.parametrize("k,t", [(k, t) for k in range(3, 9) for t in range(1, k - 1)])
def test_p1_certificates_hold(k, t):
    assert pareto_check_p1(k, t).holds


@pytest.mark.parametrize("k,t", [(k, t) for k in range(3, 9) for t in range(1, k - 1)])
def test_p2_certificates_hold(k, t):
    cert = pareto_check_p2(k, t)
    assert cert.holds
    assert cert.rate == Fraction(cert.params[3], k)


@pytest.mark.parametrize("k,t", [(k, t) for k in range(2, 9) for t in range(1, k)])
def test_mn_certificates_hold(k, t):
    assert pareto_check_mn(k, t).holds


def test_out_of_range():
    with pytest.raises(ParameterOutOfRange):
        pareto_check_p1(4, 3)
    with pytest.raises(ParameterOutOfRange):
        pareto_check_p2(3, 2)


def test_failed_check_is_reported():
    cert = pareto_check_p2(4, 2)
    cert.add("deliberately false", 1, ">", 2)
    assert not cert.holds
    assert "NOT verified" in cert.to_text() and "[FAILS] deliberately false" in cert.to_text()
