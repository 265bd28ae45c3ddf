from fractions import Fraction
from math import ceil, comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pdakit import (
    DegenerateInput,
    NonIntegralParameter,
    NonIntegralZ,
    PdaError,
    bound_first,
    bound_first_terms,
    bound_rate_tradeoff,
    bound_report,
    bound_rows_for_regular,
    bound_second,
    bound_second_terms,
    build_mn,
    build_variant,
    meets_row_bound,
    tradeoff_is_loose,
    validate,
)


def test_first_bound_examples():
    assert bound_first(4, 6, 3) == 4
    assert bound_first_terms(4, 6, 3) == (72, 18)
    assert bound_first(2, 2, 1) == 1
    assert bound_first(6, 8, 5) == Fraction(144, 38)
    assert ceil(bound_first(6, 8, 5)) == 4


def test_second_bound_examples():
    assert bound_second_terms(6, 8, 5) == [3, 1, 1]
    assert bound_second(6, 8, 5) == 5
    assert bound_second_terms(4, 6, 3) == [2, 1, 1]
    assert bound_second(1, 2, 1) == 1


def test_degenerate_inputs():
    for args in [(4, 6, 6), (4, 6, 7), (0, 2, 1), (2, 0, 0), (2, 3, -1)]:
        with pytest.raises(DegenerateInput):
            bound_first(*args)
        with pytest.raises(DegenerateInput):
            bound_second(*args)
    # Z = 0 is a legitimate PDA with no caching
    assert bound_second(3, 2, 0) == 6


def test_rate_tradeoff():
    assert bound_rate_tradeoff(6, 4, Fraction(1, 2)) == 1
    assert bound_rate_tradeoff(4, 6, Fraction(1, 2)) == Fraction(1, 2)
    assert tradeoff_is_loose(4, 6) and not tradeoff_is_loose(6, 4)
    with pytest.raises(NonIntegralZ):
        bound_rate_tradeoff(4, 5, Fraction(1, 2))
    with pytest.raises(DegenerateInput):
        bound_rate_tradeoff(4, 4, Fraction(1))


@pytest.mark.parametrize("k,t", [(k, t) for k in range(3, 9) for t in range(1, k - 1)])
def test_tradeoff_equality_for_p2(k, t):
    assert bound_rate_tradeoff(comb(k, t), k, Fraction(t, k)) == Fraction(comb(k, t + 1), k)


def test_row_bound():
    assert bound_rows_for_regular(4, 2, 1) == 6
    assert bound_rows_for_regular(2, 2, 1) == 2
    assert bound_rows_for_regular(6, 2, 1) == 20
    assert validate(build_mn((6, 3))).params.F == 20
    assert meets_row_bound(4, 6, 3) and not meets_row_bound(4, 4, 2)
    with pytest.raises(NonIntegralParameter):
        bound_rows_for_regular(4, 3, 1)


def test_report():
    r = bound_report(6, 8, 5, achievable_S=5)
    assert (r.bound1_ceiling, r.bound2, r.best) == (4, 5, 5)
    text = r.to_text()
    assert "144/38 = 72/19" in text and "5 = 3 + 1 + 1" in text
    assert r.to_csv().splitlines()[1] == "6,8,5,18,72/19,4,5,3/8,true,5"
    with pytest.raises(PdaError):
        bound_report(6, 8, 5, achievable_S=4)


@given(st.integers(1, 30), st.integers(2, 30), st.data())
def test_second_bound_floor(K, F, data):
    Z = data.draw(st.integers(0, F - 1))
    b2 = bound_second(K, F, Z)
    # the chain ends at ceil((F - Z)K / (Z + 1)); also S >= F - Z trivially
    assert b2 >= ceil(Fraction((F - Z) * K, Z + 1))
    assert b2 >= F - Z
    assert len(bound_second_terms(K, F, Z)) == F - Z


@pytest.mark.parametrize("k,t", [(4, 2), (5, 2), (5, 3), (6, 2), (6, 4), (7, 3)])
@pytest.mark.parametrize("which", "abcdef")
def test_bounds_sound_on_constructions(k, t, which):
    K, F, Z, S = validate(build_variant((k, t), which)).params.tuple()
    assert S >= bound_first(K, F, Z)
    assert S >= bound_second(K, F, Z)
