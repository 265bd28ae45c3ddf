from itertools import combinations
from math import comb

import pytest

from pdakit import (
    MnSpec,
    ParameterOutOfRange,
    bound_first,
    build_grouped_mn,
    build_mn,
    build_p1,
    build_p2,
    build_variant,
    family_params,
    first_bound_equality_holds,
    lex_rank,
    lex_unrank,
    validate,
    variant_params,
)

VARIANT_GRID = [(4, 2), (5, 2), (5, 3), (6, 2), (6, 4), (4, 1), (5, 1)]


@pytest.mark.parametrize("n,r", [(5, 2), (6, 3), (7, 1), (4, 4), (6, 0)])
def test_lex_rank_follows_enumeration_order(n, r):
    for rank, subset in enumerate(combinations(range(n), r)):
        assert lex_rank(subset, n) == rank
        assert lex_unrank(rank, n, r) == subset


@pytest.mark.parametrize("k,t", [(k, t) for k in range(2, 8) for t in range(1, k)])
def test_mn_parameters(k, t):
    p = build_mn(MnSpec(k, t))
    v = validate(p)
    assert v.ok and v.c2
    assert v.params.tuple() == (k, comb(k, t), comb(k - 1, t - 1), comb(k, t + 1))
    assert v.g == t + 1
    assert all(sum(x is None for x in row) == t for row in p.rows)
    # first bound met with equality
    assert bound_first(k, comb(k, t), comb(k - 1, t - 1)) == comb(k, t + 1)
    assert first_bound_equality_holds(v.stats)


def test_mn_rejects_bad_specs():
    for k, t in [(1, 0), (3, 0), (3, 3)]:
        with pytest.raises(ParameterOutOfRange):
            MnSpec(k, t)


def test_grouped():
    assert build_grouped_mn(4, 2, 1) == build_mn((4, 2))
    v = validate(build_grouped_mn(4, 2, 2))
    assert v.ok and v.params.tuple() == (8, 6, 3, 8)
    v = validate(build_grouped_mn(3, 1, 3))
    assert v.ok and v.params.tuple() == (9, 3, 1, 9)
    assert family_params("Grouped", k=4, t=2, m=2).tuple() == (8, 6, 3, 8)
    with pytest.raises(ParameterOutOfRange):
        build_grouped_mn(4, 2, 0)


@pytest.mark.parametrize("k,t", VARIANT_GRID)
@pytest.mark.parametrize("which", "abcdef")
def test_variants_validate_with_listed_parameters(k, t, which):
    v = validate(build_variant((k, t), which))
    assert v.ok and v.c2
    assert v.params.tuple() == variant_params(k, t, which)


def test_variant_formulas_spelled_out():
    k, t = 4, 2
    assert variant_params(k, t, "c") == (4, 6, 3, 4)
    assert variant_params(k, t, "f") == (6, 4, 2, 4)
    assert validate(build_p1(4, 2)).params.tuple() == (4, 6, 3, 4)
    assert validate(build_p2(4, 2)).params.tuple() == (6, 4, 2, 4)
    assert variant_params(7, 3, "c") == (35, 35, 31, 7)


@pytest.mark.parametrize("k,t", [(k, t) for k in range(3, 9) for t in range(1, k - 1)])
def test_variant_a_is_mn(k, t):
    assert build_variant((k, t), "a") == build_mn((k, t))


@pytest.mark.parametrize("k,t", [(k, t) for k in range(3, 12) for t in range(1, k - 1)])
def test_duality(k, t):
    tp = k - t - 1
    assert variant_params(k, t, "a") == variant_params(k, tp, "b")
    assert variant_params(k, t, "c") == variant_params(k, tp, "e")
    assert variant_params(k, t, "f") == variant_params(k, tp, "d")


def test_variants_need_t_below_k_minus_1():
    with pytest.raises(ParameterOutOfRange):
        build_variant((4, 3), "c")
    with pytest.raises(ParameterOutOfRange):
        build_variant((4, 2), "g")
    # MN itself is fine at t = k - 1
    assert validate(build_mn((4, 3))).params.tuple() == (4, 4, 3, 1)


def test_family_params():
    assert family_params("Yan", q=5, m=3).tuple() == (20, 500, 400, 125)
    assert family_params("Shang", q=3, m=3, l=2).tuple() == (27, 108, 96, 27)
    assert family_params("P1", k=7, t=3).tuple() == (35, 35, 31, 7)
    assert family_params("P2", k=4, t=2).tuple() == (6, 4, 2, 4)
    for bad in [dict(tag="Yan", q=1, m=2), dict(tag="Shang", q=3, m=2, l=3), dict(tag="Nope")]:
        with pytest.raises(ParameterOutOfRange):
            family_params(**bad)
    with pytest.raises(ParameterOutOfRange):
        family_params("MN", k=4)
