from fractions import Fraction
from pathlib import Path

import pytest

from pdakit import (
    DecodeFailure,
    DimensionMismatch,
    FileLibrary,
    SweepTooLarge,
    build_variant,
    decode,
    deliver,
    demand_sweep,
    parse_text,
    place,
    simulate,
)

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def small_pda():
    return parse_text((FIXTURES / "pda_4_6_3_4.pda").read_text())


def test_golden_slot_listing(small_pda):
    lib = FileLibrary.random(4, 6, block_size=16, seed=3)
    transcript, files = simulate(small_pda, lib, (0, 1, 2, 3))
    expected = (FIXTURES / "slots_4_6_3_4_d0123.txt").read_text(encoding="utf-8").splitlines()
    assert transcript.symbolic() == expected
    assert transcript.rate_achieved == Fraction(2, 3)
    assert files == tuple(lib.file(i) for i in range(4))


def test_placement_matches_column_stars(small_pda):
    lib = FileLibrary.random(6, 6, block_size=4, seed=0)
    caches = place(small_pda, lib)
    assert {j for _, j in caches.indices(0)} == {0, 1, 2}
    assert {j for _, j in caches.indices(3)} == {2, 4, 5}
    # each user stores N Z packets, i.e. M = N Z / F files
    assert all(caches.size(k) == 6 * 3 for k in range(4))


def test_signals_are_xors(small_pda):
    lib = FileLibrary.random(4, 6, block_size=8, seed=1)
    t = deliver(small_pda, lib, (3, 3, 0, 1))
    w = lib.as_ints()
    # slot 0 carries W_{d0,3} ^ W_{d1,1} ^ W_{d2,0}
    assert int.from_bytes(t.signals[0], "big") == w[3][3] ^ w[3][1] ^ w[0][0]
    assert "  = " in t.to_table(payload=True)


def test_broken_array_fails_to_decode(small_pda):
    broken = small_pda.with_entry(0, 3, 0)
    lib = FileLibrary.random(4, 6, seed=0)
    with pytest.raises(DecodeFailure) as exc:
        simulate(broken, lib, (0, 1, 2, 3))
    # user 2 needs packet 0 from slot 0, which now also carries user 3's W_{3,0}
    assert exc.value.user == 2 and exc.value.packet == 0
    summary = demand_sweep(broken, 2, max_demands=16)
    assert not summary.ok and summary.demands_checked == 16


def test_decode_detects_tampered_signal(small_pda):
    lib = FileLibrary.random(4, 6, block_size=4, seed=0)
    caches = place(small_pda, lib)
    t = deliver(small_pda, lib, (0, 1, 2, 3))
    files = decode(small_pda, caches, t)
    assert files[0] == lib.file(0)
    bad = type(t)(t.demand, (bytes(4),) + t.signals[1:], t.contributors, t.F)
    assert decode(small_pda, caches, bad)[0] != lib.file(0)


def test_dimension_checks(small_pda):
    with pytest.raises(DimensionMismatch):
        simulate(small_pda, FileLibrary.random(4, 5), (0, 1, 2, 3))
    with pytest.raises(DimensionMismatch):
        simulate(small_pda, FileLibrary.random(4, 6), (0, 1, 2))
    with pytest.raises(DimensionMismatch):
        simulate(small_pda, FileLibrary.random(4, 6), (0, 1, 2, 4))
    with pytest.raises(DimensionMismatch):
        FileLibrary.random(0, 6)


def test_library_is_seeded():
    assert FileLibrary.random(3, 4, 8, seed=9) == FileLibrary.random(3, 4, 8, seed=9)
    assert FileLibrary.random(3, 4, 8, seed=9) != FileLibrary.random(3, 4, 8, seed=10)


def test_exhaustive_sweep_small_pda(small_pda):
    s = demand_sweep(small_pda, 4)
    assert s.ok and s.demands_checked == 256 and s.rate == Fraction(2, 3)


def test_sweep_guard(small_pda):
    with pytest.raises(SweepTooLarge):
        demand_sweep(small_pda, 4, max_demands=100)


@pytest.mark.parametrize("k,t", [(5, 2), (5, 3), (6, 2), (6, 4)])
@pytest.mark.parametrize("which", "cdef")
def test_sampled_sweeps_on_large_variants(k, t, which):
    p = build_variant((k, t), which)
    s = demand_sweep(p, p.num_cols, sampled=300, seed=k * 10 + t, block_size=8)
    assert s.ok and s.demands_checked == 300
    assert s.rate == Fraction(s.slots, p.num_rows)


def test_parallel_sweep_agrees(small_pda):
    s1 = demand_sweep(small_pda, 3)
    s2 = demand_sweep(small_pda, 3, workers=2)
    assert s1 == s2
