"""The evolving scheme: bundles, reconstruction routes, sizes."""

import itertools

import pytest

from evolve3.errors import CapacityError, ParameterError
from evolve3.evolving import (
    BundleSizes,
    EvolvingDealer,
    IntergenShare,
    QuadraticIntergen,
    intergen_width_for,
    reconstruct,
    size_table,
)
from evolve3.generations import GenerationLayout
from evolve3.gf2 import BaseField
from evolve3.conventional import QuadraticDealer, SchemeParams
from evolve3.randomness import BitTape, Sha256Bits

SEED = b"\x07" * 32


# ---------------------------------------------------------------------------
# the cross-generation scheme


def test_intergen_width_default():
    assert intergen_width_for(1) == 16
    assert intergen_width_for(8) == 16
    assert intergen_width_for(16) == 16
    assert intergen_width_for(24) == 24


def test_intergen_reconstruct_exhaustive_w2():
    F = BaseField.canonical(2)
    for secret in range(4):
        for r1 in range(4):
            for r2 in range(4):
                tape = BitTape(r1 | (r2 << 2), 4)
                scheme = QuadraticIntergen(secret, 2, tape, width=2)
                shares = [scheme.share(g) for g in (1, 2, 3)]
                assert QuadraticIntergen.reconstruct(shares) == secret
                # oracle: the set of secrets consistent with the three
                # observed values must be exactly {secret}
                consistent = set()
                for s in range(4):
                    for a in range(4):
                        for b in range(4):
                            ok = all(
                                s ^ F.mul(a, g) ^ F.mul(b, F.mul(g, g)) == sh.value
                                for g, sh in zip((1, 2, 3), shares)
                            )
                            if ok:
                                consistent.add(s)
                assert consistent == {secret}


def test_intergen_share_is_stable_and_validated():
    scheme = QuadraticIntergen(0xAB, 8, Sha256Bits(SEED))
    assert scheme.share_bits == 16
    assert scheme.share(5) == scheme.share(5)
    assert scheme.share(5).width == 16
    with pytest.raises(ParameterError):
        scheme.share(0)
    with pytest.raises(CapacityError):
        scheme.share(1 << 16)
    with pytest.raises(ParameterError):
        QuadraticIntergen(0xAB, 8, Sha256Bits(SEED), width=4)  # narrower than ell


def test_intergen_reconstruct_validation():
    scheme = QuadraticIntergen(3, 2, Sha256Bits(SEED), width=4)
    s1, s2, s3 = (scheme.share(g) for g in (1, 2, 3))
    with pytest.raises(ParameterError):
        QuadraticIntergen.reconstruct([s1, s2])
    with pytest.raises(ParameterError):
        QuadraticIntergen.reconstruct([s1, s2, scheme.share(2)])
    other = QuadraticIntergen(3, 2, Sha256Bits(SEED), width=5)
    with pytest.raises(ParameterError):
        QuadraticIntergen.reconstruct([s1, s2, other.share(3)])
    assert QuadraticIntergen.reconstruct([s1, s2, s3]) == 3


# ---------------------------------------------------------------------------
# dealing


def test_dealer_is_deterministic_under_a_seed():
    a = EvolvingDealer(0x99, ell=8, rng=Sha256Bits(SEED))
    b = EvolvingDealer(0x99, ell=8, rng=Sha256Bits(SEED))
    for t in (1, 5, 17, 65537, 2):
        assert a.issue(t) == b.issue(t)


def test_bundles_do_not_depend_on_issue_order():
    a = EvolvingDealer(0x42, ell=8, rng=Sha256Bits(SEED))
    b = EvolvingDealer(0x42, ell=8, rng=Sha256Bits(SEED))
    ts = [1, 17, 65537, 2, 18]
    got_a = {t: a.issue(t) for t in ts}
    for t in reversed(ts):
        assert b.issue(t) == got_a[t]


def test_dealer_draw_schedule_is_frozen():
    # toy layout (1, 1), ell=1, intergen width 2: the whole dealer tape
    # is 14 bits: r1(2) r2(2) then per generation c0(2) c1(2) pad(1)
    layout = GenerationLayout.toy([1, 1])
    F = BaseField.canonical(2)
    for tape_value in range(1 << 14):
        secret = tape_value & 1  # reuse low bit as a varied secret
        tape = BitTape(tape_value, 14)
        dealer = EvolvingDealer(
            secret, ell=1, layout=layout, rng=tape, intergen_width=2
        )
        b1, b2 = dealer.issue(1), dealer.issue(2)
        assert tape.remaining == 0

        r1 = tape_value & 3
        r2 = (tape_value >> 2) & 3
        c0_1 = (tape_value >> 4) & 3
        c1_1 = (tape_value >> 6) & 3
        pad_1 = (tape_value >> 8) & 1
        c0_2 = (tape_value >> 9) & 3
        c1_2 = (tape_value >> 11) & 3
        pad_2 = (tape_value >> 13) & 1

        for g, bundle in ((1, b1), (2, b2)):
            expect = secret ^ F.mul(r1, g) ^ F.mul(r2, F.mul(g, g))
            assert bundle.intergen == IntergenShare(g, expect, 2)

        params = SchemeParams.standard(1, 2)
        ext = params.ext
        d1 = QuadraticDealer(
            params,
            ext.from_index(c0_1),
            ext.from_index(c1_1),
            (c1_1 & 1) ^ secret,
            secret,
        )
        d2 = QuadraticDealer(
            params,
            ext.from_index(c0_2),
            ext.from_index(c1_2),
            (c1_2 & 1) ^ secret,
            secret,
        )
        assert b1.curve == d1.share_at(0)
        assert b2.curve == d2.share_at(0)
        assert b1.forwards == () and b1.masked == ()
        assert b1.pad == pad_1
        assert b2.forwards == (d1.forward_share,)
        assert b2.masked == (pad_1 ^ d2.forward_share,)
        assert b2.pad == pad_2


def test_generations_materialize_lazily_in_order():
    d = EvolvingDealer(1, ell=8, rng=Sha256Bits(SEED))
    assert d.generations_materialized == 0
    d.issue(17)
    assert d.generations_materialized == 2
    d.issue(1)
    assert d.generations_materialized == 2
    d.issue(65537)
    assert d.generations_materialized == 3
    assert d.issued == 3


def test_same_generation_bundles_share_generation_pieces():
    d = EvolvingDealer(7, ell=8, rng=Sha256Bits(SEED))
    a, b = d.issue(17), d.issue(20)
    assert a.pad == b.pad
    assert a.forwards == b.forwards
    assert a.masked == b.masked
    assert a.curve != b.curve
    assert a.intergen == b.intergen


def test_issue_validates_capacity_and_secret():
    layout = GenerationLayout.toy([2, 2])
    d = EvolvingDealer(1, ell=1, layout=layout, rng=Sha256Bits(SEED), intergen_width=2)
    with pytest.raises(CapacityError):
        d.issue(5)
    with pytest.raises(ParameterError):
        d.issue(0)
    with pytest.raises(ParameterError):
        EvolvingDealer(2, ell=1)
    with pytest.raises(ParameterError):
        EvolvingDealer(-1, ell=8)
    with pytest.raises(ParameterError):
        EvolvingDealer(1, ell=0)


# ---------------------------------------------------------------------------
# reconstruction


def test_every_triple_reconstructs_on_a_toy_layout():
    layout = GenerationLayout.toy([2, 2, 2])
    for secret in (0, 1):
        d = EvolvingDealer(secret, ell=1, layout=layout, rng=Sha256Bits(SEED),
                           intergen_width=2)
        bundles = {t: d.issue(t) for t in range(1, 7)}
        for trio in itertools.combinations(range(1, 7), 3):
            picked = [bundles[t] for t in trio]
            assert reconstruct(*picked) == secret, trio


def test_every_route_reconstructs_at_production_sizes():
    d = EvolvingDealer(0xE1, ell=8, rng=Sha256Bits(SEED))
    b = {t: d.issue(t) for t in (1, 2, 3, 17, 18, 65537, 65538)}
    assert reconstruct(b[1], b[17], b[65537]) == 0xE1    # three generations
    assert reconstruct(b[1], b[2], b[3]) == 0xE1         # one generation
    assert reconstruct(b[1], b[2], b[17]) == 0xE1        # forward-assisted
    assert reconstruct(b[1], b[17], b[18]) == 0xE1       # pad-unmasked
    assert reconstruct(b[17], b[65537], b[65538]) == 0xE1
    assert reconstruct(b[2], b[18], b[65537]) == 0xE1


def test_reconstruct_order_does_not_matter():
    d = EvolvingDealer(0x33, ell=8, rng=Sha256Bits(SEED))
    b = [d.issue(t) for t in (5, 30, 70000)]
    results = {reconstruct(*perm) for perm in itertools.permutations(b)}
    assert results == {0x33}


def test_reconstruct_validation():
    d = EvolvingDealer(0x33, ell=8, rng=Sha256Bits(SEED))
    b1, b2, b3 = (d.issue(t) for t in (1, 2, 17))
    with pytest.raises(ParameterError):
        reconstruct(b1, b2, b2)
    with pytest.raises(ParameterError):
        reconstruct(b1, b2, "junk")
    other = EvolvingDealer(0x3, ell=4, rng=Sha256Bits(SEED))
    with pytest.raises(ParameterError):
        reconstruct(b1, b2, other.issue(18))
    toy = EvolvingDealer(0x33, ell=8, layout=GenerationLayout.toy([20, 20]),
                         rng=Sha256Bits(SEED))
    with pytest.raises(ParameterError):
        reconstruct(b1, b2, toy.issue(19))


def test_custom_intergen_reconstruct_hook():
    d = EvolvingDealer(0x5F, ell=8, rng=Sha256Bits(SEED))
    b = [d.issue(t) for t in (1, 17, 65537)]
    calls = []

    def spy(shares):
        calls.append(tuple(s.generation for s in shares))
        return QuadraticIntergen.reconstruct(shares)

    assert reconstruct(*b, intergen_reconstruct=spy) == 0x5F
    assert calls == [(1, 2, 3)]


# ---------------------------------------------------------------------------
# sizes


def test_measured_sizes_match_formulas():
    d = EvolvingDealer(0xAA, ell=8, rng=Sha256Bits(SEED))
    for t in (1, 2, 3, 16, 17, 65536, 65537, 70000):
        measured = BundleSizes.measure(d.issue(t))
        assert measured == BundleSizes.expect(8, t)
        assert measured.identity_holds


def test_frozen_totals_at_width_8():
    totals = {t: BundleSizes.expect(8, t).total_bits for t in (1, 17, 65537)}
    assert totals == {1: 40, 17: 64, 65537: 128}


def test_bound_verdicts_at_width_8():
    verdicts = {
        t: BundleSizes.expect(8, t).bound_holds for t in (3, 16, 17, 65536, 65537)
    }
    # the generation-start sizes overshoot the bound at width 8; the
    # late-generation interior (65536) is fine
    assert verdicts == {3: False, 16: False, 17: False, 65536: True, 65537: False}
    assert BundleSizes.expect(8, 2).bound_holds is None
    assert not BundleSizes.expect(8, 2).bound_applicable


def test_bound_verdicts_at_width_1():
    assert BundleSizes.expect(1, 8).bound_holds is True
    assert BundleSizes.expect(1, 5).bound_holds is False
    assert BundleSizes.expect(1, 65536).bound_holds is True


def test_size_table_is_consistent():
    rows = size_table(8, [1, 17, 65537])
    assert [r.t for r in rows] == [1, 17, 65537]
    assert [r.total_bits for r in rows] == [40, 64, 128]
    for row in rows:
        assert row.identity_holds
