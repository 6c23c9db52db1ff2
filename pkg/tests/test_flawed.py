"""The broken prior design and the two-colluder attack on it."""

import itertools

import pytest

from evolve3.errors import CapacityError, ParameterError
from evolve3.evolving import EvolvingDealer, reconstruct
from evolve3.flawed import (
    DEFAULT_MAX_GENERATION,
    FlawedDealer,
    attack_transcript_sweep,
    flawed_inner_degree,
    flawed_reconstruct,
    mask_bits,
    two_party_attack,
)
from evolve3.generations import GenerationLayout
from evolve3.randomness import Sha256Bits

SEED = b"\x21" * 32


def test_flawed_inner_degree_reserves_a_point():
    L = GenerationLayout.toy([4, 4, 8])
    assert [flawed_inner_degree(L, g, 1) for g in (1, 2, 3)] == [4, 4, 5]
    assert [L.inner_degree(g, 1) for g in (1, 2, 3)] == [3, 3, 4]
    S = GenerationLayout.standard()
    assert [flawed_inner_degree(S, g, 8) for g in (1, 2, 3)] == [2, 3, 9]


def test_mask_width_is_the_largest_back_share():
    assert mask_bits(GenerationLayout.toy([4, 4, 8]), 1) == 5
    assert mask_bits(GenerationLayout.toy([2, 2, 2]), 1) == 3
    assert mask_bits(GenerationLayout.standard(), 8, max_generation=3) == 72
    assert mask_bits(GenerationLayout.standard(), 8) == 8 * 33  # four generations


def test_bundle_structure():
    d = FlawedDealer(0x4D, ell=8, rng=Sha256Bits(SEED))
    b1, b17, b65537 = d.issue(1), d.issue(17), d.issue(65537)
    # curve indices are 1-based; index 0 stays reserved for the back share
    assert b1.curve.index == 1
    assert b17.curve.index == 1 and b17.t == 17
    assert b65537.generation == 3
    assert len(b65537.forwards) == 2 and len(b65537.masked) == 2
    assert all(v < (1 << d.mask_bits) for v in b65537.masked)
    assert b1.mask_bits == d.mask_bits
    # the masked pieces hide the issuing generation's own back share
    g3 = d.generation_state(3)
    zback = g3.dealer.params.ext.to_index(g3.back.value)
    for j, masked in enumerate(b65537.masked, start=1):
        assert masked == d.generation_state(j).pad ^ zback
    # and the back share is the curve evaluated at raw point 0, i.e. c0
    assert g3.back.value == g3.dealer.c0


def test_flawed_reconstruct_every_triple():
    layout = GenerationLayout.toy([2, 2, 2])
    for secret in (0, 1):
        d = FlawedDealer(secret, ell=1, layout=layout, rng=Sha256Bits(SEED),
                         intergen_width=2)
        bundles = {t: d.issue(t) for t in range(1, 7)}
        for trio in itertools.combinations(range(1, 7), 3):
            assert flawed_reconstruct(*(bundles[t] for t in trio)) == secret, trio


def test_flawed_reconstruct_at_production_sizes():
    d = FlawedDealer(0xB7, ell=8, rng=Sha256Bits(SEED))
    b = {t: d.issue(t) for t in (1, 2, 17, 18, 19, 65537)}
    assert flawed_reconstruct(b[1], b[17], b[65537]) == 0xB7  # three generations
    assert flawed_reconstruct(b[17], b[18], b[19]) == 0xB7    # one generation
    assert flawed_reconstruct(b[1], b[2], b[17]) == 0xB7      # pair below a loner
    assert flawed_reconstruct(b[1], b[17], b[18]) == 0xB7     # loner below a pair


def test_two_party_attack_standard_layout():
    for secret in (0x00, 0x01, 0x7F, 0xFF, 0x5A):
        d = FlawedDealer(secret, ell=8, rng=Sha256Bits(SEED))
        assert two_party_attack(d.issue(17), d.issue(65537)) == secret


def test_two_party_attack_toy_layout_many_seeds():
    layout = GenerationLayout.toy([4, 4, 8])
    for seed_byte in range(10):
        for secret in (0, 1):
            d = FlawedDealer(secret, ell=1, layout=layout,
                             rng=Sha256Bits(bytes([seed_byte]) * 32),
                             intergen_width=2)
            assert two_party_attack(d.issue(5), d.issue(9)) == secret
            assert two_party_attack(d.issue(8), d.issue(16)) == secret


def test_attack_needs_the_right_generations():
    d = FlawedDealer(0x10, ell=8, rng=Sha256Bits(SEED))
    b1, b17, b18, b65537 = d.issue(1), d.issue(17), d.issue(18), d.issue(65537)
    with pytest.raises(ParameterError):
        two_party_attack(b1, b17)  # lower participant in generation 1
    with pytest.raises(ParameterError):
        two_party_attack(b17, b18)  # same generation
    with pytest.raises(ParameterError):
        two_party_attack(b65537, b17)  # not in a later generation
    with pytest.raises(ParameterError):
        two_party_attack(b17, b17)


def test_attack_rejects_mismatched_schemes():
    a = FlawedDealer(0x10, ell=8, rng=Sha256Bits(SEED), max_generation=3)
    b = FlawedDealer(0x10, ell=8, rng=Sha256Bits(SEED), max_generation=4)
    with pytest.raises(ParameterError):
        two_party_attack(a.issue(17), b.issue(65537))  # pad widths differ


def test_revised_bundles_are_structurally_immune():
    revised = EvolvingDealer(0x2E, ell=8, rng=Sha256Bits(SEED))
    r17, r65537 = revised.issue(17), revised.issue(65537)
    with pytest.raises(ParameterError):
        two_party_attack(r17, r65537)
    with pytest.raises(ParameterError):
        flawed_reconstruct(r17, r65537, revised.issue(1))
    flawed = FlawedDealer(0x2E, ell=8, rng=Sha256Bits(SEED))
    with pytest.raises(ParameterError):
        reconstruct(flawed.issue(1), flawed.issue(17), flawed.issue(65537))


def test_dealer_capacity_is_fixed_by_the_pad_width():
    d = FlawedDealer(0x10, ell=8, rng=Sha256Bits(SEED), max_generation=2)
    d.issue(17)
    with pytest.raises(CapacityError):
        d.issue(65537)
    assert DEFAULT_MAX_GENERATION == 4


def test_sweep_covers_everything_and_always_wins():
    layout = GenerationLayout.toy([2, 2, 2])
    successes, total = attack_transcript_sweep(1, layout, 3, 5)
    # secrets(2) x c1_g1(8) x c0_g1(8) x c0_g2(8) x pads(8 x 8)
    assert total == 2 * 8 * 8 * 8 * 8 * 8
    assert successes == total


def test_sweep_refuses_oversized_spaces():
    with pytest.raises(CapacityError):
        attack_transcript_sweep(8, GenerationLayout.standard(), 17, 65537)
    with pytest.raises(ParameterError):
        attack_transcript_sweep(1, GenerationLayout.toy([2, 2, 2]), 1, 5)
