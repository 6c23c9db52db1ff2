"""The earlier, broken bundle design, kept for demonstration and audits.

It differs from evolving.py in one structural choice: each generation
publishes a "back share" (the curve share at reserved index 0, a full
extension-field element) and the masked pieces hide that back share
rather than the ell-bit forward share:

  masked[j-1] = pad_j XOR zext(back share of the own generation)

with every pad as wide as the largest back share so the XOR lines up.
Participants use curve indices 1..S, leaving 0 reserved, so the inner
field needs one more point than the revised design.

That choice is fatal.  Two participants, one in generation g1 >= 2 and
one in a later generation g2, can walk the masks with no third party:

  zext(back_g2) = low.pad  XOR high.masked[g1-1]   (both use pad_g1)
  pad_1         = zext(back_g2) XOR high.masked[0]
  zext(back_g1) = pad_1 XOR low.masked[0]

and back_g1 plus low's own curve share plus generation g1's forward
share (printed in plain inside high.forwards) is a full quorum of the
inner quadratic.  two_party_attack implements exactly this walk; the
audit module shows the corresponding transcript distributions for the
pair are almost disjoint across secrets, while the revised design
measures exact distance zero.

Bundles of the revised scheme carry no back share and nothing masked
under a cross-generation pad, so the walk is structurally impossible
there; two_party_attack only accepts FlawedBundle values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .conventional import (
    CurveShare,
    QuadraticDealer,
    SchemeParams,
    reconstruct_pair_with_forward,
    reconstruct_three,
)
from .errors import CapacityError, ParameterError
from .evolving import IntergenScheme, IntergenShare, QuadraticIntergen
from .generations import GenerationLayout, ceil_log2
from .randomness import RandomBits, SystemBits

DEFAULT_MAX_GENERATION = 4


def flawed_inner_degree(layout: GenerationLayout, i: int, ell: int) -> int:
    """Inner extension degree: the reserved index 0 costs one extra point."""
    need = ceil_log2(layout.generation_size(i) + 1) + 1
    return max(2, -(-need // ell))


def mask_bits(layout: GenerationLayout, ell: int,
              max_generation: int = DEFAULT_MAX_GENERATION) -> int:
    """One pad width for the whole dealer: the largest back share, in bits."""
    count = layout.generation_count
    if count is None:
        count = max_generation
    return ell * max(flawed_inner_degree(layout, i, ell) for i in range(1, count + 1))


@dataclass(frozen=True)
class FlawedGenerationState:
    index: int
    dealer: QuadraticDealer
    back: CurveShare  # curve share at reserved index 0
    pad: int  # mask_bits wide


@dataclass(frozen=True)
class FlawedBundle:
    ell: int
    layout: GenerationLayout
    t: int
    generation: int
    index: int
    intergen: IntergenShare
    forwards: tuple[int, ...]
    curve: CurveShare
    masked: tuple[int, ...]  # pad_j XOR zero-extended own back share
    pad: int
    mask_bits: int


class FlawedDealer:
    """Same shape as EvolvingDealer, issuing the broken bundles."""

    def __init__(
        self,
        secret: int,
        ell: int = 8,
        layout: GenerationLayout | None = None,
        rng: RandomBits | None = None,
        intergen: IntergenScheme | None = None,
        intergen_width: int | None = None,
        max_generation: int = DEFAULT_MAX_GENERATION,
    ):
        if ell < 1:
            raise ParameterError("ell must be at least 1")
        if not isinstance(secret, int) or secret < 0 or secret >> ell:
            raise ParameterError("secret must be an integer of at most %d bits" % ell)
        if max_generation < 1:
            raise ParameterError("max_generation must be at least 1")
        self.ell = ell
        self.layout = layout if layout is not None else GenerationLayout.standard()
        self._rng = rng if rng is not None else SystemBits()
        self.secret = secret
        self.max_generation = (
            self.layout.generation_count
            if self.layout.generation_count is not None
            else max_generation
        )
        self.mask_bits = mask_bits(self.layout, ell, self.max_generation)
        if intergen is None:
            intergen = QuadraticIntergen(secret, ell, self._rng, width=intergen_width)
        elif intergen_width is not None:
            raise ParameterError("intergen_width only applies to the default scheme")
        self.intergen = intergen
        self._generations: dict[int, FlawedGenerationState] = {}

    def generation_state(self, i: int) -> FlawedGenerationState:
        if i < 1:
            raise ParameterError("generations are numbered from 1")
        if i > self.max_generation:
            raise CapacityError(
                "this dealer fixed its pad width for generations up to %d"
                % self.max_generation
            )
        for k in range(len(self._generations) + 1, i + 1):
            params = SchemeParams.standard(
                self.ell, flawed_inner_degree(self.layout, k, self.ell)
            )
            dealer = QuadraticDealer.deal(params, self.secret, self._rng)
            pad = self._rng.bits(self.mask_bits)
            self._generations[k] = FlawedGenerationState(
                k, dealer, dealer.share_at(0), pad
            )
        return self._generations[i]

    def issue(self, t: int) -> FlawedBundle:
        locus = self.layout.locus(t)
        g = locus.generation
        state = self.generation_state(g)
        earlier = [self.generation_state(j) for j in range(1, g)]
        zback = state.dealer.params.ext.to_index(state.back.value)
        return FlawedBundle(
            ell=self.ell,
            layout=self.layout,
            t=t,
            generation=g,
            index=locus.index,
            intergen=self.intergen.share(g),
            forwards=tuple(e.dealer.forward_share for e in earlier),
            curve=state.dealer.share_at(locus.index),
            masked=tuple(e.pad ^ zback for e in earlier),
            pad=state.pad,
            mask_bits=self.mask_bits,
        )


def _check_flawed(b) -> None:
    if not isinstance(b, FlawedBundle):
        raise ParameterError(
            "expected a flawed-scheme bundle, got %r; revised bundles carry "
            "no back share so this operation does not apply" % type(b).__name__
        )
    if len(b.forwards) != b.generation - 1 or len(b.masked) != b.generation - 1:
        raise ParameterError("bundle piece counts do not match its generation")


def _params_for(b: FlawedBundle, generation: int) -> SchemeParams:
    return SchemeParams.standard(
        b.ell, flawed_inner_degree(b.layout, generation, b.ell)
    )


def flawed_reconstruct(b1: FlawedBundle, b2: FlawedBundle, b3: FlawedBundle,
                       intergen_reconstruct=None) -> int:
    """Honest three-party reconstruction for the broken design."""
    bundles = [b1, b2, b3]
    for b in bundles:
        _check_flawed(b)
    if len({b.t for b in bundles}) != 3:
        raise ParameterError("bundles must come from three distinct participants")
    if len({(b.ell, b.layout, b.mask_bits) for b in bundles}) != 1:
        raise ParameterError("bundles come from different schemes")
    ell = b1.ell
    mask = (1 << ell) - 1

    by_gen: dict[int, list[FlawedBundle]] = {}
    for b in bundles:
        by_gen.setdefault(b.generation, []).append(b)
    gens = sorted(by_gen)

    if len(gens) == 3:
        combine = intergen_reconstruct or QuadraticIntergen.reconstruct
        return combine([b.intergen for b in bundles]) & mask

    if len(gens) == 1:
        return reconstruct_three(
            _params_for(b1, gens[0]), [b.curve for b in bundles]
        )

    low, high = gens
    if len(by_gen[low]) == 2:
        # two low, one high: high publishes low's forward share in plain
        single = by_gen[high][0]
        pair = by_gen[low]
        return reconstruct_pair_with_forward(
            _params_for(b1, low), pair[0].curve, pair[1].curve,
            single.forwards[low - 1],
        )
    # one low, two high: low's pad unmasks high's back share, giving a
    # third curve point next to the two high curve shares
    lone = by_gen[low][0]
    pair = by_gen[high]
    params = _params_for(b1, high)
    zback = lone.pad ^ pair[0].masked[low - 1]
    back = CurveShare(0, params.ext.from_index(zback & (params.ext.order - 1)))
    return reconstruct_three(params, [back, pair[0].curve, pair[1].curve])


def two_party_attack(b_low: FlawedBundle, b_high: FlawedBundle) -> int:
    """Recover the secret from just two bundles of the broken design.

    Needs the lower participant in generation >= 2 (its masked piece
    must be nonempty) and the other participant in a strictly later
    generation.  Walks the pads as described in the module docstring.
    """
    _check_flawed(b_low)
    _check_flawed(b_high)
    if b_low.t == b_high.t:
        raise ParameterError("the attack needs two distinct participants")
    if (b_low.ell, b_low.layout, b_low.mask_bits) != (
        b_high.ell, b_high.layout, b_high.mask_bits
    ):
        raise ParameterError("bundles come from different schemes")
    g1, g2 = b_low.generation, b_high.generation
    if g1 < 2:
        raise ParameterError(
            "the lower participant must sit in generation 2 or later; a "
            "generation-1 bundle has no masked piece to walk from"
        )
    if g2 <= g1:
        raise ParameterError("the second participant must be in a later generation")

    zback_high = b_low.pad ^ b_high.masked[g1 - 1]
    pad_1 = zback_high ^ b_high.masked[0]
    zback_low = pad_1 ^ b_low.masked[0]

    params = _params_for(b_low, g1)
    back = CurveShare(0, params.ext.from_index(zback_low & (params.ext.order - 1)))
    forward = b_high.forwards[g1 - 1]
    return reconstruct_pair_with_forward(params, back, b_low.curve, forward)


def attack_transcript_sweep(ell: int, layout: GenerationLayout,
                            t_low: int, t_high: int) -> tuple[int, int]:
    """Exhaust the attack over everything its transcript consumes.

    The attack reads low.pad, low.masked[0], low.curve, high.masked,
    high.forwards[g1-1]; those depend on exactly five dealer draws (the
    pads of generations 1 and g1 and the coefficients c0_g1, c1_g1,
    c0_g2) plus the secret.  This sweeps every assignment of those and
    every secret, running the attack's walk on each, and returns
    (successes, total runs).  Every table consulted is filled by the
    real dealer and reconstruction routines over their full domains.
    """
    locus_low = layout.locus(t_low)
    locus_high = layout.locus(t_high)
    g1, g2 = locus_low.generation, locus_high.generation
    if g1 < 2 or g2 <= g1:
        raise ParameterError("sweep needs generation(t_low) >= 2 and a later t_high")
    L = mask_bits(layout, ell, max(g1, g2))
    p1 = SchemeParams.standard(ell, flawed_inner_degree(layout, g1, ell))
    p2 = SchemeParams.standard(ell, flawed_inner_degree(layout, g2, ell))
    n1, n2 = p1.ext.order, p2.ext.order
    n_sec = 1 << ell
    lm1_mask = n1 - 1
    runs = n_sec * n1 * n1 * n2 << (2 * L)
    if runs > 1 << 25:
        raise CapacityError(
            "sweep would take %d runs, over the 2^25 cap; use a smaller "
            "field or toy layout" % runs
        )

    # curve value and forward share of generation g1, per secret and draw
    curve_val = [
        [
            [
                p1.ext.to_index(
                    QuadraticDealer(
                        p1,
                        p1.ext.from_index(c0),
                        p1.ext.from_index(c1),
                        p1.ext.base.add(p1.ext.from_index(c1)[0], s),
                        s,
                    ).share_at(locus_low.index).value
                )
                for c1 in range(n1)
            ]
            for c0 in range(n1)
        ]
        for s in range(n_sec)
    ]
    fwd_val = [
        [p1.ext.base.add(p1.ext.from_index(c1)[0], s) for c1 in range(n1)]
        for s in range(n_sec)
    ]
    # final step over its whole domain: (recovered back, own curve, forward)
    recon = [
        [
            [
                reconstruct_pair_with_forward(
                    p1,
                    CurveShare(0, p1.ext.from_index(zb)),
                    CurveShare(locus_low.index, p1.ext.from_index(cv)),
                    f,
                )
                for f in range(n_sec)
            ]
            for cv in range(n1)
        ]
        for zb in range(n1)
    ]

    successes = total = 0
    for s in range(n_sec):
        cv_s, fwd_s = curve_val[s], fwd_val[s]
        for c1 in range(n1):
            forward = fwd_s[c1]
            for c0_low in range(n1):
                own_curve = cv_s[c0_low][c1]
                # back shares evaluate the quadratics at point 0: the c0 draw
                for c0_high in range(n2):
                    for pad_1 in range(1 << L):
                        low_masked0 = pad_1 ^ c0_low
                        high_masked0 = pad_1 ^ c0_high
                        for pad_g1 in range(1 << L):
                            high_masked_g1 = pad_g1 ^ c0_high
                            zback_high = pad_g1 ^ high_masked_g1
                            pad_1_rec = zback_high ^ high_masked0
                            zback_low = pad_1_rec ^ low_masked0
                            got = recon[zback_low & lm1_mask][own_curve][forward]
                            total += 1
                            if got == s:
                                successes += 1
    return successes, total
