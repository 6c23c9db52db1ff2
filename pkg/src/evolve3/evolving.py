"""The evolving 3-threshold scheme.

One dealer serves an unbounded stream of participants.  Participant t
lands in a generation (see generations.py); each generation g runs its
own conventional quadratic scheme over a field just big enough for its
size, and a separate 3-threshold scheme spans whole generations.  The
bundle handed to participant t has five pieces:

  intergen   one share, for generation g, of the cross-generation scheme
  forwards   the forward shares of generations 1 .. g-1 (ell bits each)
  curve      the participant's own curve share inside generation g
  masked     generation g's forward share, one copy XORed with each
             earlier generation's pad (ell bits each)
  pad        generation g's own fresh one-time pad (ell bits)

Same-generation participants differ only in the curve piece.  Any
three bundles recover the secret:

  * three different generations: the intergen shares alone suffice;
  * one generation: three distinct curve shares of its quadratic;
  * two in a lower generation g1, one higher: the higher bundle carries
    generation g1's forward share in plain, completing the two curves;
  * one in a lower generation g1, two higher in g2: the lower bundle's
    pad unmasks the g2 forward share from a higher bundle's masked
    piece, completing the two g2 curves.

Two bundles reveal nothing; the audit module measures that claim
exhaustively on toy layouts.

Randomness is drawn in a frozen order so seeded dealers reproduce
bit-identically: the cross-generation scheme's two coefficients at
dealer creation, then per generation in ascending index c0, c1
(ell*m bits each, via the index bijection) and the pad (ell bits).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

from .conventional import (
    CurveShare,
    QuadraticDealer,
    SchemeParams,
    reconstruct_pair_with_forward,
    reconstruct_three,
)
from .errors import CapacityError, ParameterError, VerificationError
from .generations import GenerationLayout
from .gf2 import BaseField
from .randomness import RandomBits, SystemBits

DEFAULT_ELL = 8
MIN_INTERGEN_BITS = 16


def intergen_width_for(ell: int) -> int:
    """Default cross-generation field width for an ell-bit secret."""
    return max(ell, MIN_INTERGEN_BITS)


@dataclass(frozen=True)
class IntergenShare:
    """One share of the cross-generation scheme, tied to a generation."""

    generation: int
    value: int
    width: int


class IntergenScheme(ABC):
    """3-threshold sharing where the participants are whole generations."""

    @property
    @abstractmethod
    def share_bits(self) -> int:
        """Size of one share value in bits."""

    @abstractmethod
    def share(self, generation: int) -> IntergenShare:
        """The share for a generation; the same value on every call."""


class QuadraticIntergen(IntergenScheme):
    """Default cross-generation scheme: a quadratic over GF(2**w).

    w = max(ell, 16) unless overridden (audits use tiny widths).  The
    secret is the ell-bit secret zero-extended to w bits; generation i
    evaluates the polynomial at the field element with coefficient
    string i, so generations 1 .. 2**w - 1 are supported.  At the
    default width that allows 65535 generations, which already covers
    participant indices beyond 2**(4**65535).
    """

    def __init__(self, secret: int, ell: int, rng: RandomBits, width: int | None = None):
        if width is None:
            width = intergen_width_for(ell)
        if width < ell:
            raise ParameterError("intergen width %d cannot hold %d-bit secrets" % (width, ell))
        self.field = BaseField.canonical(width)
        self.width = width
        self.field.check(secret)
        self._secret = secret
        self._r1 = rng.bits(width)
        self._r2 = rng.bits(width)

    @property
    def share_bits(self) -> int:
        return self.width

    def share(self, generation: int) -> IntergenShare:
        if generation < 1:
            raise ParameterError("generations are numbered from 1")
        if generation >= self.field.order:
            raise CapacityError(
                "cross-generation width %d supports at most %d generations"
                % (self.width, self.field.order - 1)
            )
        F = self.field
        pt = generation
        value = self._secret ^ F.mul(self._r1, pt) ^ F.mul(self._r2, F.mul(pt, pt))
        return IntergenShare(generation, value, self.width)

    @classmethod
    def reconstruct(cls, shares) -> int:
        """Secret from three shares of distinct generations."""
        shares = list(shares)
        if len(shares) != 3:
            raise ParameterError("need exactly three cross-generation shares")
        widths = {s.width for s in shares}
        if len(widths) != 1:
            raise ParameterError("cross-generation shares of mixed width")
        if len({s.generation for s in shares}) != 3:
            raise ParameterError("cross-generation shares must span three generations")
        F = BaseField.canonical(widths.pop())
        secret = 0
        for i, si in enumerate(shares):
            weight = 1
            for j, sj in enumerate(shares):
                if i != j:
                    weight = F.mul(
                        weight, F.mul(sj.generation, F.inv(si.generation ^ sj.generation))
                    )
            secret ^= F.mul(si.value, weight)
        return secret


@dataclass(frozen=True)
class GenerationState:
    """A generation's frozen quadratic dealer and its one-time pad."""

    index: int
    dealer: QuadraticDealer
    pad: int


@dataclass(frozen=True)
class ShareBundle:
    """Everything participant t takes home."""

    ell: int
    layout: GenerationLayout
    t: int
    generation: int
    index: int  # 1-based position inside the generation
    intergen: IntergenShare
    forwards: tuple[int, ...]
    curve: CurveShare
    masked: tuple[int, ...]
    pad: int


class EvolvingDealer:
    """Issues share bundles for an endless, ordered participant stream.

    Generation state is created lazily, always in ascending order, so a
    seeded dealer produces identical bundles no matter which
    participants are requested first.
    """

    def __init__(
        self,
        secret: int,
        ell: int = DEFAULT_ELL,
        layout: GenerationLayout | None = None,
        rng: RandomBits | None = None,
        intergen: IntergenScheme | None = None,
        intergen_width: int | None = None,
    ):
        if ell < 1:
            raise ParameterError("ell must be at least 1")
        if not isinstance(secret, int) or secret < 0 or secret >> ell:
            raise ParameterError("secret must be an integer of at most %d bits" % ell)
        self.ell = ell
        self.layout = layout if layout is not None else GenerationLayout.standard()
        self._rng = rng if rng is not None else SystemBits()
        self.secret = secret
        if intergen is None:
            intergen = QuadraticIntergen(secret, ell, self._rng, width=intergen_width)
        elif intergen_width is not None:
            raise ParameterError("intergen_width only applies to the default scheme")
        self.intergen = intergen
        self._generations: dict[int, GenerationState] = {}
        self.issued = 0

    def generation_state(self, i: int) -> GenerationState:
        if i < 1:
            raise ParameterError("generations are numbered from 1")
        count = self.layout.generation_count
        if count is not None and i > count:
            raise CapacityError("layout has only %d generations" % count)
        for k in range(len(self._generations) + 1, i + 1):
            params = SchemeParams.standard(self.ell, self.layout.inner_degree(k, self.ell))
            dealer = QuadraticDealer.deal(params, self.secret, self._rng)
            pad = self._rng.bits(self.ell)
            self._generations[k] = GenerationState(k, dealer, pad)
        return self._generations[i]

    @property
    def generations_materialized(self) -> int:
        return len(self._generations)

    def issue(self, t: int) -> ShareBundle:
        locus = self.layout.locus(t)
        g = locus.generation
        state = self.generation_state(g)
        earlier = [self.generation_state(j) for j in range(1, g)]
        fwd = state.dealer.forward_share
        bundle = ShareBundle(
            ell=self.ell,
            layout=self.layout,
            t=t,
            generation=g,
            index=locus.index,
            intergen=self.intergen.share(g),
            forwards=tuple(e.dealer.forward_share for e in earlier),
            curve=state.dealer.share_at(locus.index - 1),
            masked=tuple(e.pad ^ fwd for e in earlier),
            pad=state.pad,
        )
        self.issued += 1
        return bundle


def _check_bundle(b: ShareBundle) -> None:
    if not isinstance(b, ShareBundle):
        raise ParameterError("not a share bundle: %r" % (b,))
    if len(b.forwards) != b.generation - 1 or len(b.masked) != b.generation - 1:
        raise ParameterError(
            "bundle for generation %d must carry %d forward and masked entries"
            % (b.generation, b.generation - 1)
        )


def reconstruct(b1: ShareBundle, b2: ShareBundle, b3: ShareBundle,
                intergen_reconstruct=None) -> int:
    """Secret from any three distinct participants' bundles.

    intergen_reconstruct overrides how three cross-generation shares
    are combined when the dealer used a custom scheme; the default
    handles QuadraticIntergen shares.
    """
    bundles = [b1, b2, b3]
    for b in bundles:
        _check_bundle(b)
    if len({b.t for b in bundles}) != 3:
        raise ParameterError("bundles must come from three distinct participants")
    if len({b.ell for b in bundles}) != 1 or len({b.layout for b in bundles}) != 1:
        raise ParameterError("bundles come from different schemes")
    ell = b1.ell
    mask = (1 << ell) - 1

    by_gen: dict[int, list[ShareBundle]] = {}
    for b in bundles:
        by_gen.setdefault(b.generation, []).append(b)
    gens = sorted(by_gen)

    if len(gens) == 3:
        combine = intergen_reconstruct or QuadraticIntergen.reconstruct
        return combine([b.intergen for b in bundles]) & mask

    if len(gens) == 1:
        g = gens[0]
        params = SchemeParams.standard(ell, b1.layout.inner_degree(g, ell))
        return reconstruct_three(params, [b.curve for b in bundles])

    low, high = gens
    if len(by_gen[low]) == 2:
        # two low, one high: the high bundle publishes low's forward share
        single = by_gen[high][0]
        forward = single.forwards[low - 1]
        pair = by_gen[low]
    else:
        # one low, two high: low's pad unmasks high's forward share
        lone = by_gen[low][0]
        pair = by_gen[high]
        forward = lone.pad ^ pair[0].masked[low - 1]
    params = SchemeParams.standard(ell, b1.layout.inner_degree(pair[0].generation, ell))
    return reconstruct_pair_with_forward(params, pair[0].curve, pair[1].curve, forward)


# ---------------------------------------------------------------------------
# size accounting


@dataclass(frozen=True)
class BundleSizes:
    """Exact bit widths of one bundle's pieces."""

    ell: int
    t: int
    generation: int
    inner_degree: int
    intergen_bits: int
    forwards_bits: int
    curve_bits: int
    masked_bits: int
    pad_bits: int

    @property
    def total_bits(self) -> int:
        return (
            self.intergen_bits
            + self.forwards_bits
            + self.curve_bits
            + self.masked_bits
            + self.pad_bits
        )

    @property
    def identity_holds(self) -> bool:
        """Everything except the curve piece is intergen + ell*(2g - 1) bits."""
        return self.total_bits - self.curve_bits == (
            self.intergen_bits + self.ell * (2 * self.generation - 1)
        )

    @property
    def bound_applicable(self) -> bool:
        """The single-log bound needs ceil(log4 log2 t) >= 1, i.e. t >= 3."""
        return self.t >= 3

    @property
    def bound_holds(self) -> bool | None:
        """Exact check of total <= lg t + intergen + ell*(2k - 1) + ell + 1,

        with k = ceil(log4 log2 t).  Evaluated without floats: the
        comparison total - C <= lg t is 2**(total - C) <= t.  None when
        not applicable (t < 3).
        """
        if not self.bound_applicable:
            return None
        k, e = 1, 4
        while (self.t - 1).bit_length() > e:
            k += 1
            e *= 4
        rhs_const = self.intergen_bits + self.ell * (2 * k - 1) + self.ell + 1
        d = self.total_bits - rhs_const
        return d <= 0 or (1 << d) <= self.t

    @classmethod
    def measure(cls, bundle: ShareBundle) -> "BundleSizes":
        _check_bundle(bundle)
        m = bundle.layout.inner_degree(bundle.generation, bundle.ell)
        return cls(
            ell=bundle.ell,
            t=bundle.t,
            generation=bundle.generation,
            inner_degree=m,
            intergen_bits=bundle.intergen.width,
            forwards_bits=bundle.ell * len(bundle.forwards),
            curve_bits=bundle.ell * m,
            masked_bits=bundle.ell * len(bundle.masked),
            pad_bits=bundle.ell,
        )

    @classmethod
    def expect(cls, ell: int, t: int, layout: GenerationLayout | None = None,
               intergen_bits: int | None = None) -> "BundleSizes":
        """Formula route, no dealer: what the widths must come out to."""
        layout = layout if layout is not None else GenerationLayout.standard()
        if intergen_bits is None:
            intergen_bits = intergen_width_for(ell)
        locus = layout.locus(t)
        g = locus.generation
        m = layout.inner_degree(g, ell)
        return cls(
            ell=ell,
            t=t,
            generation=g,
            inner_degree=m,
            intergen_bits=intergen_bits,
            forwards_bits=ell * (g - 1),
            curve_bits=ell * m,
            masked_bits=ell * (g - 1),
            pad_bits=ell,
        )


def size_table(ell: int, ts, layout: GenerationLayout | None = None) -> list[BundleSizes]:
    """Measured piece sizes for each requested participant index."""
    from .randomness import Sha256Bits

    layout = layout if layout is not None else GenerationLayout.standard()
    # widths do not depend on the draw, any fixed dealer serves
    dealer = EvolvingDealer(0, ell, layout, rng=Sha256Bits(bytes(32)))
    rows = [BundleSizes.measure(dealer.issue(t)) for t in ts]
    for row in rows:
        expected = BundleSizes.expect(ell, row.t, layout)
        if row != expected:
            raise VerificationError("measured sizes diverge from the formula: %r" % (row,))
    return rows
