"""Participant generations for the evolving scheme.

Participants arrive one at a time, numbered t = 1, 2, 3, ...  They are
grouped into generations: with boundaries n_0 = 0 and n_i = 2**(4**i),
generation i covers indices n_{i-1} < t <= n_i.  Generation 1 is
participants 1..16, generation 2 runs to 65536, generation 3 to 2**64,
each generation's boundary the fourth power of the previous one.

A layout with explicit sizes replaces the boundaries for tests and
audits; those layouts are finite and refuse indices past their total.

All generation arithmetic is exact integer work.  The membership test
t <= 2**e is evaluated as (t-1).bit_length() <= e so no huge powers are
materialized while locating a generation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate

from .errors import CapacityError, ParameterError


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n, for n >= 1."""
    if n < 1:
        raise ParameterError("ceil_log2 needs n >= 1")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class ParticipantLocus:
    """Where participant t sits: its generation and 1-based index inside."""

    t: int
    generation: int
    index: int


@dataclass(frozen=True)
class GenerationLayout:
    """Either the standard doubly-exponential boundaries or explicit sizes."""

    sizes: tuple[int, ...] | None = None

    @classmethod
    def standard(cls) -> "GenerationLayout":
        return cls(None)

    @classmethod
    def toy(cls, sizes) -> "GenerationLayout":
        sizes = tuple(int(s) for s in sizes)
        if not sizes or any(s < 1 for s in sizes):
            raise ParameterError("toy layout needs at least one positive size")
        return cls(sizes)

    @property
    def is_standard(self) -> bool:
        return self.sizes is None

    @property
    def capacity(self) -> int | None:
        """Total participants, None when unbounded."""
        return None if self.sizes is None else sum(self.sizes)

    @property
    def generation_count(self) -> int | None:
        return None if self.sizes is None else len(self.sizes)

    def boundary(self, i: int) -> int:
        """n_i, the last participant index of generation i (n_0 = 0)."""
        if i < 0:
            raise ParameterError("generation index must be nonnegative")
        if self.sizes is None:
            return 0 if i == 0 else 1 << (4**i)
        if i > len(self.sizes):
            raise CapacityError("layout has only %d generations" % len(self.sizes))
        return sum(self.sizes[:i])

    def generation_size(self, i: int) -> int:
        if i < 1:
            raise ParameterError("generations are numbered from 1")
        if self.sizes is None:
            return self.boundary(i) - self.boundary(i - 1)
        if i > len(self.sizes):
            raise CapacityError("layout has only %d generations" % len(self.sizes))
        return self.sizes[i - 1]

    def generation_of(self, t: int) -> int:
        if t < 1:
            raise ParameterError("participant indices start at 1")
        if self.sizes is None:
            g, e = 1, 4
            while (t - 1).bit_length() > e:
                g += 1
                e *= 4
            return g
        for g, upper in enumerate(accumulate(self.sizes), start=1):
            if t <= upper:
                return g
        raise CapacityError(
            "participant %d exceeds layout capacity %d" % (t, self.capacity)
        )

    def locus(self, t: int) -> ParticipantLocus:
        g = self.generation_of(t)
        return ParticipantLocus(t, g, t - self.boundary(g - 1))

    def inner_degree(self, i: int, ell: int) -> int:
        """Extension degree for generation i's inner scheme.

        Smallest m with 2**(ell*m - 1) >= generation size, so the
        generation's participants all get distinct curve shares, with a
        floor of m = 2 so the extension structure is never degenerate.
        """
        if ell < 1:
            raise ParameterError("ell must be at least 1")
        need = ceil_log2(self.generation_size(i)) + 1
        return max(2, -(-need // ell))

    def describe(self) -> str:
        if self.sizes is None:
            return "standard"
        return ",".join(str(s) for s in self.sizes)

    @classmethod
    def parse(cls, text: str) -> "GenerationLayout":
        """Inverse of describe: 'standard' or comma-separated sizes."""
        text = text.strip()
        if text == "standard":
            return cls.standard()
        try:
            sizes = [int(part) for part in text.split(",")]
        except ValueError as exc:
            raise ParameterError("layout must be 'standard' or sizes like '4,4'") from exc
        return cls.toy(sizes)
