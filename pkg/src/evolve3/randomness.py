"""Sources of uniform random bits.

Everything in the package that needs randomness draws it through a tiny
interface: an object with a ``bits(n)`` method returning a uniform
integer in [0, 2**n).  Three sources cover all uses:

* ``SystemBits`` pulls from the operating system entropy pool.
* ``Sha256Bits`` is the deterministic seeded stream used for
  reproducible fixtures.  The stream is SHA-256 of ``seed || counter``
  with a 64-bit big-endian block counter; a request for n bits consumes
  the next ceil(n/8) stream bytes (big-endian) and keeps the low n
  bits.  Fixed seed in, identical bits out, on every platform.
* ``BitTape`` replays one integer as a bit supply, used by tests and
  exhaustive audits to drive dealers through every possible choice.
"""

from __future__ import annotations

import hashlib
import secrets
from typing import Protocol

from .errors import ParameterError

SEED_BYTES = 32


class RandomBits(Protocol):
    def bits(self, n: int) -> int: ...


class SystemBits:
    """Uniform bits from the operating system entropy pool."""

    def bits(self, n: int) -> int:
        return secrets.randbits(n)


class Sha256Bits:
    """Deterministic bit stream seeded from exactly 32 bytes."""

    def __init__(self, seed: bytes):
        if not isinstance(seed, (bytes, bytearray)) or len(seed) != SEED_BYTES:
            raise ParameterError("seed must be exactly %d bytes" % SEED_BYTES)
        self._seed = bytes(seed)
        self._counter = 0
        self._buffer = b""

    def _take(self, nbytes: int) -> bytes:
        while len(self._buffer) < nbytes:
            block = hashlib.sha256(
                self._seed + self._counter.to_bytes(8, "big")
            ).digest()
            self._counter += 1
            self._buffer += block
        out, self._buffer = self._buffer[:nbytes], self._buffer[nbytes:]
        return out

    def bits(self, n: int) -> int:
        if n < 0:
            raise ParameterError("bit count must be nonnegative")
        if n == 0:
            return 0
        raw = int.from_bytes(self._take((n + 7) // 8), "big")
        return raw & ((1 << n) - 1)


class BitTape:
    """Serves the bits of one integer, lowest bits first.

    ``BitTape(v, k)`` answers exactly k bits in total; iterating v over
    range(2**k) enumerates every possible draw sequence once.
    """

    def __init__(self, value: int, total_bits: int):
        if value < 0 or value >> total_bits:
            raise ParameterError("tape value does not fit in the declared bits")
        self._value = value
        self._left = total_bits

    @property
    def remaining(self) -> int:
        return self._left

    def bits(self, n: int) -> int:
        if n < 0:
            raise ParameterError("bit count must be nonnegative")
        if n > self._left:
            raise ParameterError("tape exhausted: asked for %d bits, %d left" % (n, self._left))
        out = self._value & ((1 << n) - 1)
        self._value >>= n
        self._left -= n
        return out


def source_from_seed(seed_hex: str | None) -> RandomBits:
    """System entropy when seed_hex is None, else the seeded stream."""
    if seed_hex is None:
        return SystemBits()
    try:
        seed = bytes.fromhex(seed_hex)
    except ValueError as exc:
        raise ParameterError("seed must be a hex string") from exc
    return Sha256Bits(seed)
