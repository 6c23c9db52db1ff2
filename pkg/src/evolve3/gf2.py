"""Arithmetic in GF(2**ell), the binary field with 2**ell elements.

Elements are plain ints in [0, 2**ell): bit k holds the coefficient of
x**k, so the element x is 2 and x + 1 is 3.  A field is described by
its degree ell and an irreducible modulus, an int under the same
encoding with bit ell set.  Addition is XOR.  Multiplication is
carry-less multiplication reduced by the modulus.  Inversion runs the
extended Euclidean algorithm on coefficient strings.

The canonical modulus for a degree is the irreducible polynomial whose
coefficient string, read as an unsigned integer, is smallest.  For
ell = 1 that is x itself (GF(2) with modulus x: reduction just drops
everything above the constant), for ell = 2 it is x**2 + x + 1, and
for ell = 8 the scan yields 0x11b.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator

from .errors import ParameterError


def poly_degree(p: int) -> int:
    """Degree of a nonzero polynomial; -1 for the zero polynomial."""
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carry-less product of two coefficient strings."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_divmod(a: int, b: int) -> tuple[int, int]:
    if b == 0:
        raise ZeroDivisionError("polynomial division by zero")
    db = poly_degree(b)
    q = 0
    while a and poly_degree(a) >= db:
        shift = poly_degree(a) - db
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def poly_mod(a: int, b: int) -> int:
    return poly_divmod(a, b)[1]


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def is_irreducible(p: int) -> bool:
    """Whether p is irreducible over GF(2).

    Factor-degree test: p of degree n has an irreducible factor of
    degree d <= n // 2 exactly when gcd(x**(2**d) + x mod p, p) is
    nonconstant, since x**(2**d) + x is the product of all irreducible
    binary polynomials whose degree divides d.
    """
    n = poly_degree(p)
    if n < 1:
        return False
    if n == 1:
        return True
    r = 2  # the polynomial x
    for _ in range(n // 2):
        r = poly_mod(poly_mul(r, r), p)
        if poly_gcd(p, r ^ 2) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def smallest_irreducible(degree: int) -> int:
    """Canonical modulus: first irreducible of the degree in integer order."""
    if degree < 1:
        raise ParameterError("degree must be at least 1")
    for candidate in range(1 << degree, 1 << (degree + 1)):
        if is_irreducible(candidate):
            return candidate
    raise AssertionError("unreachable: irreducibles exist in every degree")


class BaseField:
    """GF(2**ell) with a fixed irreducible modulus."""

    __slots__ = ("ell", "modulus", "order")

    def __init__(self, ell: int, modulus: int):
        if ell < 1:
            raise ParameterError("field degree must be at least 1")
        if poly_degree(modulus) != ell or not is_irreducible(modulus):
            raise ParameterError("modulus must be irreducible of degree %d" % ell)
        self.ell = ell
        self.modulus = modulus
        self.order = 1 << ell

    @classmethod
    @lru_cache(maxsize=None)
    def canonical(cls, ell: int) -> "BaseField":
        return cls(ell, smallest_irreducible(ell))

    def check(self, a: int) -> int:
        if not isinstance(a, int) or a < 0 or a >= self.order:
            raise ParameterError(
                "value %r is not an element of GF(2^%d)" % (a, self.ell)
            )
        return a

    def add(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        return a ^ b

    # subtraction equals addition in characteristic 2
    sub = add

    def mul(self, a: int, b: int) -> int:
        self.check(a)
        self.check(b)
        return poly_mod(poly_mul(a, b), self.modulus)

    def inv(self, a: int) -> int:
        self.check(a)
        if a == 0:
            raise ParameterError("zero has no inverse")
        r0, r1 = self.modulus, a
        s0, s1 = 0, 1
        while r1:
            q, r = poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 ^ poly_mul(q, s1)
        # r0 is now gcd = 1, s0 the inverse up to reduction
        return poly_mod(s0, self.modulus)

    def pow(self, a: int, e: int) -> int:
        self.check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BaseField)
            and self.ell == other.ell
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.ell, self.modulus))

    def __repr__(self) -> str:
        return "BaseField(ell=%d, modulus=0x%x)" % (self.ell, self.modulus)
