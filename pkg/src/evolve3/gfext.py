"""Arithmetic in GF((2**ell)**m), a degree-m extension of GF(2**ell).

An element is a tuple of m base-field ints, entry k the coefficient of
y**k.  The modulus is a monic degree-m polynomial over the base field,
stored as a tuple of m + 1 ints with last entry 1.

The canonical modulus for (base, m) is found by scanning candidates in
increasing order of the integer whose base-2**ell digits are the
coefficients of y**0 .. y**(m-1) (the leading coefficient is fixed to
1), keeping the first irreducible one.  Comparing those integers is
the same as comparing coefficient strings highest coefficient first.
For ell = 1, m = 2 the scan yields y**2 + y + 1; for m = 1 it yields y
itself.

Irreducibility over the base field uses the factor-degree test: monic
f of degree m is irreducible iff gcd(y**(q**d) - y mod f, f) = 1 for
d = 1 .. m // 2, where q = 2**ell.  Each q-th power is ell successive
squarings mod f.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence

from .errors import ParameterError
from .gf2 import BaseField

Elem = tuple[int, ...]


# ---------------------------------------------------------------------------
# dense polynomials over a base field: list of coefficient ints, index = power

def _ptrim(f: list[int]) -> list[int]:
    d = len(f) - 1
    while d >= 0 and f[d] == 0:
        d -= 1
    return f[: d + 1]


def _pmul(F: BaseField, f: Sequence[int], g: Sequence[int]) -> list[int]:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] ^= F.mul(a, b)
    return _ptrim(out)


def _pmod(F: BaseField, f: Sequence[int], g: Sequence[int]) -> list[int]:
    f = _ptrim(list(f))
    g = _ptrim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    inv_lead = F.inv(g[dg])
    while len(f) - 1 >= dg and f:
        df = len(f) - 1
        c = F.mul(f[df], inv_lead)
        for i in range(dg + 1):
            if g[i]:
                f[df - dg + i] ^= F.mul(c, g[i])
        f = _ptrim(f[:df])
    return f


def _pdivmod(F: BaseField, f: Sequence[int], g: Sequence[int]) -> tuple[list[int], list[int]]:
    f = _ptrim(list(f))
    g = _ptrim(list(g))
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    dg = len(g) - 1
    inv_lead = F.inv(g[dg])
    q = [0] * max(len(f) - dg, 0)
    while len(f) - 1 >= dg and f:
        df = len(f) - 1
        c = F.mul(f[df], inv_lead)
        q[df - dg] = c
        for i in range(dg + 1):
            if g[i]:
                f[df - dg + i] ^= F.mul(c, g[i])
        f = _ptrim(f[:df])
    return _ptrim(q), f


def _pgcd(F: BaseField, f: Sequence[int], g: Sequence[int]) -> list[int]:
    f = _ptrim(list(f))
    g = _ptrim(list(g))
    while g:
        f, g = g, _pmod(F, f, g)
    return f


def is_irreducible_over(base: BaseField, coeffs: Sequence[int]) -> bool:
    """Whether a monic polynomial over the base field is irreducible."""
    f = list(coeffs)
    m = len(f) - 1
    if m < 1 or f[m] != 1:
        raise ParameterError("polynomial must be monic of degree >= 1")
    if m == 1:
        return True
    r = [0, 1]  # the polynomial y
    for _ in range(m // 2):
        for _ in range(base.ell):
            r = _pmod(base, _pmul(base, r, r), f)
        t = list(r) + [0] * (2 - len(r))
        t[1] ^= 1  # subtract y
        g = _pgcd(base, f, _ptrim(t))
        if len(g) != 1:
            return False
    return True


def smallest_irreducible_over(base: BaseField, m: int) -> tuple[int, ...]:
    """Canonical extension modulus for the given base field and degree."""
    if m < 1:
        raise ParameterError("extension degree must be at least 1")
    q = base.order
    r = 0
    while r < q**m:
        digits, x = [], r
        for _ in range(m):
            digits.append(x % q)
            x //= q
        if is_irreducible_over(base, digits + [1]):
            return tuple(digits) + (1,)
        r += 1
    raise AssertionError("unreachable: irreducibles exist in every degree")


class ExtField:
    """GF((2**ell)**m) with a fixed monic irreducible modulus."""

    __slots__ = ("base", "m", "modulus", "zero", "one", "order")

    def __init__(self, base: BaseField, m: int, modulus: tuple[int, ...]):
        if m < 1:
            raise ParameterError("extension degree must be at least 1")
        if len(modulus) != m + 1 or modulus[m] != 1:
            raise ParameterError("modulus must be monic of degree %d" % m)
        for c in modulus:
            base.check(c)
        if not is_irreducible_over(base, modulus):
            raise ParameterError("modulus is reducible over the base field")
        self.base = base
        self.m = m
        self.modulus = tuple(modulus)
        self.zero = (0,) * m
        self.one = tuple([1] + [0] * (m - 1))
        self.order = 1 << (base.ell * m)

    @classmethod
    @lru_cache(maxsize=None)
    def canonical(cls, ell: int, m: int) -> "ExtField":
        base = BaseField.canonical(ell)
        return cls(base, m, smallest_irreducible_over(base, m))

    @property
    def ell(self) -> int:
        return self.base.ell

    def check(self, v: Elem) -> Elem:
        if not isinstance(v, tuple) or len(v) != self.m:
            raise ParameterError(
                "value %r is not an element of GF((2^%d)^%d)" % (v, self.ell, self.m)
            )
        for c in v:
            self.base.check(c)
        return v

    def add(self, u: Elem, v: Elem) -> Elem:
        self.check(u)
        self.check(v)
        return tuple(a ^ b for a, b in zip(u, v))

    sub = add

    def mul(self, u: Elem, v: Elem) -> Elem:
        self.check(u)
        self.check(v)
        prod = _pmul(self.base, u, v)
        red = _pmod(self.base, prod, self.modulus)
        return tuple(red) + (0,) * (self.m - len(red))

    def inv(self, v: Elem) -> Elem:
        self.check(v)
        if v == self.zero:
            raise ParameterError("zero has no inverse")
        F = self.base
        r0, r1 = list(self.modulus), _ptrim(list(v))
        s0, s1 = [], [1]
        while r1:
            q, r = _pdivmod(F, r0, r1)
            r0, r1 = r1, r
            qs = _pmul(F, q, s1)
            ns = list(s0) + [0] * max(0, len(qs) - len(s0))
            for i, c in enumerate(qs):
                ns[i] ^= c
            s0, s1 = s1, _ptrim(ns)
        # r0 is a nonzero constant gcd; divide it out
        scale = F.inv(r0[0])
        out = [F.mul(scale, c) for c in _pmod(F, s0, self.modulus)]
        return tuple(out) + (0,) * (self.m - len(out))

    def pow(self, v: Elem, e: int) -> Elem:
        self.check(v)
        if e < 0:
            return self.pow(self.inv(v), -e)
        result, basev = self.one, v
        while e:
            if e & 1:
                result = self.mul(result, basev)
            basev = self.mul(basev, basev)
            e >>= 1
        return result

    def embed(self, a: int) -> Elem:
        """Base-field element as a constant of the extension."""
        self.base.check(a)
        return (a,) + (0,) * (self.m - 1)

    def const_coeff(self, v: Elem) -> int:
        """Constant coefficient: the reduction of v mod y."""
        self.check(v)
        return v[0]

    def from_index(self, j: int) -> Elem:
        """Element whose coefficient k is bits [k*ell, (k+1)*ell) of j.

        A bijection from [0, 2**(ell*m)) onto the field.
        """
        if not isinstance(j, int) or j < 0 or j >= self.order:
            raise ParameterError("index %r out of range for the field" % (j,))
        mask = self.base.order - 1
        return tuple((j >> (k * self.ell)) & mask for k in range(self.m))

    def to_index(self, v: Elem) -> int:
        self.check(v)
        j = 0
        for k in range(self.m - 1, -1, -1):
            j = (j << self.ell) | v[k]
        return j

    def elements(self) -> Iterator[Elem]:
        return (self.from_index(j) for j in range(self.order))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExtField)
            and self.base == other.base
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.base, self.modulus))

    def __repr__(self) -> str:
        return "ExtField(ell=%d, m=%d, modulus=%r)" % (self.ell, self.m, self.modulus)
