"""A 3-threshold scheme with 2**(ell*m - 1) + 1 shares over a tower field.

The dealer hides an ell-bit secret s inside the quadratic

    F(w) = c0 + c1*w + c2*w**2

over GF((2**ell)**m), where c0 and c1 are uniform field elements and c2
is the base-field element const_coeff(c1) + s, used as a constant of
the extension.  Curve shares evaluate F at even-index points only:
share i is F at the point with index 2*i, so every issued point has an
even constant coefficient.  c2 itself is the scheme's forward share:
any two curve shares plus c2 recover the secret, as do any three curve
shares, while any two pieces alone reveal nothing.

Restricting to even points matters.  If odd-index points were issued
too, a pair whose indices have odd sum gives away structure: the
difference quotient of the two values is c1 + c2*(point sum), and the
constant coefficient of the point sum is odd, so the quotient's
constant coefficient mixes s into an observable value.  At ell = 1 it
equals s exactly.  leak_report measures this on small fields.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import CapacityError, ParameterError, VerificationError
from .gfext import Elem, ExtField
from .randomness import RandomBits

LEAK_REPORT_MAX_BITS = 10


@dataclass(frozen=True)
class SchemeParams:
    """Field choice for one instance of the scheme."""

    ext: ExtField

    @classmethod
    def standard(cls, ell: int, m: int, allow_degenerate: bool = False) -> "SchemeParams":
        """Canonical fields for the given sizes.

        m = 1 collapses the extension to the base field and is refused
        unless allow_degenerate is set; the audit tooling sets it to
        probe degenerate parameters, production callers never do.
        """
        if m < 1:
            raise ParameterError("inner degree must be at least 1")
        if m < 2 and not allow_degenerate:
            raise ParameterError("inner degree below 2 is reserved for audits")
        return cls(ExtField.canonical(ell, m))

    @property
    def ell(self) -> int:
        return self.ext.ell

    @property
    def m(self) -> int:
        return self.ext.m

    @property
    def max_shares(self) -> int:
        """Number of distinct curve shares: one per even point index."""
        return self.ext.order >> 1

    def point_at(self, index: int) -> Elem:
        """Evaluation point of curve share `index`: raw point 2*index."""
        if index < 0 or index >= self.max_shares:
            raise CapacityError(
                "share index %d outside [0, %d)" % (index, self.max_shares)
            )
        return self.ext.from_index(2 * index)


@dataclass(frozen=True)
class CurveShare:
    index: int
    value: Elem


@dataclass(frozen=True)
class QuadraticDealer:
    """Frozen dealer state: the three coefficients and the secret."""

    params: SchemeParams
    c0: Elem
    c1: Elem
    c2: int
    secret: int

    @classmethod
    def deal(cls, params: SchemeParams, secret: int, rng: RandomBits) -> "QuadraticDealer":
        ext = params.ext
        ext.base.check(secret)
        bits = ext.ell * ext.m
        c0 = ext.from_index(rng.bits(bits))
        c1 = ext.from_index(rng.bits(bits))
        c2 = ext.base.add(ext.const_coeff(c1), secret)
        return cls(params, c0, c1, c2, secret)

    @property
    def forward_share(self) -> int:
        """The quadratic coefficient c2, an ell-bit base-field element."""
        return self.c2

    def share_at(self, index: int) -> CurveShare:
        ext = self.params.ext
        p = self.params.point_at(index)
        value = ext.add(
            ext.add(self.c0, ext.mul(self.c1, p)),
            ext.mul(ext.embed(self.c2), ext.mul(p, p)),
        )
        return CurveShare(index, value)


def _check_shares(params: SchemeParams, shares, count: int) -> list[CurveShare]:
    shares = list(shares)
    if len(shares) != count:
        raise ParameterError("expected %d curve shares, got %d" % (count, len(shares)))
    seen = set()
    for s in shares:
        if not isinstance(s, CurveShare):
            raise ParameterError("not a curve share: %r" % (s,))
        if s.index in seen:
            raise ParameterError("duplicate share index %d" % s.index)
        seen.add(s.index)
        params.ext.check(s.value)
        if s.index < 0 or s.index >= params.max_shares:
            raise CapacityError("share index %d out of range" % s.index)
    return shares


def _solve_quadratic(ext: ExtField, pts: list[Elem], vals: list[Elem]) -> tuple[Elem, Elem, Elem]:
    """Coefficients of the quadratic through three points, by elimination.

    Gaussian elimination on the 3x3 Vandermonde system; independent of
    the product-form path in reconstruct_three.
    """
    rows = [
        [ext.one, p, ext.mul(p, p), v]
        for p, v in zip(pts, vals)
    ]
    n = 3
    for col in range(n):
        pivot = next(
            (r for r in range(col, n) if rows[r][col] != ext.zero), None
        )
        if pivot is None:
            raise ParameterError("evaluation points are not distinct")
        rows[col], rows[pivot] = rows[pivot], rows[col]
        inv = ext.inv(rows[col][col])
        rows[col] = [ext.mul(inv, c) for c in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != ext.zero:
                factor = rows[r][col]
                rows[r] = [
                    ext.add(a, ext.mul(factor, b))
                    for a, b in zip(rows[r], rows[col])
                ]
    return rows[0][3], rows[1][3], rows[2][3]


def reconstruct_three(params: SchemeParams, shares) -> int:
    """Secret from three distinct curve shares.

    Runs two independent routes and insists they agree: Gaussian
    elimination for the full coefficient vector, and the direct product
    form of the same linear functional.  Disagreement means the
    arithmetic itself is broken, so it raises VerificationError rather
    than return anything.
    """
    ext = params.ext
    shares = _check_shares(params, shares, 3)
    pts = [params.point_at(s.index) for s in shares]
    vals = [s.value for s in shares]

    c0, c1, c2e = _solve_quadratic(ext, pts, vals)
    combined = ext.add(c1, c2e)

    acc = ext.zero
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        num = ext.add(ext.add(pts[j], pts[k]), ext.one)
        den = ext.mul(ext.add(pts[i], pts[j]), ext.add(pts[i], pts[k]))
        acc = ext.add(acc, ext.mul(vals[i], ext.mul(num, ext.inv(den))))

    if acc != combined:
        raise VerificationError(
            "reconstruction routes disagree: %r vs %r" % (acc, combined)
        )
    return ext.const_coeff(combined)


def reconstruct_pair_with_forward(params: SchemeParams, share_a: CurveShare,
                                  share_b: CurveShare, forward: int) -> int:
    """Secret from two distinct curve shares plus the forward share c2."""
    ext = params.ext
    share_a, share_b = _check_shares(params, [share_a, share_b], 2)
    ext.base.check(forward)
    pa, pb = params.point_at(share_a.index), params.point_at(share_b.index)
    c2e = ext.embed(forward)
    ya = ext.add(share_a.value, ext.mul(c2e, ext.mul(pa, pa)))
    yb = ext.add(share_b.value, ext.mul(c2e, ext.mul(pb, pb)))
    c1 = ext.mul(ext.add(ya, yb), ext.inv(ext.add(pa, pb)))
    return ext.base.add(forward, ext.const_coeff(c1))


# ---------------------------------------------------------------------------
# leak measurement for the unsound all-points variant


@dataclass(frozen=True)
class PairLeak:
    point_low: int
    point_high: int
    odd_sum: bool
    max_distance: Fraction
    worst_secrets: tuple[int, int] | None
    recovery_rate: Fraction | None


@dataclass(frozen=True)
class LeakReport:
    ell: int
    m: int
    pairs: tuple[PairLeak, ...]
    truncated: bool

    @property
    def max_even_distance(self) -> Fraction:
        return max(
            (p.max_distance for p in self.pairs if not p.odd_sum),
            default=Fraction(0),
        )

    @property
    def max_odd_distance(self) -> Fraction:
        return max(
            (p.max_distance for p in self.pairs if p.odd_sum),
            default=Fraction(0),
        )

    def to_text(self) -> str:
        lines = [
            "leak report for ell=%d m=%d (%d pairs%s)"
            % (self.ell, self.m, len(self.pairs), ", truncated" if self.truncated else ""),
            "worst distance: even-sum pairs %s, odd-sum pairs %s"
            % (self.max_even_distance, self.max_odd_distance),
        ]
        for p in self.pairs:
            parts = [
                "points (%d, %d)" % (p.point_low, p.point_high),
                "odd" if p.odd_sum else "even",
                "distance %s" % p.max_distance,
            ]
            if p.worst_secrets is not None:
                parts.append("secrets %d/%d" % p.worst_secrets)
            if p.recovery_rate is not None:
                parts.append("ratio-rule recovery %s" % p.recovery_rate)
            lines.append("  " + ", ".join(parts))
        return "\n".join(lines)


def _distance(c0: Counter, c1: Counter, total: int) -> Fraction:
    keys = set(c0) | set(c1)
    num = sum(abs(c0.get(k, 0) - c1.get(k, 0)) for k in keys)
    return Fraction(num, 2 * total)


def leak_report(params: SchemeParams, max_pairs: int | None = None) -> LeakReport:
    """Measure what pairs of raw-point evaluations reveal about the secret.

    Evaluates F at every raw point index (even and odd, the unsound
    variant) and, for every pair of points, tallies the exact joint
    distribution of the two values over all dealer randomness, per
    secret.  Reports the worst statistical distance over secret pairs,
    and for odd-sum pairs the exact success rate of reading the secret
    as const_coeff((Z2 - Z1) / (x2 - x1)).

    Only fields with ell*m <= 10 are accepted; above that the space is
    too large to enumerate.  max_pairs caps how many pairs of each
    parity class are examined, lowest point indices first.
    """
    ext = params.ext
    bits = ext.ell * ext.m
    if bits > LEAK_REPORT_MAX_BITS:
        raise CapacityError(
            "leak report needs ell*m <= %d, got %d" % (LEAK_REPORT_MAX_BITS, bits)
        )
    n_points = ext.order
    n_secrets = ext.base.order
    points = [ext.from_index(j) for j in range(n_points)]

    # value(c0, c1, s) at point j has index  idx(c0) ^ drift[j][s][idx(c1)],
    # since addition of field elements is xor of their indices
    drift = [
        [
            [
                ext.to_index(
                    ext.add(
                        ext.mul(ext.from_index(c1i), points[j]),
                        ext.mul(
                            ext.embed(
                                ext.base.add(ext.from_index(c1i)[0], s)
                            ),
                            ext.mul(points[j], points[j]),
                        ),
                    )
                )
                for c1i in range(n_points)
            ]
            for s in range(n_secrets)
        ]
        for j in range(n_points)
    ]

    all_pairs = list(combinations(range(n_points), 2))
    if max_pairs is not None:
        odd = [p for p in all_pairs if (p[0] + p[1]) % 2][:max_pairs]
        even = [p for p in all_pairs if not (p[0] + p[1]) % 2][:max_pairs]
        chosen = sorted(odd + even)
    else:
        chosen = all_pairs

    out = []
    total = n_points * n_points  # (c0, c1) assignments
    for j1, j2 in chosen:
        odd_sum = bool((j1 + j2) & 1)
        tallies = []
        for s in range(n_secrets):
            d1, d2 = drift[j1][s], drift[j2][s]
            tally = Counter(
                (c0i ^ d1[c1i], c0i ^ d2[c1i])
                for c0i in range(n_points)
                for c1i in range(n_points)
            )
            tallies.append(tally)
        worst, worst_pair = Fraction(0), None
        for s0, s1 in combinations(range(n_secrets), 2):
            d = _distance(tallies[s0], tallies[s1], total)
            if d > worst:
                worst, worst_pair = d, (s0, s1)
        rate = None
        if odd_sum:
            dx_inv = ext.inv(ext.add(points[j1], points[j2]))
            hits = 0
            for s in range(n_secrets):
                d1, d2 = drift[j1][s], drift[j2][s]
                for c1i in range(n_points):
                    ratio = ext.mul(ext.from_index(d1[c1i] ^ d2[c1i]), dx_inv)
                    if ext.const_coeff(ratio) == s:
                        hits += 1
            # c0 cancels out of the difference, so each c1 outcome
            # repeats for all 2**(ell*m) values of c0
            rate = Fraction(hits * n_points, total * n_secrets)
        out.append(
            PairLeak(j1, j2, odd_sum, worst, worst_pair, rate)
        )
    return LeakReport(
        ext.ell, ext.m, tuple(out), truncated=len(chosen) < len(all_pairs)
    )
