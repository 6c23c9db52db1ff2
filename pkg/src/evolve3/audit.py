"""Exhaustive secrecy audits with exact probabilities.

An audit fixes a set of observed values (a few shares, or whole share
bundles), enumerates every value of the dealer randomness behind them,
and tallies the joint distribution of the observation for each secret.
Secrecy holds for the set exactly when the distributions for every two
secrets coincide; each audited cell reports the exact statistical
distance as a Fraction, never a float.

Enumeration is organized around a variable/piece model.  A variable is
one independent uniform draw of the dealer (a coefficient, a pad); a
piece is one observed value with a known dependency set.  Pieces that
share no variables are statistically independent, so the model is
split into connected components, each component is enumerated over its
own variables only, and distances are assembled from the component
tallies: components with identical tallies for both secrets
marginalize out of the distance, the rest combine by an exact product
over their joint support.  Components above COMPONENT_CAP_BITS of
joint randomness are refused rather than ground through.

The model mirrors the real dealers piece for piece; the tests replay
the smallest toy audits against direct enumeration of whole dealer
tapes through the real dealer to pin the two views together.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .conventional import CurveShare, QuadraticDealer, SchemeParams
from .errors import CapacityError, ParameterError
from .evolving import ShareBundle
from .flawed import FlawedBundle, flawed_inner_degree, mask_bits
from .generations import GenerationLayout
from .gf2 import BaseField
from .gfext import ExtField

COMPONENT_CAP_BITS = 24
SUPPORT_PRODUCT_CAP = 1 << 20
STATIC_WORK_CAP = 1 << 24


@dataclass(frozen=True)
class Variable:
    name: str
    bits: int


class Piece:
    """One observed value: a function of some variables and the secret.

    Value tables are evaluated lazily per secret over the piece's own
    variable space and cached, so reusing Piece objects across audit
    subjects reuses the tables.
    """

    __slots__ = ("label", "variables", "fn", "_tables")

    def __init__(self, label: str, variables, fn):
        self.label = label
        self.variables = tuple(variables)
        self.fn = fn
        self._tables: dict[int, list[int]] = {}

    def table(self, secret: int) -> list[int]:
        tab = self._tables.get(secret)
        if tab is None:
            ranges = [range(1 << v.bits) for v in self.variables]
            tab = [self.fn(vals, secret) for vals in itertools.product(*ranges)]
            self._tables[secret] = tab
        return tab


@dataclass
class ComponentTally:
    piece_positions: tuple[int, ...]
    total: int
    tallies: dict[int, Counter]


def _dep_shifts(variables) -> list[int]:
    """Shifts that pack an assignment tuple into a table index.

    itertools.product varies the last variable fastest, so position j
    is shifted by the bits of everything after it.
    """
    shifts, acc = [], 0
    for v in reversed(variables):
        shifts.append(acc)
        acc += v.bits
    return list(reversed(shifts))


def transcript_components(pieces, secrets,
                          cap_bits: int = COMPONENT_CAP_BITS) -> list[ComponentTally]:
    """Tally each independent component of the piece list, per secret."""
    pieces = list(pieces)
    secrets = list(secrets)

    parent: dict[str, str] = {}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    order: list[Variable] = []
    seen: dict[str, Variable] = {}
    for p in pieces:
        for v in p.variables:
            if v.name not in seen:
                seen[v.name] = v
                parent[v.name] = v.name
                order.append(v)
            elif seen[v.name] != v:
                raise ParameterError("variable %s redefined with new width" % v.name)
        for a, b in zip(p.variables, p.variables[1:]):
            ra, rb = find(a.name), find(b.name)
            if ra != rb:
                parent[ra] = rb

    groups: dict[str | None, list[int]] = {}
    for pos, p in enumerate(pieces):
        root = find(p.variables[0].name) if p.variables else None
        groups.setdefault(root if root is None else find(root), []).append(pos)

    out = []
    for root, positions in groups.items():
        if root is None:
            comp_vars: list[Variable] = []
        else:
            comp_vars = [v for v in order if find(v.name) == root]
        bits = sum(v.bits for v in comp_vars)
        if bits > cap_bits:
            raise CapacityError(
                "audit component needs %d bits of joint randomness (%s), over "
                "the 2^%d enumeration cap"
                % (bits, ", ".join(v.name for v in comp_vars), cap_bits)
            )
        index_of = {v.name: i for i, v in enumerate(comp_vars)}
        ranges = [range(1 << v.bits) for v in comp_vars]
        total = 1 << bits
        plans = []
        for pos in positions:
            p = pieces[pos]
            deps = [index_of[v.name] for v in p.variables]
            plans.append((deps, _dep_shifts(p.variables), p))
        tallies: dict[int, Counter] = {}
        for s in secrets:
            tabs = [(deps, shifts, p.table(s)) for deps, shifts, p in plans]
            tally: Counter = Counter()
            for assign in itertools.product(*ranges):
                key = tuple(
                    tab[sum(assign[d] << sh for d, sh in zip(deps, shifts))]
                    for deps, shifts, tab in tabs
                )
                tally[key] += 1
            tallies[s] = tally
        out.append(ComponentTally(tuple(positions), total, tallies))
    return out


def component_distance(components, s0: int, s1: int) -> Fraction:
    """Exact statistical distance of the full transcript between secrets."""
    differing = [c for c in components if c.tallies[s0] != c.tallies[s1]]
    if not differing:
        return Fraction(0)
    supports = [
        sorted(set(c.tallies[s0]) | set(c.tallies[s1])) for c in differing
    ]
    size = 1
    for s in supports:
        size *= len(s)
    if size > SUPPORT_PRODUCT_CAP:
        raise CapacityError(
            "distance assembly over %d support points exceeds the cap" % size
        )
    den = 1
    for c in differing:
        den *= c.total
    num = 0
    for combo in itertools.product(*supports):
        p = q = 1
        for c, k in zip(differing, combo):
            p *= c.tallies[s0].get(k, 0)
            q *= c.tallies[s1].get(k, 0)
        num += abs(p - q)
    return Fraction(num, 2 * den)


def assemble_joint(components, secret: int, n_pieces: int) -> Counter:
    """Full product distribution over transcript tuples (small cases only)."""
    out: Counter = Counter()
    supports = [list(c.tallies[secret].items()) for c in components]
    for combo in itertools.product(*supports):
        key: list[int | None] = [None] * n_pieces
        count = 1
        for c, (k, n) in zip(components, combo):
            for pos, v in zip(c.piece_positions, k):
                key[pos] = v
            count *= n
        out[tuple(key)] += count
    return out


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class AuditCell:
    subject: str
    s0: int
    s1: int
    distance: Fraction

    @property
    def ok(self) -> bool:
        return self.distance == 0


@dataclass(frozen=True)
class AuditReport:
    scheme: str
    params: str
    cells: tuple[AuditCell, ...]

    @property
    def max_distance(self) -> Fraction:
        return max((c.distance for c in self.cells), default=Fraction(0))

    @property
    def all_zero(self) -> bool:
        return all(c.ok for c in self.cells)

    @property
    def worst(self) -> AuditCell | None:
        return max(self.cells, key=lambda c: c.distance, default=None)

    def subject_distances(self, subject: str) -> dict[tuple[int, int], Fraction]:
        return {
            (c.s0, c.s1): c.distance for c in self.cells if c.subject == subject
        }

    def to_csv(self) -> str:
        lines = ["scheme,params,subject,s0,s1,distance_num,distance_den,verdict"]
        for c in self.cells:
            lines.append(
                "%s,%s,%s,%d,%d,%d,%d,%s"
                % (
                    self.scheme,
                    self.params.replace(",", ";"),
                    c.subject.replace(",", ";"),
                    c.s0,
                    c.s1,
                    c.distance.numerator,
                    c.distance.denominator,
                    "pass" if c.ok else "LEAK",
                )
            )
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        verdict = (
            "no cell distinguishes any pair of secrets"
            if self.all_zero
            else "LEAK: some cells distinguish secrets"
        )
        lines = [
            "secrecy audit: scheme=%s params=%s" % (self.scheme, self.params),
            "cells audited: %d, worst distance: %s" % (len(self.cells), self.max_distance),
            verdict,
        ]
        for c in self.cells:
            if not c.ok:
                lines.append(
                    "  %s distinguishes secrets %d and %d with distance %s"
                    % (c.subject, c.s0, c.s1, c.distance)
                )
        return "\n".join(lines)


def _cells_for_subjects(scheme: str, params: str, subjects, secrets,
                        cap_bits: int = COMPONENT_CAP_BITS) -> AuditReport:
    secrets = list(secrets)
    cells = []
    for label, pieces in subjects:
        comps = transcript_components(pieces, secrets, cap_bits)
        for s0, s1 in itertools.combinations(secrets, 2):
            cells.append(AuditCell(label, s0, s1, component_distance(comps, s0, s1)))
    return AuditReport(scheme, params, tuple(cells))


# ---------------------------------------------------------------------------
# the conventional scheme: every share pair, exhaustively


def audit_static(ell: int, m: int, max_curve_shares: int | None = None) -> AuditReport:
    """Audit singles and pairs from {curve shares} + {forward share}.

    Enumerates the full (c0, c1) space per secret; accepts fields with
    2*ell*m <= 16 and a total work estimate under 2^24 evaluations
    (pair count grows quadratically in the share count, so wide fields
    need max_curve_shares to trim the subject list).
    """
    params = SchemeParams.standard(ell, m, allow_degenerate=True)
    ext = params.ext
    bits = ell * m
    if 2 * bits > 16:
        raise CapacityError("audit needs 2*ell*m <= 16, got %d" % (2 * bits))
    n_shares = params.max_shares
    if max_curve_shares is not None:
        n_shares = min(n_shares, max_curve_shares)
    n_secrets = 1 << ell
    n_subjects = (n_shares + 1) + (n_shares + 1) * n_shares // 2
    work = n_subjects * n_secrets * (1 << (2 * bits))
    if work > STATIC_WORK_CAP:
        raise CapacityError(
            "audit would cost ~%d evaluations, over the 2^24 cap; "
            "pass max_curve_shares to trim" % work
        )

    v_c0 = Variable("c0", bits)
    v_c1 = Variable("c1", bits)

    def curve_fn(k: int):
        def fn(vals, secret):
            c0i, c1i = vals
            c1 = ext.from_index(c1i)
            dealer = QuadraticDealer(
                params,
                ext.from_index(c0i),
                c1,
                ext.base.add(ext.const_coeff(c1), secret),
                secret,
            )
            return ext.to_index(dealer.share_at(k).value)
        return fn

    def forward_fn(vals, secret):
        (c1i,) = vals
        return ext.base.add(ext.from_index(c1i)[0], secret)

    pieces = [
        Piece("curve[%d]" % k, (v_c0, v_c1), curve_fn(k)) for k in range(n_shares)
    ]
    pieces.append(Piece("forward", (v_c1,), forward_fn))
    labels = ["curve[%d]" % k for k in range(n_shares)] + ["forward"]

    subjects = []
    for i, p in enumerate(pieces):
        subjects.append((labels[i], [p]))
    for i, j in itertools.combinations(range(len(pieces)), 2):
        subjects.append((labels[i] + "+" + labels[j], [pieces[i], pieces[j]]))

    return _cells_for_subjects(
        "conventional", "ell=%d,m=%d" % (ell, m), subjects, range(n_secrets)
    )


# ---------------------------------------------------------------------------
# the evolving schemes on toy layouts: every bundle and bundle pair


def _bundle_piece_map(ell: int, layout: GenerationLayout, scheme: str,
                      width: int, participants) -> dict[int, list[Piece]]:
    if layout.is_standard:
        raise ParameterError("bundle audits need a finite toy layout")
    if scheme not in ("revised", "flawed"):
        raise ParameterError("scheme must be 'revised' or 'flawed'")
    flawed = scheme == "flawed"
    count = layout.generation_count
    if count >= (1 << width):
        raise CapacityError(
            "intergen width %d cannot address %d generations" % (width, count)
        )

    F = BaseField.canonical(width)
    pad_bits = mask_bits(layout, ell) if flawed else ell
    v_r1, v_r2 = Variable("r1", width), Variable("r2", width)
    v_c0, v_c1, v_pad = {}, {}, {}
    exts: dict[int, ExtField] = {}
    for g in range(1, count + 1):
        m = (
            flawed_inner_degree(layout, g, ell)
            if flawed
            else layout.inner_degree(g, ell)
        )
        exts[g] = ExtField.canonical(ell, m)
        gbits = ell * m
        v_c0[g] = Variable("c0_g%d" % g, gbits)
        v_c1[g] = Variable("c1_g%d" % g, gbits)
        v_pad[g] = Variable("pad_g%d" % g, pad_bits)

    def intergen_fn(g: int):
        def fn(vals, secret):
            r1, r2 = vals
            return secret ^ F.mul(r1, g) ^ F.mul(r2, F.mul(g, g))
        return fn

    def forward_fn(g: int):
        ext = exts[g]
        def fn(vals, secret):
            (c1i,) = vals
            return ext.base.add(ext.from_index(c1i)[0], secret)
        return fn

    def curve_fn(g: int, share_index: int):
        ext = exts[g]
        sp = SchemeParams(ext)
        def fn(vals, secret):
            c0i, c1i = vals
            c1 = ext.from_index(c1i)
            dealer = QuadraticDealer(
                sp,
                ext.from_index(c0i),
                c1,
                ext.base.add(ext.const_coeff(c1), secret),
                secret,
            )
            return ext.to_index(dealer.share_at(share_index).value)
        return fn

    def masked_revised_fn(g: int):
        ext = exts[g]
        def fn(vals, secret):
            pad_j, c1i = vals
            return pad_j ^ ext.base.add(ext.from_index(c1i)[0], secret)
        return fn

    def masked_flawed_fn(vals, secret):
        # the back share is the curve at point index 0, i.e. c0 itself
        pad_j, c0i = vals
        return pad_j ^ c0i

    def pad_fn(vals, secret):
        (pad,) = vals
        return pad

    out: dict[int, list[Piece]] = {}
    for t in participants:
        locus = layout.locus(t)
        g, h = locus.generation, locus.index
        share_index = h if flawed else h - 1
        pieces = [Piece("t%d.intergen" % t, (v_r1, v_r2), intergen_fn(g))]
        for j in range(1, g):
            pieces.append(Piece("t%d.fwd%d" % (t, j), (v_c1[j],), forward_fn(j)))
        pieces.append(
            Piece("t%d.curve" % t, (v_c0[g], v_c1[g]), curve_fn(g, share_index))
        )
        for j in range(1, g):
            if flawed:
                pieces.append(
                    Piece("t%d.masked%d" % (t, j), (v_pad[j], v_c0[g]), masked_flawed_fn)
                )
            else:
                pieces.append(
                    Piece(
                        "t%d.masked%d" % (t, j), (v_pad[j], v_c1[g]), masked_revised_fn(g)
                    )
                )
        pieces.append(Piece("t%d.pad" % t, (v_pad[g],), pad_fn))
        out[t] = pieces
    return out


def audit_evolving(ell: int, layout: GenerationLayout, scheme: str = "revised",
                   participants=None, intergen_width: int = 2,
                   secrets=None) -> AuditReport:
    """Audit every single bundle and bundle pair on a toy layout.

    Exact and exhaustive: for each audited set, every assignment of the
    dealer randomness the set depends on is enumerated (component by
    component).  Refuses layouts where a component would exceed
    COMPONENT_CAP_BITS bits of joint randomness.
    """
    if layout.is_standard:
        raise ParameterError("bundle audits need a finite toy layout")
    if participants is None:
        participants = range(1, layout.capacity + 1)
    participants = list(participants)
    if len(set(participants)) != len(participants):
        raise ParameterError("participant list has duplicates")
    piece_map = _bundle_piece_map(ell, layout, scheme, intergen_width, participants)
    if secrets is None:
        secrets = range(1 << ell)

    subjects = []
    for t in participants:
        subjects.append(("t=%d" % t, piece_map[t]))
    for a, b in itertools.combinations(participants, 2):
        subjects.append(("t=%d,t=%d" % (a, b), piece_map[a] + piece_map[b]))

    return _cells_for_subjects(
        scheme,
        "ell=%d,layout=%s,width=%d" % (ell, layout.describe(), intergen_width),
        subjects,
        secrets,
    )


def bundle_transcript(bundle) -> tuple[int, ...]:
    """A bundle's pieces as one flat int tuple, in audit piece order."""
    if isinstance(bundle, ShareBundle):
        m = bundle.layout.inner_degree(bundle.generation, bundle.ell)
    elif isinstance(bundle, FlawedBundle):
        m = flawed_inner_degree(bundle.layout, bundle.generation, bundle.ell)
    else:
        raise ParameterError("not a bundle: %r" % (bundle,))
    ext = ExtField.canonical(bundle.ell, m)
    return (
        bundle.intergen.value,
        *bundle.forwards,
        ext.to_index(bundle.curve.value),
        *bundle.masked,
        bundle.pad,
    )


# ---------------------------------------------------------------------------
# the default cross-generation scheme on its own


def audit_intergen(width: int, generations=None) -> AuditReport:
    """Audit the default cross-generation scheme at a small width.

    Subjects are single shares and share pairs for the chosen
    generations; secrets run over the full w-bit domain.
    """
    if width > 6:
        raise CapacityError("intergen audit supports widths up to 6")
    F = BaseField.canonical(width)
    if generations is None:
        generations = range(1, F.order if width <= 4 else 9)
    generations = list(generations)
    for g in generations:
        if g < 1 or g >= F.order:
            raise ParameterError("generation %d outside [1, %d)" % (g, F.order))

    v_r1, v_r2 = Variable("r1", width), Variable("r2", width)

    def share_fn(g: int):
        def fn(vals, secret):
            r1, r2 = vals
            return secret ^ F.mul(r1, g) ^ F.mul(r2, F.mul(g, g))
        return fn

    pieces = {g: Piece("share[%d]" % g, (v_r1, v_r2), share_fn(g)) for g in generations}
    subjects = [("share[%d]" % g, [pieces[g]]) for g in generations]
    subjects += [
        ("share[%d]+share[%d]" % (a, b), [pieces[a], pieces[b]])
        for a, b in itertools.combinations(generations, 2)
    ]
    return _cells_for_subjects(
        "intergen", "width=%d" % width, subjects, range(F.order)
    )
