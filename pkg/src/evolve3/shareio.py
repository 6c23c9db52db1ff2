"""Binary share-bundle files.

Layout of a file (all integers little-endian unless noted):

    magic    4 bytes  b"EVS1"
    version  1 byte   0x01
    ell      1 byte   base field width in bits, 1..64
    layout   1 byte   0x00 standard, 0x01 toy followed by a varint
                      generation count and that many varint sizes
    t        varint   participant number, 1-based
    gen      varint   generation of t; must match the layout
    pieces   five records, in a fixed order

Each piece record is a tag byte, a varint payload length, and the
payload.  Tags: 0x01 cross-generation share, 0x02 forward shares,
0x03 curve share, 0x04 masked pads, 0x05 own pad.  Multi-value
payloads pack their values low-bits-first into a little-endian
integer; spare padding bits must be zero.  The cross-generation share
is always max(ell, 16) bits wide in a file, the curve share ell*m bits
for the generation's inner field degree m, everything else ell bits
per value.  The curve point is not stored: it is implied by t.

Varints are LEB128, rejected when non-canonical (a redundant trailing
zero byte) or longer than 64 bytes.  Decoding is strict: wrong lengths,
out-of-range values, nonzero padding, or trailing bytes all raise
FormatError rather than guessing.
"""

from __future__ import annotations

import os

from .conventional import CurveShare
from .errors import FormatError, ParameterError, SharingError
from .evolving import IntergenShare, ShareBundle, intergen_width_for
from .flawed import FlawedBundle
from .generations import GenerationLayout

MAGIC = b"EVS1"
VERSION = 0x01
LAYOUT_STANDARD = 0x00
LAYOUT_TOY = 0x01
TAG_INTERGEN = 0x01
TAG_FORWARDS = 0x02
TAG_CURVE = 0x03
TAG_MASKED = 0x04
TAG_PAD = 0x05

MAX_ELL = 64
MAX_TOY_GENERATIONS = 64
MAX_INNER_DEGREE = 256
MAX_VARINT_BYTES = 64
MAX_FILE_BYTES = 1 << 20


def encode_varint(n: int) -> bytes:
    if n < 0:
        raise ParameterError("varints are unsigned")
    out = bytearray()
    while True:
        b = n & 0x7F
        n >>= 7
        out.append(b | (0x80 if n else 0))
        if not n:
            return bytes(out)


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            raise FormatError("file truncated")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def byte(self) -> int:
        return self.take(1)[0]

    def varint(self) -> int:
        value, shift, count = 0, 0, 0
        while True:
            b = self.byte()
            count += 1
            if count > MAX_VARINT_BYTES:
                raise FormatError("varint too long")
            value |= (b & 0x7F) << shift
            if not b & 0x80:
                if count > 1 and b == 0:
                    raise FormatError("non-canonical varint")
                return value
            shift += 7

    def done(self) -> None:
        if self.pos != len(self.data):
            raise FormatError(
                "%d trailing bytes after the last piece" % (len(self.data) - self.pos)
            )


def _pack_values(values, width: int) -> bytes:
    acc = 0
    for i, v in enumerate(values):
        if not 0 <= v < (1 << width):
            raise ParameterError("value %d does not fit in %d bits" % (v, width))
        acc |= v << (i * width)
    return acc.to_bytes((width * len(values) + 7) // 8, "little")


def _unpack_values(payload: bytes, width: int, count: int) -> tuple[int, ...]:
    if len(payload) != (width * count + 7) // 8:
        raise FormatError(
            "piece payload is %d bytes, expected %d"
            % (len(payload), (width * count + 7) // 8)
        )
    acc = int.from_bytes(payload, "little")
    if acc >> (width * count):
        raise FormatError("padding bits are not zero")
    mask = (1 << width) - 1
    return tuple((acc >> (i * width)) & mask for i in range(count))


def _piece(tag: int, payload: bytes) -> bytes:
    return bytes([tag]) + encode_varint(len(payload)) + payload


def bundle_to_bytes(bundle: ShareBundle) -> bytes:
    if isinstance(bundle, FlawedBundle):
        raise FormatError(
            "flawed bundles are demonstration objects and have no file form"
        )
    if not isinstance(bundle, ShareBundle):
        raise ParameterError("not a share bundle: %r" % (bundle,))
    ell = bundle.ell
    if ell > MAX_ELL:
        raise FormatError("field width %d over the format limit %d" % (ell, MAX_ELL))
    width = intergen_width_for(ell)
    if bundle.intergen.width != width:
        raise FormatError(
            "files fix the cross-generation width to max(ell, 16) = %d, "
            "bundle has %d" % (width, bundle.intergen.width)
        )
    layout = bundle.layout
    m = layout.inner_degree(bundle.generation, ell)
    if len(bundle.curve.value) != m:
        raise ParameterError(
            "curve share has %d coefficients, generation %d uses %d"
            % (len(bundle.curve.value), bundle.generation, m)
        )

    out = bytearray(MAGIC)
    out.append(VERSION)
    out.append(ell)
    if layout.is_standard:
        out.append(LAYOUT_STANDARD)
    else:
        out.append(LAYOUT_TOY)
        out += encode_varint(layout.generation_count)
        for size in layout.sizes:
            out += encode_varint(size)
    out += encode_varint(bundle.t)
    out += encode_varint(bundle.generation)
    out += _piece(
        TAG_INTERGEN, bundle.intergen.value.to_bytes((width + 7) // 8, "little")
    )
    out += _piece(TAG_FORWARDS, _pack_values(bundle.forwards, ell))
    out += _piece(TAG_CURVE, _pack_values(bundle.curve.value, ell))
    out += _piece(TAG_MASKED, _pack_values(bundle.masked, ell))
    out += _piece(TAG_PAD, _pack_values((bundle.pad,), ell))
    return bytes(out)


def bytes_to_bundle(data: bytes) -> ShareBundle:
    if len(data) > MAX_FILE_BYTES:
        raise FormatError("file over the %d byte limit" % MAX_FILE_BYTES)
    r = _Reader(data)
    if r.take(4) != MAGIC:
        raise FormatError("bad magic, not a share file")
    version = r.byte()
    if version != VERSION:
        raise FormatError("unsupported version %d" % version)
    ell = r.byte()
    if not 1 <= ell <= MAX_ELL:
        raise FormatError("field width %d outside 1..%d" % (ell, MAX_ELL))
    layout_tag = r.byte()
    if layout_tag == LAYOUT_STANDARD:
        layout = GenerationLayout.standard()
    elif layout_tag == LAYOUT_TOY:
        count = r.varint()
        if not 1 <= count <= MAX_TOY_GENERATIONS:
            raise FormatError("toy layout with %d generations" % count)
        sizes = []
        for _ in range(count):
            size = r.varint()
            if size < 1:
                raise FormatError("toy generation of size 0")
            sizes.append(size)
        layout = GenerationLayout.toy(sizes)
    else:
        raise FormatError("unknown layout tag %d" % layout_tag)
    t = r.varint()
    generation = r.varint()
    try:
        locus = layout.locus(t)
    except SharingError as exc:
        raise FormatError("participant number %d: %s" % (t, exc)) from exc
    if generation != locus.generation:
        raise FormatError(
            "file says generation %d but participant %d is in generation %d"
            % (generation, t, locus.generation)
        )
    m = layout.inner_degree(generation, ell)
    if m > MAX_INNER_DEGREE:
        raise FormatError("inner field degree %d over the format limit" % m)
    width = intergen_width_for(ell)

    def payload(expected_tag: int) -> bytes:
        tag = r.byte()
        if tag != expected_tag:
            raise FormatError("expected piece tag %d, found %d" % (expected_tag, tag))
        length = r.varint()
        return r.take(length)

    raw = payload(TAG_INTERGEN)
    if len(raw) != (width + 7) // 8:
        raise FormatError(
            "cross-generation payload is %d bytes, expected %d"
            % (len(raw), (width + 7) // 8)
        )
    intergen_value = int.from_bytes(raw, "little")
    if intergen_value >> width:
        raise FormatError("padding bits are not zero")
    forwards = _unpack_values(payload(TAG_FORWARDS), ell, generation - 1)
    # decoding never builds field arithmetic: curve coefficients are the
    # payload's ell-bit digits, so hostile parameters cost nothing
    curve_value = _unpack_values(payload(TAG_CURVE), ell, m)
    masked = _unpack_values(payload(TAG_MASKED), ell, generation - 1)
    pad = _unpack_values(payload(TAG_PAD), ell, 1)[0]
    r.done()

    return ShareBundle(
        ell=ell,
        layout=layout,
        t=t,
        generation=generation,
        index=locus.index,
        intergen=IntergenShare(generation, intergen_value, width),
        forwards=forwards,
        curve=CurveShare(locus.index - 1, curve_value),
        masked=masked,
        pad=pad,
    )


def write_share_file(path: str, bundle: ShareBundle) -> None:
    """Write atomically: a crash never leaves a half-written file."""
    data = bundle_to_bytes(bundle)
    path = os.fspath(path)
    tmp = "%s.tmp.%d" % (path, os.getpid())
    try:
        with open(tmp, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def read_share_file(path: str) -> ShareBundle:
    with open(path, "rb") as fh:
        data = fh.read(MAX_FILE_BYTES + 1)
    return bytes_to_bundle(data)
