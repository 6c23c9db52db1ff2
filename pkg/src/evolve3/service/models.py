"""Request and response bodies, plus the hex conventions they use.

Secrets travel as hex strings (any length, value must fit the field
width; responses use the minimal fixed width for the field).  Share
bundles travel as the hex of their binary file form, so a share pulled
from the service can be written byte-for-byte to disk and vice versa.
"""

from __future__ import annotations

from pydantic import BaseModel

from ..errors import FormatError, ParameterError


def parse_secret(text: str, ell: int) -> int:
    if text.lower().startswith("0x"):
        text = text[2:]
    try:
        value = int(text, 16)
    except (ValueError, TypeError) as exc:
        raise ParameterError("secret must be a hex string") from exc
    if value < 0 or value >> ell:
        raise ParameterError("secret %s does not fit in %d bits" % (text, ell))
    return value


def format_secret(value: int, ell: int) -> str:
    return "%0*x" % ((ell + 3) // 4, value)


def parse_share_hex(text: str) -> bytes:
    try:
        return bytes.fromhex(text)
    except (ValueError, TypeError) as exc:
        raise FormatError("share data is not valid hex") from exc


class DealerCreateRequest(BaseModel):
    secret: str
    ell: int = 8
    layout: str = "standard"
    seed: str | None = None


class DealerInfo(BaseModel):
    dealer_id: str
    ell: int
    layout: str
    issued: int
    generations_materialized: int


class ShareRequest(BaseModel):
    t: int


class ShareOut(BaseModel):
    t: int
    generation: int
    data: str


class SplitRequest(BaseModel):
    secret: str
    participants: list[int]
    ell: int = 8
    layout: str = "standard"
    seed: str | None = None


class SplitResponse(BaseModel):
    ell: int
    layout: str
    shares: list[ShareOut]


class JoinRequest(BaseModel):
    shares: list[str]


class JoinResponse(BaseModel):
    secret: str
    ell: int
    participants: list[int]
    route: str


class InspectRequest(BaseModel):
    share: str


class InspectResponse(BaseModel):
    ell: int
    layout: str
    t: int
    generation: int
    index: int
    inner_degree: int
    intergen_bits: int
    forwards_bits: int
    curve_bits: int
    masked_bits: int
    pad_bits: int
    total_bits: int
    identity_holds: bool
    bound_applicable: bool
    bound_holds: bool | None


class SizesRequest(BaseModel):
    participants: list[int]
    ell: int = 8
    layout: str = "standard"


class SizeRow(BaseModel):
    t: int
    generation: int
    inner_degree: int
    intergen_bits: int
    forwards_bits: int
    curve_bits: int
    masked_bits: int
    pad_bits: int
    total_bits: int
    bound_applicable: bool
    bound_holds: bool | None


class SizesResponse(BaseModel):
    ell: int
    layout: str
    rows: list[SizeRow]


class AuditRequest(BaseModel):
    target: str = "revised"
    ell: int = 1
    m: int | None = None
    layout: str | None = None
    participants: list[int] | None = None
    intergen_width: int = 2
    width: int | None = None
    max_curve_shares: int | None = None


class AuditCellOut(BaseModel):
    subject: str
    s0: int
    s1: int
    distance_num: int
    distance_den: int
    ok: bool


class AuditResponse(BaseModel):
    scheme: str
    params: str
    all_zero: bool
    worst_num: int
    worst_den: int
    cells: list[AuditCellOut]
    csv: str


class AttackDemoRequest(BaseModel):
    ell: int = 8
    layout: str = "standard"
    t_low: int = 17
    t_high: int = 65537
    secret: str | None = None
    seed: str | None = None
    sweep: bool = False


class AttackDemoResponse(BaseModel):
    mode: str
    ell: int
    layout: str
    t_low: int
    t_high: int
    secret: str | None = None
    recovered: str | None = None
    match: bool | None = None
    successes: int | None = None
    total: int | None = None
