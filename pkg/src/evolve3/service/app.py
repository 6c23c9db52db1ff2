"""The HTTP face of the toolkit.

create_app() builds a self-contained FastAPI application.  Stateless
endpoints (/split, /join, /inspect, /sizes, /audit, /attack-demo) do
one dealer run per call; the /dealers endpoints keep a live dealer in
memory so shares can be issued one at a time as participants arrive,
which is the point of an evolving scheme.

Domain errors surface as HTTP 400 with a machine-readable code:
usage, format, capacity, or verification.
"""

from __future__ import annotations

import secrets as system_secrets
import threading

from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse

from .. import audit as audit_mod
from ..errors import (
    CapacityError,
    FormatError,
    ParameterError,
    SharingError,
    VerificationError,
)
from ..evolving import BundleSizes, EvolvingDealer, reconstruct
from ..flawed import FlawedDealer, attack_transcript_sweep, two_party_attack
from ..generations import GenerationLayout
from ..randomness import source_from_seed
from ..shareio import bundle_to_bytes, bytes_to_bundle
from . import models as m

ERROR_CODES = (
    (ParameterError, "usage"),
    (FormatError, "format"),
    (CapacityError, "capacity"),
    (VerificationError, "verification"),
)


def error_code(exc: SharingError) -> str:
    for klass, code in ERROR_CODES:
        if isinstance(exc, klass):
            return code
    return "error"


class _DealerSession:
    def __init__(self, dealer: EvolvingDealer, layout_text: str):
        self.dealer = dealer
        self.layout_text = layout_text
        self.lock = threading.Lock()


def _size_fields(sizes: BundleSizes) -> dict:
    return {
        "generation": sizes.generation,
        "inner_degree": sizes.inner_degree,
        "intergen_bits": sizes.intergen_bits,
        "forwards_bits": sizes.forwards_bits,
        "curve_bits": sizes.curve_bits,
        "masked_bits": sizes.masked_bits,
        "pad_bits": sizes.pad_bits,
        "total_bits": sizes.total_bits,
        "bound_applicable": sizes.bound_applicable,
        "bound_holds": sizes.bound_holds,
    }


def _join_route(generations: list[int]) -> str:
    distinct = sorted(set(generations))
    if len(distinct) == 3:
        return "cross-generation"
    if len(distinct) == 1:
        return "same-generation"
    low = distinct[0]
    if generations.count(low) == 2:
        return "forward-assisted"
    return "pad-unmasked"


def create_app() -> FastAPI:
    app = FastAPI(
        title="evolve3",
        description="Evolving 3-threshold secret sharing over binary fields",
        version="0.1.0",
    )
    sessions: dict[str, _DealerSession] = {}
    sessions_lock = threading.Lock()

    @app.exception_handler(SharingError)
    async def _sharing_error(request, exc: SharingError):
        return JSONResponse(
            status_code=400,
            content={"error": {"code": error_code(exc), "message": str(exc)}},
        )

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    def _session(dealer_id: str) -> _DealerSession:
        with sessions_lock:
            session = sessions.get(dealer_id)
        if session is None:
            raise HTTPException(
                status_code=404,
                detail={"code": "not-found", "message": "no such dealer"},
            )
        return session

    def _dealer_info(dealer_id: str, session: _DealerSession) -> m.DealerInfo:
        return m.DealerInfo(
            dealer_id=dealer_id,
            ell=session.dealer.ell,
            layout=session.layout_text,
            issued=session.dealer.issued,
            generations_materialized=session.dealer.generations_materialized,
        )

    @app.post("/dealers")
    def create_dealer(req: m.DealerCreateRequest) -> m.DealerInfo:
        secret = m.parse_secret(req.secret, req.ell)
        layout = GenerationLayout.parse(req.layout)
        dealer = EvolvingDealer(
            secret, ell=req.ell, layout=layout, rng=source_from_seed(req.seed)
        )
        dealer_id = system_secrets.token_hex(8)
        with sessions_lock:
            sessions[dealer_id] = _DealerSession(dealer, layout.describe())
        return _dealer_info(dealer_id, sessions[dealer_id])

    @app.get("/dealers/{dealer_id}")
    def get_dealer(dealer_id: str) -> m.DealerInfo:
        return _dealer_info(dealer_id, _session(dealer_id))

    @app.delete("/dealers/{dealer_id}")
    def delete_dealer(dealer_id: str) -> dict:
        with sessions_lock:
            if sessions.pop(dealer_id, None) is None:
                raise HTTPException(
                    status_code=404,
                    detail={"code": "not-found", "message": "no such dealer"},
                )
        return {"deleted": True}

    @app.post("/dealers/{dealer_id}/shares")
    def issue_share(dealer_id: str, req: m.ShareRequest) -> m.ShareOut:
        session = _session(dealer_id)
        with session.lock:
            bundle = session.dealer.issue(req.t)
        return m.ShareOut(
            t=bundle.t,
            generation=bundle.generation,
            data=bundle_to_bytes(bundle).hex(),
        )

    @app.post("/split")
    def split(req: m.SplitRequest) -> m.SplitResponse:
        if not req.participants:
            raise ParameterError("need at least one participant")
        secret = m.parse_secret(req.secret, req.ell)
        layout = GenerationLayout.parse(req.layout)
        dealer = EvolvingDealer(
            secret, ell=req.ell, layout=layout, rng=source_from_seed(req.seed)
        )
        shares = []
        for t in req.participants:
            bundle = dealer.issue(t)
            shares.append(
                m.ShareOut(
                    t=t,
                    generation=bundle.generation,
                    data=bundle_to_bytes(bundle).hex(),
                )
            )
        return m.SplitResponse(ell=req.ell, layout=layout.describe(), shares=shares)

    @app.post("/join")
    def join(req: m.JoinRequest) -> m.JoinResponse:
        if len(req.shares) != 3:
            raise ParameterError(
                "joining needs exactly three shares, got %d" % len(req.shares)
            )
        bundles = [bytes_to_bundle(m.parse_share_hex(s)) for s in req.shares]
        secret = reconstruct(*bundles)
        return m.JoinResponse(
            secret=m.format_secret(secret, bundles[0].ell),
            ell=bundles[0].ell,
            participants=[b.t for b in bundles],
            route=_join_route([b.generation for b in bundles]),
        )

    @app.post("/inspect")
    def inspect(req: m.InspectRequest) -> m.InspectResponse:
        bundle = bytes_to_bundle(m.parse_share_hex(req.share))
        sizes = BundleSizes.measure(bundle)
        return m.InspectResponse(
            ell=bundle.ell,
            layout=bundle.layout.describe(),
            t=bundle.t,
            index=bundle.index,
            identity_holds=sizes.identity_holds,
            **_size_fields(sizes),
        )

    @app.post("/sizes")
    def sizes(req: m.SizesRequest) -> m.SizesResponse:
        if not req.participants:
            raise ParameterError("need at least one participant")
        layout = GenerationLayout.parse(req.layout)
        rows = [
            m.SizeRow(t=t, **_size_fields(BundleSizes.expect(req.ell, t, layout)))
            for t in req.participants
        ]
        return m.SizesResponse(ell=req.ell, layout=layout.describe(), rows=rows)

    @app.post("/audit")
    def audit(req: m.AuditRequest) -> m.AuditResponse:
        if req.target == "conventional":
            report = audit_mod.audit_static(
                req.ell, req.m if req.m is not None else 2, req.max_curve_shares
            )
        elif req.target in ("revised", "flawed"):
            if req.layout is None:
                raise ParameterError("bundle audits need a toy layout, e.g. '2,2'")
            report = audit_mod.audit_evolving(
                req.ell,
                GenerationLayout.parse(req.layout),
                scheme=req.target,
                participants=req.participants,
                intergen_width=req.intergen_width,
            )
        elif req.target == "intergen":
            report = audit_mod.audit_intergen(
                req.width if req.width is not None else 4
            )
        else:
            raise ParameterError(
                "target must be conventional, revised, flawed, or intergen"
            )
        worst = report.max_distance
        return m.AuditResponse(
            scheme=report.scheme,
            params=report.params,
            all_zero=report.all_zero,
            worst_num=worst.numerator,
            worst_den=worst.denominator,
            cells=[
                m.AuditCellOut(
                    subject=c.subject,
                    s0=c.s0,
                    s1=c.s1,
                    distance_num=c.distance.numerator,
                    distance_den=c.distance.denominator,
                    ok=c.ok,
                )
                for c in report.cells
            ],
            csv=report.to_csv(),
        )

    @app.post("/attack-demo")
    def attack_demo(req: m.AttackDemoRequest) -> m.AttackDemoResponse:
        layout = GenerationLayout.parse(req.layout)
        if req.sweep:
            successes, total = attack_transcript_sweep(
                req.ell, layout, req.t_low, req.t_high
            )
            return m.AttackDemoResponse(
                mode="sweep",
                ell=req.ell,
                layout=layout.describe(),
                t_low=req.t_low,
                t_high=req.t_high,
                successes=successes,
                total=total,
            )
        if req.secret is not None:
            secret = m.parse_secret(req.secret, req.ell)
        else:
            secret = system_secrets.randbits(req.ell)
        dealer = FlawedDealer(
            secret, ell=req.ell, layout=layout, rng=source_from_seed(req.seed)
        )
        b_low = dealer.issue(req.t_low)
        b_high = dealer.issue(req.t_high)
        recovered = two_party_attack(b_low, b_high)
        return m.AttackDemoResponse(
            mode="single",
            ell=req.ell,
            layout=layout.describe(),
            t_low=req.t_low,
            t_high=req.t_high,
            secret=m.format_secret(secret, req.ell),
            recovered=m.format_secret(recovered, req.ell),
            match=recovered == secret,
        )

    return app
