"""Command-line front end.

Every command except `serve` is a thin client of the HTTP service: by
default it spins the service up in-process and talks to it through an
in-memory transport, and with --server it talks to a remote instance
instead, so scripted usage and a deployed service behave identically.

Exit codes: 0 success, 2 usage, 3 bad file format, 4 capacity
exceeded, 5 verification failure (1 for anything else).
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import (
    CapacityError,
    FormatError,
    ParameterError,
    SharingError,
    VerificationError,
)
from .shareio import bytes_to_bundle, write_share_file

_EXC_BY_CODE = {
    "usage": ParameterError,
    "format": FormatError,
    "capacity": CapacityError,
    "verification": VerificationError,
}


class ServiceClient:
    """POSTs JSON to the service, in-process unless --server is given."""

    def __init__(self, server: str | None = None):
        if server is None:
            import warnings

            # some fastapi/starlette pairings warn at import time
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app())
        else:
            import httpx

            self._client = httpx.Client(base_url=server, timeout=600.0)

    def post(self, path: str, payload: dict) -> dict:
        try:
            resp = self._client.post(path, json=payload)
        except Exception as exc:  # connection refused, bad URL, ...
            raise SharingError("cannot reach the service: %s" % exc) from exc
        if resp.status_code == 422:
            raise ParameterError("bad request: %s" % resp.text)
        body = resp.json() if resp.content else {}
        if resp.status_code >= 400:
            err = body.get("error", {}) if isinstance(body, dict) else {}
            exc_type = _EXC_BY_CODE.get(err.get("code"), SharingError)
            raise exc_type(err.get("message", "service error %d" % resp.status_code))
        return body


def _save_share(path: str, data_hex: str) -> None:
    # decode and re-encode through the codec so a corrupt response can
    # never land on disk, then write atomically
    write_share_file(path, bytes_to_bundle(bytes.fromhex(data_hex)))


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_split(args) -> int:
    client = ServiceClient(args.server)
    body = client.post(
        "/split",
        {
            "secret": args.secret,
            "participants": args.participants,
            "ell": args.ell,
            "layout": args.layout,
            "seed": args.seed,
        },
    )
    os.makedirs(args.out, exist_ok=True)
    for share in body["shares"]:
        path = os.path.join(args.out, "share-t%d.evs" % share["t"])
        _save_share(path, share["data"])
        print(
            "wrote %s (participant %d, generation %d, %d bytes)"
            % (path, share["t"], share["generation"], len(share["data"]) // 2)
        )
    return 0


def _cmd_join(args) -> int:
    shares = []
    for path in args.shares:
        try:
            with open(path, "rb") as fh:
                shares.append(fh.read().hex())
        except OSError as exc:
            raise ParameterError("cannot read %s: %s" % (path, exc)) from exc
    client = ServiceClient(args.server)
    body = client.post("/join", {"shares": shares})
    print("secret: %s" % body["secret"])
    print(
        "recovered by the %s route from participants %s"
        % (body["route"], ", ".join(str(t) for t in body["participants"]))
    )
    return 0


def _cmd_info(args) -> int:
    with open(args.share, "rb") as fh:
        data = fh.read()
    client = ServiceClient(args.server)
    body = client.post("/inspect", {"share": data.hex()})
    print("file: %s" % args.share)
    print(
        "participant %d: generation %d, index %d, layout %s"
        % (body["t"], body["generation"], body["index"], body["layout"])
    )
    print(
        "field width %d bits, inner degree %d" % (body["ell"], body["inner_degree"])
    )
    print(
        "pieces (bits): cross-generation %d, forwards %d, curve %d, masked %d, pad %d"
        % (
            body["intergen_bits"],
            body["forwards_bits"],
            body["curve_bits"],
            body["masked_bits"],
            body["pad_bits"],
        )
    )
    print("total: %d bits" % body["total_bits"])
    print("size identity: %s" % ("ok" if body["identity_holds"] else "VIOLATED"))
    if not body["bound_applicable"]:
        print("size bound: not applicable (needs t >= 3)")
    else:
        print("size bound: %s" % ("holds" if body["bound_holds"] else "EXCEEDED"))
    return 0


_SIZE_COLUMNS = (
    "t",
    "generation",
    "inner_degree",
    "intergen_bits",
    "forwards_bits",
    "curve_bits",
    "masked_bits",
    "pad_bits",
    "total_bits",
    "bound_applicable",
    "bound_holds",
)


def _cmd_sizes(args) -> int:
    client = ServiceClient(args.server)
    body = client.post(
        "/sizes",
        {"participants": args.participants, "ell": args.ell, "layout": args.layout},
    )
    rows = body["rows"]
    if args.csv:
        print(",".join(_SIZE_COLUMNS))
        for row in rows:
            print(",".join(str(row[c]) for c in _SIZE_COLUMNS))
        return 0
    print("share sizes at field width %d, layout %s" % (body["ell"], body["layout"]))
    widths = {c: max(len(c), max(len(str(r[c])) for r in rows)) for c in _SIZE_COLUMNS}
    print("  ".join(c.rjust(widths[c]) for c in _SIZE_COLUMNS))
    for row in rows:
        print("  ".join(str(row[c]).rjust(widths[c]) for c in _SIZE_COLUMNS))
    return 0


def _cmd_audit(args) -> int:
    client = ServiceClient(args.server)
    body = client.post(
        "/audit",
        {
            "target": args.target,
            "ell": args.ell,
            "m": args.m,
            "layout": args.layout,
            "participants": args.participants,
            "intergen_width": args.intergen_width,
            "width": args.width,
            "max_curve_shares": args.max_curve_shares,
        },
    )
    if args.csv:
        sys.stdout.write(body["csv"])
        return 0
    print("secrecy audit: scheme=%s params=%s" % (body["scheme"], body["params"]))
    print(
        "cells audited: %d, worst distance: %d/%d"
        % (len(body["cells"]), body["worst_num"], body["worst_den"])
    )
    if body["all_zero"]:
        print("no cell distinguishes any pair of secrets")
        return 0
    print("LEAK: some cells distinguish secrets")
    shown = 0
    for cell in body["cells"]:
        if not cell["ok"]:
            print(
                "  %s distinguishes secrets %d and %d with distance %d/%d"
                % (
                    cell["subject"],
                    cell["s0"],
                    cell["s1"],
                    cell["distance_num"],
                    cell["distance_den"],
                )
            )
            shown += 1
            if shown >= 20:
                print("  ... further leaking cells suppressed")
                break
    return 0


def _cmd_attack_demo(args) -> int:
    client = ServiceClient(args.server)
    body = client.post(
        "/attack-demo",
        {
            "ell": args.ell,
            "layout": args.layout,
            "t_low": args.t_low,
            "t_high": args.t_high,
            "secret": args.secret,
            "seed": args.seed,
            "sweep": args.sweep,
        },
    )
    if body["mode"] == "sweep":
        pct = 100.0 * body["successes"] / body["total"]
        print(
            "sweep over participants %d and %d: %d of %d runs recovered the "
            "secret (%.2f%%)"
            % (body["t_low"], body["t_high"], body["successes"], body["total"], pct)
        )
        return 0
    print(
        "flawed-variant demo: participants %d and %d colluded" % (body["t_low"], body["t_high"])
    )
    print("planted secret:    %s" % body["secret"])
    print("attacker recovered: %s" % body["recovered"])
    print("match: %s" % body["match"])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evolve3",
        description="Evolving 3-threshold secret sharing over binary fields.",
    )
    parser.add_argument(
        "--server",
        metavar="URL",
        default=None,
        help="talk to a running service instead of in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8008)
    p.set_defaults(fn=_cmd_serve)

    p = sub.add_parser("split", help="issue share files for participants")
    p.add_argument("participants", type=int, nargs="+", metavar="T")
    p.add_argument("--secret", required=True, help="hex, at most ell bits")
    p.add_argument("--ell", type=int, default=8, help="field width in bits")
    p.add_argument("--layout", default="standard", help="'standard' or sizes like '4,4'")
    p.add_argument("--seed", default=None, help="64 hex digits for reproducible runs")
    p.add_argument("--out", default=".", help="directory for share files")
    p.set_defaults(fn=_cmd_split)

    p = sub.add_parser("join", help="recover the secret from three share files")
    p.add_argument("shares", nargs="+", metavar="FILE")
    p.set_defaults(fn=_cmd_join)

    p = sub.add_parser("info", help="describe one share file")
    p.add_argument("share", metavar="FILE")
    p.set_defaults(fn=_cmd_info)

    p = sub.add_parser("sizes", help="share size table, measured against the bound")
    p.add_argument("participants", type=int, nargs="+", metavar="T")
    p.add_argument("--ell", type=int, default=8)
    p.add_argument("--layout", default="standard")
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=_cmd_sizes)

    p = sub.add_parser("audit", help="exhaustive secrecy audit of a small instance")
    p.add_argument(
        "--target",
        choices=("conventional", "revised", "flawed", "intergen"),
        default="revised",
    )
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--m", type=int, default=None, help="inner degree (conventional)")
    p.add_argument("--layout", default=None, help="toy sizes like '2,2' (bundle audits)")
    p.add_argument("--participants", type=int, nargs="*", default=None)
    p.add_argument("--intergen-width", type=int, default=2)
    p.add_argument("--width", type=int, default=None, help="field width (intergen)")
    p.add_argument("--max-curve-shares", type=int, default=None)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(fn=_cmd_audit)

    p = sub.add_parser("attack-demo", help="two colluders break the flawed variant")
    p.add_argument("--ell", type=int, default=8)
    p.add_argument("--layout", default="standard")
    p.add_argument("--t-low", type=int, default=17)
    p.add_argument("--t-high", type=int, default=65537)
    p.add_argument("--secret", default=None, help="hex; random when omitted")
    p.add_argument("--seed", default=None)
    p.add_argument(
        "--sweep",
        action="store_true",
        help="exhaust every randomness assignment the attack consumes",
    )
    p.set_defaults(fn=_cmd_attack_demo)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except SharingError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
