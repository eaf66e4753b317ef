"""Operator and participant command line.

Two modes: ``--store DIR`` embeds a node in-process (no server needed),
``--endpoint URL`` talks to a running service.  Mutating commands sign
locally with ``--key``.  ``--json`` emits schema-stable JSON on stdout.

Exit codes: 0 success, 1 validation or usage, 2 verification failure
(signature, chain, certificate), 3 I/O or endpoint unreachable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from decimal import Decimal
from pathlib import Path

from ags.analysis import (
    AnalysisError,
    anova_oneway,
    groups_from_rows,
    load_rows,
    series_from_rows,
    summarize_overbilling,
)
from ags.client import (
    ActionClient,
    EmbeddedTransport,
    HttpTransport,
    RemoteActionError,
    TransportError,
)
from ags.codec import CodecError, MeasurementReport
from ags.consensus import ConsensusError, GovernancePolicy, proposal_key
from ags.crypto import CryptoError, CurveError, generate_private, get_curve, load_key, save_key
from ags.decimals import format_decimal
from ags.engine import GovernanceNode
from ags.ledger import verify_chain_file
from ags.signing import Actor
from ags.slalang import SlaError, evaluate, overbilling_pct, parse
from ags.store import StoreError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_IO = 3


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ags",
        description="signed weighted consensus on SLA measurement reports",
    )
    parser.add_argument("--endpoint", default=os.environ.get("AGS_ENDPOINT"))
    parser.add_argument("--store", default=os.environ.get("AGS_STORE"))
    parser.add_argument("--key", default=os.environ.get("AGS_KEY"))
    parser.add_argument("--curve", default=os.environ.get("AGS_CURVE", "secp256k1"))
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", help="generate a key file")
    p.add_argument("--out", required=True)

    sub.add_parser("address", help="print the address for --key")

    p = sub.add_parser("contract", help="contract operations")
    contract_sub = p.add_subparsers(dest="subcommand", required=True)
    c = contract_sub.add_parser("create")
    c.add_argument("--policy", required=True, help="policy JSON file")
    c.add_argument("--program", required=True, help="rule program file")
    c = contract_sub.add_parser("show")
    c.add_argument("--contract", required=True)

    p = sub.add_parser("propose", help="propose a report for a period")
    _report_args(p)

    p = sub.add_parser("observe", help="attach an observation")
    p.add_argument("--contract", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--text", required=True)

    p = sub.add_parser("vote", help="cast a signed vote")
    p.add_argument("decision", choices=["approve", "reject"])
    p.add_argument("--contract", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--version", type=int, default=None)

    p = sub.add_parser("resubmit", help="resubmit an edited report")
    _report_args(p)

    p = sub.add_parser("payable", help="rule evaluation")
    payable_sub = p.add_subparsers(dest="subcommand", required=True)
    c = payable_sub.add_parser("eval")
    c.add_argument("--program", required=True, help="rule program file")
    c.add_argument("--metric", action="append", default=[], metavar="NAME=VALUE")
    c.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")

    p = sub.add_parser("timeline", help="full event history for a period")
    p.add_argument("--contract", required=True)
    p.add_argument("--period", required=True)

    p = sub.add_parser("verify", help="chain / certificate verification")
    verify_sub = p.add_subparsers(dest="subcommand", required=True)
    c = verify_sub.add_parser("chain")
    c.add_argument("--file", default=None, help="chain file (default: store's)")
    c = verify_sub.add_parser("cert")
    c.add_argument("--contract", required=True)
    c.add_argument("--period", required=True)

    p = sub.add_parser("anova", help="one-way ANOVA over a CSV series")
    p.add_argument("--csv", required=True)

    p = sub.add_parser("overbilling", help="overbilling reduction figures")
    p.add_argument("--legacy", default=None)
    p.add_argument("--automated", default=None)
    p.add_argument("--csv", default=None)
    p.add_argument("--label", default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default=os.environ.get("AGS_ADDR", "127.0.0.1:8630"))

    return parser


def _report_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--contract", required=True)
    p.add_argument("--period", required=True)
    p.add_argument("--metric", action="append", default=[], metavar="NAME=VALUE")
    p.add_argument("--notes", default="")


def _parse_kv(pairs: list[str]) -> dict[str, str]:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise CliError(f"expected NAME=VALUE, got {pair!r}")
        name, value = pair.split("=", 1)
        out[name] = value
    return out


def _actor(args) -> Actor:
    if not args.key:
        raise CliError("--key (or AGS_KEY) is required for this command")
    try:
        return Actor(load_key(args.key))
    except (CryptoError, OSError) as exc:
        raise CliError(f"cannot load key: {exc}", EXIT_IO) from exc


def _transport(args):
    if args.endpoint and args.store:
        raise CliError("use exactly one of --endpoint or --store")
    if args.endpoint:
        return HttpTransport(args.endpoint)
    if args.store:
        try:
            return EmbeddedTransport(GovernanceNode(args.store, args.curve))
        except (StoreError, CurveError) as exc:
            raise CliError(f"cannot open store: {exc}", EXIT_IO) from exc
    raise CliError("one of --endpoint or --store (or AGS_ENDPOINT/AGS_STORE) is required")


def _client(args) -> ActionClient:
    return ActionClient(_transport(args), _actor(args))


def _emit(args, data: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        for line in human:
            print(line)


# --- command handlers ----------------------------------------------------------


def cmd_keygen(args) -> int:
    curve = get_curve(args.curve)
    priv = generate_private(curve)
    save_key(args.out, priv)
    actor = Actor(priv)
    _emit(
        args,
        {"key_file": args.out, "curve": curve.name, "address": actor.address},
        [f"wrote {args.out}", f"address: {actor.address}"],
    )
    return EXIT_OK


def cmd_address(args) -> int:
    actor = _actor(args)
    _emit(
        args,
        {"address": actor.address, "curve": actor.curve.name},
        [actor.address],
    )
    return EXIT_OK


def cmd_contract_create(args) -> int:
    try:
        policy = GovernancePolicy.from_json(json.loads(Path(args.policy).read_text()))
        program = Path(args.program).read_text()
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"bad policy JSON: {exc}") from exc
    parse(program)  # surface parse errors before submitting
    client = _client(args)
    cid = client.open_contract(policy, program)
    _emit(args, {"contract_id": cid}, [f"contract {cid}"])
    return EXIT_OK


def cmd_contract_show(args) -> int:
    view = _transport(args).get(f"/v1/contracts/{args.contract}")
    human = [
        f"contract {view['contract_id']}",
        f"threshold {view['policy']['approval_threshold']}",
    ] + [
        f"  {period}: {info['state']} v{info['current_version']}"
        for period, info in view["proposals"].items()
    ]
    _emit(args, view, human)
    return EXIT_OK


def _build_report(args, client: ActionClient, version: int) -> MeasurementReport:
    metrics = {name: Decimal(value) for name, value in _parse_kv(args.metric).items()}
    return MeasurementReport(
        contract_id=bytes.fromhex(args.contract),
        period_id=args.period,
        metrics=metrics,
        author=client.actor.address,
        version=version,
        notes=args.notes,
    )


def cmd_propose(args) -> int:
    client = _client(args)
    report = _build_report(args, client, 1)
    key = client.propose(report)
    view = client.transport.get(f"/v1/proposals/{key}")
    _emit(
        args,
        {"proposal_id": key, "state": view["state"], "version": view["current_version"]},
        [f"proposal {key}", f"state {view['state']} v{view['current_version']}"],
    )
    return EXIT_OK


def cmd_observe(args) -> int:
    client = _client(args)
    result = client.observe(args.contract, args.period, args.text)
    state = result.get("proposal", {}).get("state", "PendingReview")
    _emit(args, {"state": state}, [f"observation recorded; state {state}"])
    return EXIT_OK


def cmd_vote(args) -> int:
    client = _client(args)
    result = client.vote(args.contract, args.period, args.decision, args.version)
    view = result.get("proposal")
    if view is None:
        key = proposal_key(bytes.fromhex(args.contract), args.period)
        view = client.transport.get(f"/v1/proposals/{key}")
    data = {"state": view["state"], "version": view["current_version"]}
    _emit(args, data, [f"vote recorded; state {view['state']}"])
    return EXIT_OK


def cmd_resubmit(args) -> int:
    client = _client(args)
    key = proposal_key(bytes.fromhex(args.contract), args.period)
    view = client.transport.get(f"/v1/proposals/{key}")
    report = _build_report(args, client, int(view["current_version"]) + 1)
    result = client.resubmit(report)
    state = result.get("proposal", {}).get("state", "PendingReview")
    _emit(
        args,
        {"state": state, "version": report.version},
        [f"resubmitted as v{report.version}; state {state}"],
    )
    return EXIT_OK


def cmd_payable_eval(args) -> int:
    try:
        program = parse(Path(args.program).read_text())
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    statement = evaluate(program, _parse_kv(args.metric), _parse_kv(args.param) or None)
    data = {
        "total": format_decimal(statement.total),
        "line_items": [
            {"label": label, "amount": format_decimal(amount)}
            for label, amount in statement.line_items
        ],
        "program_digest": statement.program_digest.hex(),
    }
    human = [f"{label} = {format_decimal(amount)}" for label, amount in statement.line_items]
    _emit(args, data, human)
    return EXIT_OK


def cmd_timeline(args) -> int:
    key = proposal_key(bytes.fromhex(args.contract), args.period)
    events = _transport(args).get(f"/v1/proposals/{key}/timeline")
    human = [
        f"{e['seq']:3d} {e['kind']:<12} {e['actor']} {e['timestamp']}" for e in events
    ]
    _emit(args, {"events": events}, human)
    return EXIT_OK


def cmd_verify_chain(args) -> int:
    if args.file:
        chain_file = Path(args.file)
    elif args.store:
        chain_file = Path(args.store) / "chain.jsonl"
    else:
        raise CliError("verify chain needs --file or --store")
    if not chain_file.exists():
        raise CliError(f"no chain file at {chain_file}", EXIT_IO)
    bad = verify_chain_file(chain_file)
    if bad is None:
        _emit(args, {"ok": True}, ["chain ok"])
        return EXIT_OK
    _emit(args, {"ok": False, "first_invalid_height": bad}, [f"chain invalid at height {bad}"])
    return EXIT_VERIFY


def cmd_verify_cert(args) -> int:
    view = _transport(args).get(
        f"/v1/contracts/{args.contract}/certificates/{args.period}"
    )
    ok = bool(view.get("verified"))
    data = {
        "ok": ok,
        "reason": view.get("verification_reason"),
        "certificate_digest": view.get("certificate_digest"),
    }
    _emit(args, data, [f"certificate {'ok' if ok else 'REJECTED'}: {data['reason']}"])
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_anova(args) -> int:
    try:
        groups = groups_from_rows(load_rows(args.csv))
        result = anova_oneway(groups)
    except OSError as exc:
        raise CliError(str(exc), EXIT_IO) from exc
    data = {
        "f_ratio": result.f_ratio,
        "df_between": result.df_between,
        "df_within": result.df_within,
        "p_value": result.p_value,
    }
    _emit(
        args,
        data,
        [
            f"F({result.df_between}, {result.df_within}) = {result.f_ratio:.5f}",
            f"p = {result.p_value:.6f}",
        ],
    )
    return EXIT_OK


def cmd_overbilling(args) -> int:
    if args.csv:
        try:
            series = series_from_rows(load_rows(args.csv), args.label)
        except OSError as exc:
            raise CliError(str(exc), EXIT_IO) from exc
        summary = summarize_overbilling(series)
        data = {
            "mean": format_decimal(summary.mean),
            "count": summary.count,
            "min": format_decimal(summary.minimum),
            "max": format_decimal(summary.maximum),
        }
        _emit(
            args,
            data,
            [
                f"n = {summary.count}",
                f"mean = {format_decimal(summary.mean)}%",
                f"range = [{format_decimal(summary.minimum)}, {format_decimal(summary.maximum)}]%",
            ],
        )
        return EXIT_OK
    if args.legacy is None or args.automated is None:
        raise CliError("overbilling needs --csv or both --legacy and --automated")
    pct = overbilling_pct(args.legacy, args.automated)
    _emit(args, {"reduction_pct": str(pct)}, [f"{pct}%"])
    return EXIT_OK


def cmd_serve(args) -> int:
    if not args.store:
        raise CliError("serve requires --store (or AGS_STORE)")
    from ags.service import serve

    node = GovernanceNode(args.store, args.curve)
    serve(node, args.addr)
    return EXIT_OK


_HANDLERS = {
    ("keygen", None): cmd_keygen,
    ("address", None): cmd_address,
    ("contract", "create"): cmd_contract_create,
    ("contract", "show"): cmd_contract_show,
    ("propose", None): cmd_propose,
    ("observe", None): cmd_observe,
    ("vote", None): cmd_vote,
    ("resubmit", None): cmd_resubmit,
    ("payable", "eval"): cmd_payable_eval,
    ("timeline", None): cmd_timeline,
    ("verify", "chain"): cmd_verify_chain,
    ("verify", "cert"): cmd_verify_cert,
    ("anova", None): cmd_anova,
    ("overbilling", None): cmd_overbilling,
    ("serve", None): cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[(args.command, getattr(args, "subcommand", None))]
    try:
        return handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except RemoteActionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY if exc.status == 401 else EXIT_USAGE
    except (ConsensusError, CodecError, SlaError, AnalysisError, CryptoError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
