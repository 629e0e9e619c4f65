"""Command-line front end: ``netcode <subcommand> ...``.

Commands read networks and codes from files or stdin ("-").  A bundle
``{"network": ..., "code": ...}`` is accepted wherever a network and a code
are expected, so ``gen | construct | verify`` works as a pipeline.  Output
is compact JSON; ``--pretty`` indents it or prints a readable summary.

Exit status: 0 on success, 1 when a check fails (infeasible code, failed
claim, construction impossible), 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import claims as claims_mod
from .code import NetworkCode, load_code, transfer_matrices, verify
from .convert import ud_to_inst
from .delaycode import DelayCodeScheme, budget_audit, materialize, nonuniform_construct, uniform_construct, uniformity_audit
from .errors import NetcodeError, FieldTooSmallError, HorizonTooShortError
from .field import parse_field
from .lif import lif_construct
from .netgen import generate
from .netgraph import Network, load_network
from .oracle import DEFAULT_CAP, min_field_size, table1_audit
from .sim import decode_check, random_inputs, required_horizon, simulate


class UsageError(Exception):
    pass


def _read(path):
    try:
        if path in (None, "-"):
            text = sys.stdin.read()
        else:
            with open(path) as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path or 'stdin'}: not valid JSON ({exc})") from exc


def _net_and_code(args, need_code=True):
    """Resolve (network, code or None, raw documents) from positional paths."""
    first = _read(args.network)
    if "network" in first:
        net = load_network(first["network"])
        code_doc = first.get("code")
    else:
        net = load_network(first)
        code_doc = None
    code_path = getattr(args, "code", None)
    if code_path is not None:
        doc = _read(code_path)
        code_doc = doc.get("code", doc) if "kernels" not in doc else doc
    if code_doc is None:
        if need_code:
            raise UsageError("no code given (pass a code file or a {network, code} bundle)")
        return net, None, first
    if "entries" in code_doc:
        code = DelayCodeScheme.from_dict(code_doc).to_code(net)
    else:
        code = load_code(code_doc, net)
    return net, code, first


def _emit(args, obj, text=None):
    if args.pretty and text is not None:
        out = text if text.endswith("\n") else text + "\n"
    else:
        out = json.dumps(obj, indent=2 if args.pretty else None, sort_keys=False, default=str) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_gen(args):
    net = generate(args.spec, seed=args.seed)
    _emit(args, net.to_dict())
    return 0


def cmd_construct(args):
    net, _, _ = _net_and_code(args, need_code=False)
    if args.algo == "lif":
        try:
            code = lif_construct(net, parse_field(args.field), args.mode)
        except FieldTooSmallError as exc:
            print(f"construction failed: {exc}", file=sys.stderr)
            return 1
        _emit(args, {"network": net.to_dict(), "code": code.to_dict()})
        return 0
    build = uniform_construct if args.discipline == "uniform" else nonuniform_construct
    try:
        scheme = build(net, args.mode)
    except NetcodeError as exc:
        print(f"construction failed: {exc}", file=sys.stderr)
        return 1
    doc = {
        "network": net.to_dict(),
        "scheme": scheme.to_dict(),
        "code": scheme.to_code(net).to_dict(),
        "budget": budget_audit(net, scheme),
    }
    if scheme.discipline == "uniform":
        doc["uniform"] = uniformity_audit(net, scheme)
    _emit(args, doc)
    return 0


def cmd_verify(args):
    net, code, _ = _net_and_code(args)
    v = verify(net, code)
    _emit(args, v.to_dict(), v.describe())
    return 0 if v.feasible else 1


def cmd_convert(args):
    net, code, _ = _net_and_code(args)
    conv = ud_to_inst(net, code)
    rep = conv.report()
    _emit(args, {"network": net.to_dict(), "code": conv.code.to_dict(), "report": rep},
          "  ".join(f"{k}={v}" for k, v in rep.items()))
    return 0


def cmd_minfield(args):
    net, _, _ = _net_and_code(args, need_code=False)
    qs = [int(q) if q.isdigit() else q for q in args.fields.split(",")]
    res = min_field_size(net, args.mode, qs, source_deg_bound=args.source_deg, cap=args.cap)
    res["verdicts"] = {str(k): v for k, v in res["verdicts"].items()}
    _emit(args, res, f"minimum {args.mode} field: {res['min']}  verdicts: {res['verdicts']}")
    return 0 if res["min"] is not None else 1


def cmd_audit(args):
    net, _, _ = _net_and_code(args, need_code=False)
    qs = [int(q) for q in args.fields.split(",")]
    res = table1_audit(net, qs, source_deg_bound=args.source_deg, cap=args.cap)
    for key in ("inst", "ud"):
        res[key] = {str(k): v for k, v in res[key].items()}
    _emit(args, res)
    return 0 if res["consistent"] else 1


def cmd_simulate(args):
    net, code, _ = _net_and_code(args)
    report = transfer_matrices(net, code)
    H = args.horizon or required_horizon(report)
    inputs = random_inputs(code.field, net.h, H, args.seed)
    trace = simulate(net, code, inputs, H)
    text = trace.to_csv(net.full_order())
    if args.check:
        try:
            ok = decode_check(trace, report, net)
        except HorizonTooShortError as exc:
            print(str(exc), file=sys.stderr)
            return 1
        print(json.dumps(ok), file=sys.stderr)
        if not all(ok.values()):
            return 1
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_materialize(args):
    first = _read(args.network)
    net = load_network(first.get("network", first))
    doc = first.get("scheme")
    if args.scheme:
        doc = _read(args.scheme)
        doc = doc.get("scheme", doc)
    scheme = DelayCodeScheme.from_dict(doc) if doc else uniform_construct(net, "ud")
    g, code = materialize(net, scheme)
    _emit(args, {"network": g.to_dict(), "code": code.to_dict()})
    return 0


def cmd_reproduce(args):
    try:
        names = claims_mod.resolve(args.claim or list(claims_mod.CLAIMS))
    except KeyError as exc:
        raise UsageError(f"unknown claim(s): {exc.args[0]}; choose from {', '.join(claims_mod.CLAIMS)}")
    results = [claims_mod.run_claim(n) for n in names]
    ok = all(r.passed for r in results)
    lines = []
    for r in results:
        lines.append(r.line())
        if args.pretty:
            for k, v in r.detail.items():
                lines.append(f"    {k}: {json.dumps(v, default=str)}")
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} claims passed")
    _emit(args, {"passed": ok, "claims": [r.to_dict() for r in results]}, "\n".join(lines))
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="netcode", description="Linear network codes on acyclic networks with and without delays.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="indented JSON or a readable summary")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", parents=[common], help="emit a reference or random network")
    s.add_argument("spec", help="butterfly | combination:n,k | fig2 | example1 | example3 | fig4 | chain:L,h | random:nodes,edges,h,sinks")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("construct", parents=[common], help="build a code")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("--algo", choices=("lif", "dnc"), default="lif")
    s.add_argument("--field", default="2", help="field as p^m or q (LIF only; delay-and-code is binary)")
    s.add_argument("--mode", choices=("inst", "ud"), default="ud")
    s.add_argument("--discipline", choices=("uniform", "nonuniform"), default="nonuniform")
    s.set_defaults(func=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check feasibility of a code")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("code", nargs="?")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("convert", parents=[common], help="unit-delay code to instantaneous code over an extension field")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("code", nargs="?")
    s.set_defaults(func=cmd_convert)

    s = sub.add_parser("minfield", parents=[common], help="smallest field with a feasible code (exhaustive)")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("--mode", choices=("inst", "ud"), default="inst")
    s.add_argument("--fields", default="2,3,4")
    s.add_argument("--source-deg", type=int, default=0, help="degree bound on source kernels in unit-delay mode")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_minfield)

    s = sub.add_parser("audit", parents=[common], help="solvability in both modes per field")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("--fields", default="2,3,4")
    s.add_argument("--source-deg", type=int, default=0)
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.set_defaults(func=cmd_audit)

    s = sub.add_parser("simulate", parents=[common], help="symbol-level trace as CSV")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("code", nargs="?")
    s.add_argument("--horizon", type=int, default=None)
    s.add_argument("--check", action="store_true", help="also compare sink outputs with the transfer matrices")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("materialize", parents=[common], help="turn node memory of a uniform scheme into forwarding edges")
    s.add_argument("network", nargs="?", default="-")
    s.add_argument("scheme", nargs="?")
    s.set_defaults(func=cmd_materialize)

    s = sub.add_parser("reproduce", parents=[common], help="run the reproduction checks")
    s.add_argument("--claim", action="append", help=f"one of {', '.join(list(claims_mod.CLAIMS) + list(claims_mod.ALIASES))}; repeatable")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"netcode: error: {exc}", file=sys.stderr)
        return 2
    except NetcodeError as exc:
        print(f"netcode: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
