"""Command-line entry point: ``olsmub <subcommand> ...``.

Exit status is 0 on success, 1 when a verification fails and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .gfield import DegenerateBasis, FieldError, FieldSpec, dual_basis, factorize, prime_power
from .hvm.census import BudgetExceeded, available_backends, census, default_threads
from .hvm.states import EpistemicState, simulate_measurement
from .nets import NetDesign, net_for, net_to_json, render_text, verify_net
from .qmub.bases import NotPrimePower, mubs_for, mubs_from_json, mubs_macneish, mubs_to_json, verify_mub
from .squares import (
    BudgetExceeded as MateBudgetExceeded,
    InvalidSquare,
    Square,
    find_orthogonal_mate,
    generate_ols,
    macneish_bound,
    read_square,
    standardize,
)

SCHEMA_VERSION = 1


class UsageError(Exception):
    pass


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _dim(d: int, minimum: int = 2) -> int:
    if d < minimum:
        raise UsageError(f"--d must be >= {minimum}")
    return d


def _field(args) -> FieldSpec:
    poly = _ints(args.poly) if getattr(args, "poly", None) else None
    return FieldSpec.of_order(args.d, poly)


# ---------------------------------------------------------------------------
# subcommands: each returns (report dict, text, exit code)


def cmd_field(args):
    _dim(args.d)
    spec = _field(args)
    pair = dual_basis(spec, _ints(args.basis) if args.basis else None)
    report = {
        "d": spec.d,
        "p": spec.p,
        "r": spec.r,
        "irreducible": list(spec.irreducible),
        "add": spec.add_table.tolist(),
        "mul": spec.mul_table.tolist(),
        "trace": [spec.trace(x) for x in range(spec.d)],
        "basis": list(pair.basis),
        "dual": list(pair.dual),
        "decompose_m": [list(pair.decompose_m(x)) for x in range(spec.d)],
        "decompose_n": [list(pair.decompose_n(x)) for x in range(spec.d)],
    }
    lines = [
        str(spec),
        f"basis {list(pair.basis)}  dual {list(pair.dual)}",
        "add:",
        *(" ".join(map(str, r)) for r in report["add"]),
        "mul:",
        *(" ".join(map(str, r)) for r in report["mul"]),
        "trace: " + " ".join(map(str, report["trace"])),
    ]
    return report, "\n".join(lines), 0


def cmd_ols(args):
    _dim(args.d)
    ols = generate_ols(args.d)
    if args.standard:
        ols = standardize(ols)
    report = {"d": args.d, "certified": ols.certified, "squares": [s.tolist() for s in ols.squares]}
    text = "\n\n".join(s.text() for s in ols.squares) or "(no squares)"
    return report, text, 0 if ols.certified else 1


def cmd_net(args):
    _dim(args.d)
    net = net_for(args.d)
    check = verify_net(net)
    report = net_to_json(net) | {"valid": bool(check)}
    return report, render_text(net), 0 if check else 1


def cmd_mubs(args):
    _dim(args.d)
    if prime_power(args.d) is None:
        mubs = mubs_macneish(args.d)
    else:
        mubs = mubs_for(args.d, _ints(args.basis) if args.basis else None, route=args.route)
    cert = verify_mub(mubs, args.tol)
    report = mubs_to_json(mubs)
    text = f"d={mubs.d} bases={len(mubs)} route={mubs.route} max_overlap_dev={cert.max_overlap_deviation:.3e} max_gram_dev={cert.max_gram_deviation:.3e} certified={cert.certified}"
    return report, text, 0 if cert.certified else 1


def cmd_verify(args):
    if not args.mubs and not args.net:
        raise UsageError("verify needs --mubs FILE or --net FILE")
    report, lines, ok = {}, [], True
    if args.mubs:
        mubs = mubs_from_json(_load_json(args.mubs))
        cert = verify_mub(mubs, args.tol)
        report["mubs"] = cert.as_dict()
        lines.append(f"mubs: certified={cert.certified} max_overlap_dev={cert.max_overlap_deviation:.3e}")
        ok &= cert.certified
    if args.net:
        obj = _load_json(args.net)
        net = NetDesign.from_cells(int(obj["d"]), obj["rows"])
        check = verify_net(net)
        report["net"] = {"valid": bool(check), "witness": list(check.witness) if check.witness else None, "reason": check.reason}
        lines.append(f"net: valid={bool(check)} {check.reason}")
        ok &= bool(check)
    return report, "\n".join(lines), 0 if ok else 1


def cmd_census(args):
    _dim(args.d)
    try:
        res = census(
            args.d,
            threads=args.threads,
            backend=args.backend,
            allow_large=args.allow_large,
            report_mixed=args.report_mixed,
            audit=args.audit,
        )
    except BudgetExceeded as exc:
        raise UsageError(str(exc)) from None
    report = res.as_dict()
    text = f"d={res.d} E={res.E} Q={res.Q} ratio={report['ratio']} elapsed={report['elapsed_ms']} ms backend={res.backend} threads={res.threads}"
    if res.mixed is not None:
        text += f" mixed_psd={res.mixed}"
    return report, text, 0


def cmd_mate(args):
    if bool(args.square) == bool(args.cyclic):
        raise UsageError("mate needs exactly one of --square FILE or --cyclic N")
    if args.square:
        sq = read_square(args.square)
    else:
        n = _dim(args.cyclic)
        sq = Square([[(i + j) % n for j in range(n)] for i in range(n)])
    try:
        res = find_orthogonal_mate(sq, budget=args.budget)
    except MateBudgetExceeded as exc:
        return {"status": "BudgetExceeded", "stats": exc.stats}, f"budget exceeded: {exc.stats}", 1
    report = {
        "status": "Found" if res.found else "NoMate",
        "order": sq.order,
        "transversals": res.transversal_count,
        "nodes": res.nodes,
        "mate": res.mate.tolist() if res.found else None,
    }
    text = f"{report['status']} (transversals={res.transversal_count}, nodes={res.nodes})"
    if res.found:
        text += "\n" + res.mate.text()
    return report, text, 0


def cmd_simulate(args):
    _dim(args.d)
    net = net_for(args.d)
    m, j = _ints(args.cell) if args.cell else (None, None)
    if m is None or not (0 <= m < net.n_rows and 0 <= j < args.d):
        raise UsageError("--cell must be 'row,column' inside the net")
    if not 0 <= args.row < net.n_rows:
        raise UsageError(f"--row must lie in 0..{net.n_rows - 1}")
    e = EpistemicState.from_cell(net, m, j)
    res = simulate_measurement(e, args.row, net, args.trials, args.seed)
    report = {"d": args.d, "cell": [m, j], "labels": list(e.labels)} | res.as_dict()
    text = f"state {list(e.labels)} measured on row {args.row}: exact {report['exact']} counts {res.counts} (seed {args.seed})"
    return report, text, 0


def cmd_bound(args):
    _dim(args.d)
    factors = factorize(args.d)
    ols_bound = macneish_bound(args.d)
    report = {
        "d": args.d,
        "factors": {str(p): r for p, r in sorted(factors.items())},
        "ols_lower_bound": ols_bound,
        "mub_lower_bound": ols_bound + 2,
        "prime_power": prime_power(args.d) is not None,
    }
    text = f"d={args.d} factors={report['factors']} OLS >= {ols_bound} MUBs >= {ols_bound + 2}"
    return report, text, 0


def cmd_reproduce(args):
    from .reproduce import run_all

    only = [k.strip() for k in args.only.split(",")] if args.only else None
    try:
        results = run_all(only, threads=args.threads)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    failed = [r.key for r in results if not r.ok]
    report = {
        "checks": [{"key": r.key, "ok": r.ok, "elapsed_ms": round(r.elapsed * 1000, 3), "detail": r.detail} for r in results],
        "failed": failed,
    }
    text = "\n".join(r.line() for r in results)
    text += "\nall checks passed" if not failed else f"\nfailed: {', '.join(failed)}"
    return report, text, 1 if failed else 0


# ---------------------------------------------------------------------------


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="text")
    common.add_argument("--output", "-o", help="write the report to this file instead of stdout")
    common.add_argument("--tol", type=float, default=1e-10, help="linear-algebra tolerance (default 1e-10)")

    parser = argparse.ArgumentParser(prog="olsmub", description="Latin squares, nets, MUBs and the epistemic-state census.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field", parents=[common], help="finite field tables and dual basis")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--poly", help="irreducible polynomial coefficients, low degree first, e.g. 1,1,0,1")
    p.add_argument("--basis", help="field basis as element indices, e.g. 2,1")
    p.set_defaults(func=cmd_field)

    p = sub.add_parser("ols", parents=[common], help="generate orthogonal Latin squares")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--standard", action="store_true", help="relabel symbols so the first row is 0..d-1")
    p.set_defaults(func=cmd_ols)

    p = sub.add_parser("net", parents=[common], help="net design table")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_net)

    p = sub.add_parser("mubs", parents=[common], help="construct and certify MUBs")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--basis", help="field basis for prime powers, as element indices")
    p.add_argument("--route", choices=["auto", "closed-form", "joint"], default="auto")
    p.set_defaults(func=cmd_mubs)

    p = sub.add_parser("verify", parents=[common], help="re-certify MUBs or a net from JSON files")
    p.add_argument("--mubs")
    p.add_argument("--net")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", parents=[common], help="count pure-quantum epistemic states")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--threads", type=int, default=None, help="worker threads (default $OLSMUB_THREADS or 1)")
    p.add_argument("--backend", choices=available_backends())
    p.add_argument("--report-mixed", action="store_true", help="also count positive semidefinite mixed reconstructions")
    p.add_argument("--audit", action="store_true", help="recompute borderline traces with compensated summation")
    p.add_argument("--allow-large", action="store_true", help="permit d > 5")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("mate", parents=[common], help="search for an orthogonal mate")
    p.add_argument("--square", help="square file: order on the first line, then rows")
    p.add_argument("--cyclic", type=int, help="use the cyclic group table of this order")
    p.add_argument("--budget", type=int, default=10**7)
    p.set_defaults(func=cmd_mate)

    p = sub.add_parser("simulate", parents=[common], help="sample measurements on a net-cell state")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--cell", required=True, help="row,column of the prepared state")
    p.add_argument("--row", type=int, required=True, help="net row to measure")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bound", parents=[common], help="MacNeish lower bounds")
    p.add_argument("--d", type=int, required=True)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("reproduce", parents=[common], help="run every reference check")
    p.add_argument("--only", help="comma-separated check keys")
    p.add_argument("--threads", type=int, default=None)
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "tol", 1) <= 0:
        parser.error("--tol must be positive")
    if getattr(args, "threads", None) is None and hasattr(args, "threads"):
        args.threads = default_threads()
    try:
        report, text, code = args.func(args)
    except (UsageError, NotPrimePower, FieldError, DegenerateBasis, InvalidSquare, ValueError) as exc:
        print(f"olsmub {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        out = json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command} | report, indent=2, default=str)
    else:
        out = text
    if args.output:
        Path(args.output).write_text(out + "\n")
    else:
        print(out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
