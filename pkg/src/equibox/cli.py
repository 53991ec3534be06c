"""Command-line entry point wiring all subcommands.

Exit codes: 0 = CERTIFIED / ok, 2 = INCONCLUSIVE (or NOT_CONVERGED /
FAIL / decomposition without obstruction), 1 = usage or input error.
All machine-readable output carries "schema": "equibox/1".
"""

import argparse
import json
import sys

import numpy as np

from equibox import certifier, dickson, repdecomp, solver
from equibox import measures
from equibox.gf2poly import PolyGF2

SCHEMA = "equibox/1"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write("error: %s\n" % message)
        raise SystemExit(1)


def _build_parser():
    p = _Parser(prog="equibox",
                description="Equipartitions of a mass in boxes: algebraic "
                            "certificates and numerical realization.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("dickson", parents=[], help="print a Dickson polynomial")
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--form", choices=["product", "moore"], default="product")
    d.add_argument("--json", action="store_true")

    c = sub.add_parser("certify", help="decide the (m, l, d) certificate")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--d", type=int, required=True)
    c.add_argument("--json", action="store_true")

    md = sub.add_parser("min-d", help="least certified dimension for (m, l)")
    md.add_argument("--m", type=int, required=True)
    md.add_argument("--l", type=int, required=True)
    md.add_argument("--json", action="store_true")

    t = sub.add_parser("table", help="minimal dimension per hyperplane count")
    t.add_argument("--m", type=int, required=True)
    t.add_argument("--l-max", type=int, required=True, dest="l_max")
    t.add_argument("--format", choices=["markdown", "csv", "json"],
                   default="markdown")

    dec = sub.add_parser("decompose",
                         help="character decomposition of the box action")
    dec.add_argument("--m", type=int, required=True)
    dec.add_argument("--l", type=int, required=True)
    dec.add_argument("--json", action="store_true")

    g = sub.add_parser("gen-measure", help="write a seeded synthetic measure")
    g.add_argument("--kind", choices=["gaussian-mixture"],
                   default="gaussian-mixture")
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--components", type=int, default=3)
    g.add_argument("--n", type=int, default=10000)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.add_argument("--grid-cells", type=int, default=0, dest="grid_cells",
                   help="emit a grid JSON with this many cells per axis "
                        "instead of a point-cloud CSV")

    s = sub.add_parser("solve", help="search for an equipartition")
    s.add_argument("--input", required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--tol", type=float, default=1e-3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--restarts", type=int, default=200)
    s.add_argument("--coarse-grid", type=int, default=0, dest="coarse_grid")
    s.add_argument("--maxfev", type=int, default=None)
    s.add_argument("--out", default=None, help="also write the report here")

    v = sub.add_parser("verify", help="recheck a configuration from scratch")
    v.add_argument("--input", required=True)
    v.add_argument("--config", required=True,
                   help="config JSON (bare or a solve report)")
    v.add_argument("--tol", type=float, required=True)
    return p


def _cmd_dickson(args):
    poly = (dickson.dickson_product if args.form == "product"
            else dickson.dickson_moore)(args.m)
    if args.json:
        print(json.dumps({
            "schema": SCHEMA, "m": args.m, "form": args.form,
            "polynomial": poly.to_text(), "terms": len(poly),
            "degree": poly.total_degree(),
        }, sort_keys=True))
    else:
        print(poly.to_text())
    return 0


def _cmd_certify(args):
    cert = certifier.certify(args.m, args.l, args.d)
    witness = PolyGF2.term_text(cert.witness) if cert.witness else None
    if args.json:
        print(json.dumps({
            "schema": SCHEMA, "m": args.m, "l": args.l, "d": args.d,
            "verdict": cert.verdict, "witness": witness,
            "boxes": cert.problem.boxes, "note": cert.note,
        }, sort_keys=True))
    else:
        print("%s  (m=%d, l=%d, d=%d: %d boxes)"
              % (cert.verdict, args.m, args.l, args.d, cert.problem.boxes))
        if witness:
            print("witness term: %s" % witness)
        if cert.note:
            print("note: %s" % cert.note)
    return 0 if cert.verdict == certifier.CERTIFIED else 2


def _cmd_min_d(args):
    d = certifier.min_dimension(args.m, args.l)
    if args.json:
        print(json.dumps({"schema": SCHEMA, "m": args.m, "l": args.l, "d": d},
                         sort_keys=True))
    else:
        print(d)
    return 0


def _m2_footnote(rows):
    paired = all(d_even == d_odd
                 for (l_odd, d_odd), (l_even, d_even)
                 in zip(rows[1::2], rows[2::2]))
    if paired:
        return ("even counts 2k reach the same minimal dimension as 2k-1, "
                "so the even case gives more boxes in the same space")
    return ""


def _cmd_table(args):
    rows = certifier.equipartition_table(args.m, args.l_max)
    footnote = _m2_footnote(rows) if args.m == 2 else ""
    if args.format == "json":
        print(json.dumps({
            "schema": SCHEMA, "m": args.m,
            "rows": [{"l": l, "d": d} for l, d in rows],
            "footnote": footnote,
        }, sort_keys=True))
    elif args.format == "csv":
        print("l,d")
        for l, d in rows:
            print("%d,%d" % (l, d))
    else:
        print("| l | d |")
        print("|---|---|")
        for l, d in rows:
            print("| %d | %d |" % (l, d))
        if footnote:
            print()
            print("note: " + footnote)
    return 0


def _cmd_decompose(args):
    spec = repdecomp.build_test_representation(args.m, args.l)
    table = repdecomp.character_multiplicities(spec)
    named = {repdecomp.character_name(chi): k
             for chi, k in sorted(table.multiplicities.items())}
    try:
        poly = repdecomp.index_polynomial(spec, table)
    except repdecomp.TrivialCharacterError as exc:
        if args.json:
            print(json.dumps({
                "schema": SCHEMA, "m": args.m, "l": args.l,
                "multiplicities": named, "total_dim": table.total_dim,
                "index_polynomial": None, "failure": str(exc),
            }, sort_keys=True))
        else:
            print("FAILURE: %s" % exc)
        return 2
    reference = certifier.criterion_polynomial(args.m, args.l)
    verdict = "MATCH" if poly == reference else "MISMATCH"
    if args.json:
        print(json.dumps({
            "schema": SCHEMA, "m": args.m, "l": args.l,
            "multiplicities": named, "total_dim": table.total_dim,
            "index_polynomial": poly.to_text(), "against_criterion": verdict,
        }, sort_keys=True))
    else:
        print("character multiplicities (dim %d):" % table.total_dim)
        for name, k in named.items():
            if k:
                print("  %-16s %d" % (name, k))
        print("index polynomial: %s" % poly.to_text())
        print("%s against the closed-form criterion" % verdict)
    return 0 if verdict == "MATCH" else 2


def _cmd_gen_measure(args):
    if args.grid_cells:
        grid = measures.gaussian_mixture_grid(args.d, args.components,
                                              args.grid_cells, args.seed)
        measures.write_grid_json(args.out, grid)
    else:
        cloud = measures.gaussian_mixture_cloud(args.d, args.components,
                                                args.n, args.seed)
        measures.write_cloud_csv(args.out, cloud)
    print("wrote %s" % args.out)
    return 0


def _cmd_solve(args):
    measure = measures.load_measure(args.input)
    report = solver.solve_equipartition(
        measure, args.l, args.m, tol=args.tol, max_restarts=args.restarts,
        seed=args.seed, coarse_grid=args.coarse_grid, maxfev=args.maxfev)
    text = report.to_json()
    print(text)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0 if report.status == solver.CONVERGED else 2


def _cmd_verify(args):
    measure = measures.load_measure(args.input)
    with open(args.config) as fh:
        obj = json.load(fh)
    if "config" in obj and isinstance(obj["config"], dict):
        obj = obj["config"]  # a solve report was passed
    config = measures.Configuration.from_dict(obj)
    report = solver.verify_configuration(measure, config, args.tol)
    print(report.to_json())
    print("PASS" if report.passed else "FAIL", file=sys.stderr)
    return 0 if report.passed else 2


_COMMANDS = {
    "dickson": _cmd_dickson,
    "certify": _cmd_certify,
    "min-d": _cmd_min_d,
    "table": _cmd_table,
    "decompose": _cmd_decompose,
    "gen-measure": _cmd_gen_measure,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
}


def dispatch(argv=None):
    """Route argv to a subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, RuntimeError) as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
