"""Command line runner: one verification scenario per subcommand."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor

from . import scenarios as S
from .formulas import to_csv

DEFAULT_SUITE = [
    ("sphericity", {"p": 2, "r": 1}),
    ("sphericity", {"p": 3, "r": 1}),
    ("sphericity", {"p": 2, "r": 2}),
    ("reduction", {"group": "Q8", "p": 2, "r": 1}),
    ("reduction", {"group": "D8", "p": 2, "r": 1}),
    ("reduction", {"group": "plus", "p": 2, "r": 2}),
    ("reduction", {"group": "minus", "p": 2, "r": 2}),
    ("reduction", {"group": "heisenberg", "p": 3, "r": 1}),
    ("split-seq", {"collection": "T", "p": 2, "n_or_r": 2}),
    ("split-seq", {"collection": "T", "p": 3, "n_or_r": 3}),
    ("split-seq", {"collection": "I", "p": 2, "n_or_r": 2}),
    ("maps", {"p": 2, "r": 2}),
    ("tau", {"p": 2, "r": 2}),
    ("formulas", {"p": 3, "r": 2}),
    ("pi-phi", {"group": "plus", "p": 2, "r": 2}),
    ("almost", {"r": 1}),
]


def _params(args: argparse.Namespace) -> dict:
    cmd = args.command
    if cmd in ("sphericity", "tau", "formulas"):
        return {"p": args.p, "r": args.r}
    if cmd in ("reduction", "pi-phi"):
        return {"group": args.group, "p": args.p, "r": args.r}
    if cmd == "split-seq":
        size = args.dim if args.collection == "T" else args.r
        return {"collection": args.collection, "p": args.p, "n_or_r": size}
    if cmd == "maps":
        return {"p": args.p, "r": args.r, "dim": args.dim}
    if cmd == "almost":
        return {"r": args.r}
    if cmd == "classical":
        return {"p": args.p, "n": args.dim}
    raise SystemExit(f"unknown command {cmd}")


def _run_one(job: tuple[str, dict, bool]) -> S.Report:
    name, params, long = job
    if name == "classical":
        return S.run(name, **params)
    return S.run(name, long=long, **params)


def _csv_reports(reports: list[S.Report]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["scenario", "params", "check", "status", "expected", "actual"])
    for rep in reports:
        params = json.dumps(rep.params, sort_keys=True)
        if rep.reason is not None:
            w.writerow([rep.scenario, params, "", "skipped", "", rep.reason])
        for c in rep.checks:
            w.writerow([rep.scenario, params, c.name, c.status, json.dumps(c.expected), json.dumps(c.actual)])
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=2, help="prime (default 2)")
    common.add_argument("--r", type=int, default=None, help="number of hyperbolic pairs")
    common.add_argument("--dim", type=int, default=None, help="dimension of V for T(V) checks")
    common.add_argument("--group", default="heisenberg", choices=S.GROUP_CHOICES)
    common.add_argument("--collection", default="T", choices=["T", "I"])
    common.add_argument("--long", action="store_true", help="unlock (3,2) homology and r = 3")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for the suite")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--format", default="json", choices=["json", "csv"])
    common.add_argument("--no-timing", action="store_true", help="omit elapsed_ms for byte-stable output")

    parser = argparse.ArgumentParser(prog="cosetposet", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "sphericity": "homology, Euler characteristic and pi1 of C_H(V) I(V)",
        "reduction": "nu_hat fibers and homology of C_E A(E) against C_V I(V)",
        "split-seq": "rank identity of the split exact sequence",
        "maps": "theta_v/s_v comparabilities and thetabar/sbar inverses",
        "tau": "non-boundary certificate for the pushed-forward sphere",
        "formulas": "isotropic counts and the wedge count",
        "pi-phi": "phi: pi -> H(V) and homology of C_pi A(E)",
        "almost": "radical quotient for the almost extraspecial case",
        "classical": "Solomon-Tits, affine and relative T(V) sphericity",
        "suite": "run the default scenario list",
    }
    for name, text in helps.items():
        sub.add_parser(name, parents=[common], help=text)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.r is None:
        args.r = 1 if args.command in ("reduction", "pi-phi") and args.group in ("Q8", "D8") else 2
    if args.dim is None:
        args.dim = 2 if args.command in ("split-seq", "classical") else None
    if args.command in ("reduction", "pi-phi") and args.group in ("Q8", "D8"):
        args.p, args.r = 2, 1
    if args.command == "suite":
        jobs = [(name, params, args.long) for name, params in DEFAULT_SUITE]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                reports = list(pool.map(_run_one, jobs))
        else:
            reports = [_run_one(j) for j in jobs]
    else:
        reports = [_run_one((args.command, _params(args), args.long))]

    if args.format == "csv":
        if args.command == "formulas" and reports[0].reason is None:
            rows, wedge = S.formula_tables(args.p, args.r)
            text = to_csv(["p", "r", "j", "N_j", "D_j"], rows) + "\n" + to_csv(["p", "r", "d", "euler"], wedge)
        else:
            text = _csv_reports(reports)
    else:
        docs = [rep.as_dict(timing=not args.no_timing) for rep in reports]
        text = json.dumps(docs if args.command == "suite" else docs[0], indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for rep in reports:
        if rep.reason is not None:
            print(f"skipped {rep.scenario}: {rep.reason}", file=sys.stderr)
    codes = [rep.exit_code for rep in reports]
    return 1 if 1 in codes else (2 if 2 in codes else 0)


if __name__ == "__main__":
    sys.exit(main())
