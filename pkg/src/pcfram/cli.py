"""Command-line interface: ``pcfram <subcommand> [flags]``.

Exit status 0 on success, 1 when a verification check fails, 2 on input
errors, 3 when a budget ran out (partial output is still written).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from .dynamics import ProjPoint, RationalMapP1, parse_map, pcf_check
from .errors import InvalidInput, PcframError
from .exactmath import FactorBudget, UniPoly
from .multivar import verify_dupont, verify_tchebyshev
from .padic import lemma12_search, newton_polygon, orbit_valuation_table
from .parsing import ParseError
from .ramify import RAMIFIED, predicted_bad_set, ramified_primes_at_level, stabilization_experiment

FORMATS = ("json", "csv", "markdown", "text")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        one_line = message.replace("\n", " ")
        sys.stderr.write(f"error: code=usage {one_line}\n")
        raise SystemExit(2)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def _prime_list(text: str) -> list[int]:
    try:
        return sorted({int(t) for t in text.replace(" ", "").split(",") if t})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated primes, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="json")
    common.add_argument("--out", help="write the report here instead of standard output")
    common.add_argument("--prime-bound", type=_positive, help="trial-division bound (env PCFRAM_PRIME_BOUND)")
    common.add_argument("--rho-rounds", type=int, help="Pollard rho rounds (env PCFRAM_RHO_ROUNDS)")
    common.add_argument("--degree-budget", type=_positive, help="max d^n per form (env PCFRAM_DEGREE_BUDGET)")
    common.add_argument("--workers", type=_positive, default=1, help="processes for per-prime work")

    parser = _Parser(prog="pcfram", description="Ramification in iterated preimage fields of rational maps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pcf-check", parents=[common], help="post-critical finiteness verdict")
    p.add_argument("--map", required=True)
    p.add_argument("--levels", type=_positive, default=10, help="level budget")

    p = sub.add_parser("ramify", parents=[common], help="ramified primes of preimage fields, levels 1..n")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--levels", type=_positive, default=4)

    p = sub.add_parser("predicted-bad", parents=[common], help="predicted bad-prime set")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True)

    p = sub.add_parser("orbit-vals", parents=[common], help="factored orbit values")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True, help="starting point a")
    p.add_argument("--levels", type=_positive, default=5)

    p = sub.add_parser("lemma12", parents=[common], help="search for orbit valuations not divisible by e")
    p.add_argument("--map", required=True)
    p.add_argument("--alpha", required=True, help="starting point a")
    p.add_argument("--e", type=int, default=2)
    p.add_argument("--exclude-primes", type=_prime_list, default=[])
    p.add_argument("--levels", type=_positive, default=6)

    p = sub.add_parser("newton", parents=[common], help="Newton polygon of a polynomial at a prime")
    p.add_argument("--poly", required=True)
    p.add_argument("--prime", type=int, required=True)

    sub.add_parser("verify-paper", parents=[common], help="check the worked examples exactly")
    return parser


@dataclass
class Result:
    data: dict
    rows: list[dict]
    status: int = 0


def _budget(args) -> FactorBudget:
    return FactorBudget.from_env(trial_bound=args.prime_bound, rho_rounds=args.rho_rounds)


def _map(args) -> RationalMapP1:
    return parse_map(args.map)


def _point(text: str) -> ProjPoint:
    return ProjPoint.parse(text)


def cmd_pcf_check(args) -> Result:
    phi = _map(args)
    v = pcf_check(phi, args.levels)
    data = {"schema": 1, "map": str(phi), **v.as_dict()}
    return Result(data, [{k: data[k] for k in ("map", "status", "level")} | {"postcritical": str(v.divisor)}])


def cmd_ramify(args) -> Result:
    phi = _map(args)
    rep = stabilization_experiment(
        phi, _point(args.alpha), args.levels, _budget(args), degree_budget=args.degree_budget, workers=args.workers
    )
    data = rep.as_dict()
    rows = []
    for lv in rep.levels:
        for v in lv.verdicts:
            rows.append({"n": lv.n, "p": v.p, "status": v.status, "wild_candidate": v.wild_candidate,
                         "poly_degree": lv.poly.degree, "disc_bits": abs(lv.disc).bit_length()})
    return Result(data, rows, 3 if rep.stop_reason else 0)


def cmd_predicted_bad(args) -> Result:
    phi = _map(args)
    pb = predicted_bad_set(phi, _point(args.alpha), _budget(args))
    data = {"schema": 1, "map": str(phi), "alpha": args.alpha, **pb.as_dict()}
    rows = [{"p": p, "classes": "+".join(pb.provenance[p])} for p in pb.primes]
    return Result(data, rows)


def cmd_orbit_vals(args) -> Result:
    phi = _map(args)
    rows = [r.as_dict() for r in orbit_valuation_table(phi, _point(args.alpha), args.levels, _budget(args))]
    return Result({"schema": 1, "map": str(phi), "a": args.alpha, "rows": rows}, rows)


def cmd_lemma12(args) -> Result:
    phi = _map(args)
    ws = lemma12_search(phi, _point(args.alpha), args.e, args.exclude_primes, args.levels, _budget(args))
    rows = [w.as_dict() for w in ws]
    data = {
        "schema": 1,
        "map": str(phi),
        "a": args.alpha,
        "e": args.e,
        "excluded": args.exclude_primes,
        "n_max": args.levels,
        "witnesses": rows,
        "note": "search proves presence only; an empty list means none found up to n_max",
    }
    return Result(data, rows)


def cmd_newton(args) -> Result:
    try:
        P = UniPoly.parse(args.poly)
    except ParseError as exc:
        raise InvalidInput(f"cannot parse polynomial {args.poly!r}: {exc}") from exc
    np = newton_polygon(P, args.prime)
    data = {"schema": 1, "poly": P.to_str(), **np.as_dict()}
    return Result(data, [{"slope": s["slope"], "length": s["length"]} for s in data["segments"]])


def index_fixture_check() -> dict:
    phi = parse_map("z*(z-3)")
    lv = ramified_primes_at_level(phi, ProjPoint(0, 1), 1)
    ramified = sorted(v.p for v in lv.verdicts if v.status == RAMIFIED)
    return {
        "check_id": "z(z-3)-level1-no-ramified-prime",
        "passed": not ramified and 3 in lv.disc_support,
        "evidence": {"poly": lv.poly.to_str(), "disc": lv.disc, "ramified": ramified,
                     "verdicts": [v.as_dict() for v in lv.verdicts]},
    }


def cmd_verify_paper(args) -> Result:
    reports = [verify_dupont().as_dict(), verify_tchebyshev().as_dict()]
    fixture = index_fixture_check()
    reports.append({"name": "index-fixture", "passed": fixture["passed"], "checks": [fixture]})
    passed = all(r["passed"] for r in reports)
    rows = [{"report": r["name"], "check_id": c["check_id"], "passed": c["passed"]} for r in reports for c in r["checks"]]
    return Result({"schema": 1, "passed": passed, "reports": reports}, rows, 0 if passed else 1)


COMMANDS = {
    "pcf-check": cmd_pcf_check,
    "ramify": cmd_ramify,
    "predicted-bad": cmd_predicted_bad,
    "orbit-vals": cmd_orbit_vals,
    "lemma12": cmd_lemma12,
    "newton": cmd_newton,
    "verify-paper": cmd_verify_paper,
}


def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(result.data, sort_keys=True, indent=2) + "\n"
    cols: list[str] = []
    for r in result.rows:
        cols += [k for k in r if k not in cols]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        w.writeheader()
        for r in result.rows:
            w.writerow({k: _cell(r.get(k, "")) for k in cols})
        return buf.getvalue()
    head = [f"{k}: {_cell(v)}" for k, v in sorted(result.data.items()) if not isinstance(v, (dict, list))]
    if fmt == "markdown":
        lines = [f"- **{h.split(': ', 1)[0]}**: {h.split(': ', 1)[1]}" for h in head]
        if cols:
            lines += ["", "| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
            lines += ["| " + " | ".join(_cell(r.get(k, "")) for k in cols) + " |" for r in result.rows]
        return "\n".join(lines) + "\n"
    lines = list(head)
    for r in result.rows:
        lines.append("  " + "  ".join(f"{k}={_cell(r.get(k, ''))}" for k in cols))
    return "\n".join(lines) + "\n"


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = COMMANDS[args.command](args)
    except PcframError as exc:
        sys.stderr.write(f"error: code={exc.code} {exc}\n")
        return exc.exit_status
    except (ValueError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: code=invalid-input {exc}\n")
        return 2
    text = render(result, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if result.status == 3:
        sys.stderr.write("error: code=budget partial output written; raise --degree-budget to go further\n")
    return result.status


if __name__ == "__main__":
    raise SystemExit(main())
