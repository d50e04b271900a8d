"""Command-line front end: ``lechlab {compute,verify,search,family}``.

Exit codes: 0 clean; 1 a conjecture check failed; 2 a root comparison was
undecided; 3 a theorem check failed or an anomaly was flagged; 64 usage or
parse error; 65 unsupported input (not m-primary, dimension, family
constraints); 70 internal consistency error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from lechlab.checkers import CHECKS, Interval, Outcome, check_all, is_theorem, resolve_checks
from lechlab.explorer import SCHEMA, FamilyParams, SearchConfig, family_grid, family_ideal, search, verify_family
from lechlab.invariants import InternalError, NotStabilized, report
from lechlab.monomial import (
    IdealError,
    MonomialIdeal,
    ParseError,
    ideal_from_json,
    is_power_of_maximal,
    parse_ideal,
)

EX_OK, EX_CONJECTURE, EX_UNDECIDED, EX_THEOREM = 0, 1, 2, 3
EX_USAGE, EX_DATAERR, EX_SOFTWARE = 64, 65, 70

log = logging.getLogger("lechlab")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse exits 2 by default; 2 means UNDECIDED here
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


def _family_arg(text: str) -> FamilyParams:
    try:
        a, b, c = (int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"--family expects a,b,c; got {text!r}") from None
    return FamilyParams(a, b, c)


def _load_ideal(args) -> MonomialIdeal:
    given = [x for x in (args.ideal, args.ideal_json, args.family) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --ideal, --ideal-json, --family")
    if args.ideal is not None:
        return parse_ideal(args.ideal, args.dim)
    if args.ideal_json is not None:
        I = ideal_from_json(args.ideal_json)
        if args.dim is not None and args.dim != I.dim:
            raise ParseError(f"--dim {args.dim} disagrees with the JSON dimension {I.dim}")
        return I
    return family_ideal(_family_arg(args.family))[0]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _dumps(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True)


def _fmt(value) -> str:
    if isinstance(value, Interval):
        return f"[{float(value.lo):.12g}, {float(value.hi):.12g}]"
    if value is None:
        return "-"
    return str(value)


# -- subcommands --------------------------------------------------------------------


def cmd_compute(args) -> int:
    I = _load_ideal(args)
    rep = report(I, allow_experimental=args.experimental)
    data = {"schema": SCHEMA, **rep.to_json()}
    if args.closure:
        data["closure"] = report(rep.closure, allow_experimental=args.experimental).to_json()
    if args.format == "pretty":
        lines = [f"ideal      {I}"]
        for key in ("colength", "multiplicity", "mu", "ord", "r", "mixed", "eOfMI", "isClosed"):
            lines.append(f"{key:<10} {data[key]}")
        if args.closure:
            c = data["closure"]
            lines.append(f"closure    {rep.closure}")
            lines.append(f"  mu={c['mu']} colength={c['colength']} mixed={c['mixed']}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(_dumps(data), args.out)
    return EX_OK


def _verdict_exit(verdicts, d: int, expect_fail: bool) -> int:
    code = EX_OK
    for v in verdicts:
        if v.anomaly and v.outcome is not Outcome.UNDECIDED:
            code = max(code, EX_THEOREM)
        if v.outcome is Outcome.UNDECIDED:
            code = max(code, EX_UNDECIDED)
        elif v.outcome is Outcome.FAILS and not expect_fail:
            code = max(code, EX_THEOREM if is_theorem(v.name, d) else EX_CONJECTURE)
    return code


def cmd_verify(args) -> int:
    I = _load_ideal(args)
    names = resolve_checks(args.checks)
    rep = report(I, allow_experimental=args.experimental)
    if args.checks.strip() == "all":
        verdicts = check_all(rep)
    else:
        verdicts = [CHECKS[n].func(rep) for n in names]
    code = _verdict_exit(verdicts, I.dim, args.expect_fail)
    items = []
    for v in verdicts:
        item = v.to_json()
        if args.expect_fail and v.outcome is Outcome.FAILS:
            item["expectedFail"] = True
        items.append(item)
    if args.format == "pretty":
        lines = [f"ideal {I}  (d = {I.dim}, colength {rep.colength}, e = {rep.multiplicity})"]
        for v in verdicts:
            tag = " (expected)" if args.expect_fail and v.outcome is Outcome.FAILS else ""
            lines.append(
                f"{v.name:<13} {CHECKS[v.name].title:<50} lhs={_fmt(v.lhs):<28} rhs={_fmt(v.rhs):<8} {v.outcome.value}{tag}"
                + (f"  !! {v.anomaly}" if v.anomaly else "")
            )
        _emit("\n".join(lines), args.out)
    elif args.format == "csv":
        rows = ["check,outcome,lhs,rhs"]
        for item in items:
            lhs = json.dumps(item["lhs"]).replace(",", ";") if isinstance(item["lhs"], dict) else item["lhs"]
            rows.append(f"{item['name']},{item['outcome']},{lhs},{item['rhs']}")
        _emit("\n".join(rows), args.out)
    else:
        _emit(_dumps({"schema": SCHEMA, "verdicts": items, "exitCode": code}), args.out)
    return code


def cmd_search(args) -> int:
    config = SearchConfig(
        dim=args.dim,
        count=args.count,
        seed=args.seed,
        max_exponent=args.max_exp,
        checks=tuple(resolve_checks(args.checks)),
        jobs=args.jobs,
        exhaustive=args.exhaustive,
        colength_max=args.colength_max,
        plant=args.plant,
    )
    if config.jobs < 1 or config.count < 0:
        raise UsageError("--jobs must be >= 1 and --count >= 0")
    result = search(config)
    if args.csv:
        Path(args.csv).write_text(result.to_csv())
    if args.format == "pretty":
        lines = [f"{result.ideals} ideals, dimension {config.dim}"]
        for name, t in result.tallies.items():
            lines.append(
                f"{name:<13} strict={t.strict} equal={t.equal} fails={t.fails} "
                f"skipped={t.skipped} undecided={t.undecided} max lhs/rhs={t.max_ratio}"
            )
        for a in result.anomalies:
            lines.append(f"!! {a['kind']} {a['check']} #{a['index']} gens={a['gens']} lhs={a['lhs']} rhs={a['rhs']}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(result.dumps(), args.out)
    return result.exit_code()


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"--grid expects LO..HI, got {text!r}") from None
    return lo, hi


def cmd_family(args) -> int:
    if args.grid:
        params = family_grid(*_parse_grid(args.grid))
    else:
        if None in (args.a, args.b, args.c):
            raise UsageError("give --a --b --c or --grid")
        params = [FamilyParams(args.a, args.b, args.c)]
    rows, code = [], EX_OK
    for p in params:
        ok, diff = verify_family(p)
        I, pred = family_ideal(p)
        row = {"a": p.a, "b": p.b, "c": p.c, "match": ok,
               "diff": {k: {"engine": e, "predicted": q} for k, (e, q) in diff.items()},
               "predicted": {"mu": pred.mu, "e": pred.e, "e1": pred.e1, "e2": pred.e2, "colength": pred.colength}}
        if is_power_of_maximal(I):
            row["note"] = f"I = m^{p.a}"
        rows.append(row)
        if not ok:
            code = EX_THEOREM
    if args.format == "pretty":
        lines = [f"{'a':>3} {'b':>3} {'c':>3}  {'mu':>4} {'e':>5} {'e1':>4} {'e2':>3} {'len':>5}  result"]
        for r in rows:
            q = r["predicted"]
            status = "ok" if r["match"] else "MISMATCH " + json.dumps(r["diff"])
            note = f"  ({r['note']})" if "note" in r else ""
            lines.append(f"{r['a']:>3} {r['b']:>3} {r['c']:>3}  {q['mu']:>4} {q['e']:>5} {q['e1']:>4} {q['e2']:>3} {q['colength']:>5}  {status}{note}")
        _emit("\n".join(lines), args.out)
    else:
        _emit(_dumps({"schema": SCHEMA, "families": rows}), args.out)
    return code


# -- wiring ---------------------------------------------------------------------------


def _ideal_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ideal", help='monomials in x,y,z,w,v,u, e.g. "x^3, y^4, x*y"; or "m", "m^n" with --dim')
    p.add_argument("--ideal-json", help='{"dim": d, "gens": [[...], ...]}')
    p.add_argument("--family", help="a,b,c: the closure of (x^a, y^b, z^c, xyz)")
    p.add_argument("--dim", type=int)
    p.add_argument("--experimental", action="store_true", help="allow d = 5, 6 through the asymptotic route")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lechlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="invariant report for one ideal")
    _ideal_options(p)
    p.add_argument("--closure", action="store_true", help="also report the integral closure")
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="run inequality checks on one ideal")
    _ideal_options(p)
    p.add_argument("--checks", default="all", help=f"comma list from {', '.join(CHECKS)} or 'all'")
    p.add_argument("--expect-fail", action="store_true", help="treat FAILS as expected (e.g. mi-conj below d = 4)")
    p.add_argument("--format", choices=("json", "csv", "pretty"), default="json")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", help="seeded random or exhaustive search")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-exp", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--checks", default="all")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--colength-max", type=int, default=8)
    p.add_argument("--plant", help="check:factor, scale that check's rhs to plant violations")
    p.add_argument("--out")
    p.add_argument("--csv", help="per-ideal lhs/rhs ratios")
    p.add_argument("--format", choices=("json", "pretty"), default="json")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("family", help="check the (x^a, y^b, z^c, xyz) closed forms")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--c", type=int)
    p.add_argument("--grid", help="LO..HI, every admissible triple in range")
    p.add_argument("--format", choices=("json", "pretty"), default="pretty")
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ParseError, UsageError, ValueError) as exc:
        if isinstance(exc, IdealError) and not isinstance(exc, ParseError):
            print(f"lechlab: {exc}", file=sys.stderr)
            return EX_DATAERR
        print(f"lechlab: {exc}", file=sys.stderr)
        return EX_USAGE
    except (InternalError, NotStabilized) as exc:
        print(f"lechlab: internal error: {exc}", file=sys.stderr)
        return EX_SOFTWARE


if __name__ == "__main__":
    sys.exit(main())
