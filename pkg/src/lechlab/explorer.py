"""Test-ideal supply and the seeded counterexample search."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterator

from lechlab.checkers import CHECKS, Outcome, Verdict, is_theorem, rescale_rhs, resolve_checks
from lechlab.invariants import report
from lechlab.monomial import IdealError, MonomialIdeal, unit_vector
from lechlab.newton import integral_closure

SCHEMA = 1


# -- the (x^a, y^b, z^c, xyz) family ------------------------------------------------


@dataclass(frozen=True)
class FamilyParams:
    a: int
    b: int
    c: int

    def __post_init__(self) -> None:
        a, b, c = self.a, self.b, self.c
        if not all(isinstance(x, int) for x in (a, b, c)):
            raise IdealError("family parameters must be integers")
        if not 3 <= a <= b <= c:
            raise IdealError(f"need 3 <= a <= b <= c, got ({a}, {b}, {c})")
        if Fraction(1, a) + Fraction(1, b) + Fraction(1, c) > 1:
            raise IdealError(f"need 1/a + 1/b + 1/c <= 1, got ({a}, {b}, {c})")


def pair_colength(a: int, b: int) -> int:
    """Closed form for the colength of the closure of (x^a, y^b), a <= b."""
    if b % a:
        return ceil(Fraction(a * b + b + a, 2)) - 1
    return ceil(Fraction(a * b + b, 2))


@dataclass(frozen=True)
class ClosedForm:
    mu: int
    e: int
    e1: int
    e2: int
    colength: int


def closed_form(p: FamilyParams) -> ClosedForm:
    a, b, c = p.a, p.b, p.c
    return ClosedForm(
        mu=2 * a + b + 1,
        e=a * b + b * c + a * c,
        e1=2 * a + b,
        e2=3,
        colength=pair_colength(a, b) + pair_colength(b, c) + pair_colength(a, c) - a - b - c + 1,
    )


def family_ideal(p: FamilyParams) -> tuple[MonomialIdeal, ClosedForm]:
    """The closure of (x^a, y^b, z^c, xyz) with its predicted invariants."""
    seed = MonomialIdeal(3, ((p.a, 0, 0), (0, p.b, 0), (0, 0, p.c), (1, 1, 1)))
    return integral_closure(seed), closed_form(p)


def verify_family(p: FamilyParams) -> tuple[bool, dict]:
    """Engine values against the closed forms; the diff maps field -> (engine, predicted)."""
    I, pred = family_ideal(p)
    rep = report(I)
    engine = ClosedForm(rep.mu, rep.multiplicity, rep.mixed.e[1], rep.mixed.e[2], rep.colength)
    diff = {k: (v, getattr(pred, k)) for k, v in asdict(engine).items() if v != getattr(pred, k)}
    return not diff, diff


def family_grid(lo: int, hi: int) -> list[FamilyParams]:
    out = []
    for a in range(max(lo, 3), hi + 1):
        for b in range(a, hi + 1):
            for c in range(b, hi + 1):
                if Fraction(1, a) + Fraction(1, b) + Fraction(1, c) <= 1:
                    out.append(FamilyParams(a, b, c))
    return out


# -- random and exhaustive ideals --------------------------------------------------


def sub_seed(seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def random_ideal(dim: int, max_exponent: int, seed: int, extra_cap: int | None = None) -> MonomialIdeal:
    """Pure powers p_k uniform in [1, max_exponent] plus a geometric number of
    uniform points of the box prod [0, p_k), capped at ``extra_cap``."""
    if not 1 <= dim <= 6:
        raise IdealError(f"random ideals are generated for 1 <= dim <= 6, got {dim}")
    if max_exponent < 1:
        raise IdealError("max_exponent must be at least 1")
    rng = random.Random(seed)
    cap = 2 * dim + 2 if extra_cap is None else extra_cap
    pp = [rng.randint(1, max_exponent) for _ in range(dim)]
    points = [unit_vector(dim, k, p) for k, p in enumerate(pp)]
    drawn = 0
    while drawn < cap and rng.random() < 0.75:
        drawn += 1
        v = tuple(rng.randrange(p) for p in pp)
        if any(v):
            points.append(v)
    return MonomialIdeal(dim, tuple(points))


ENUMERATION_LIMITS = {2: 16, 3: 10}


def enumerate_ideals(dim: int, colength_max: int) -> Iterator[MonomialIdeal]:
    """Every m-primary monomial ideal of colength <= colength_max, once each.

    Staircases (order ideals of N^dim) are grown one addable cell at a time;
    the ideal's minimal generators are exactly the addable cells.  Output is
    sorted by colength, then by generators.
    """
    if dim not in ENUMERATION_LIMITS:
        raise IdealError(f"exhaustive enumeration supports dim in {sorted(ENUMERATION_LIMITS)}")
    if not 1 <= colength_max <= ENUMERATION_LIMITS[dim]:
        raise IdealError(f"colength_max must be in 1..{ENUMERATION_LIMITS[dim]} for dim {dim}")

    def addable(cells: frozenset) -> set:
        cand = {tuple(x + (i == k) for i, x in enumerate(c)) for c in cells for k in range(dim)}
        return {
            c for c in cand
            if c not in cells and all(c[k] == 0 or c[:k] + (c[k] - 1,) + c[k + 1:] in cells for k in range(dim))
        }

    level = {frozenset([(0,) * dim])}
    for _ in range(colength_max):
        ideals = sorted(MonomialIdeal(dim, tuple(addable(s))).gens for s in level)
        for gens in ideals:
            yield MonomialIdeal(dim, gens)
        level = {s | {c} for s in level for c in addable(s)}


def partition_count(n: int) -> int:
    """p(n) by the standard coin-change recurrence."""
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            ways[total] += ways[total - part]
    return ways[n]


# -- search ------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchConfig:
    dim: int
    count: int = 100
    seed: int = 0
    max_exponent: int = 5
    checks: tuple[str, ...] = ("all",)
    jobs: int = 1
    exhaustive: bool = False
    colength_max: int = 8
    plant: str | None = None  # "check:factor", scales that check's rhs

    def describe(self) -> dict:
        """Config fields that determine the report (jobs does not)."""
        out = {
            "dim": self.dim,
            "checks": resolve_checks(self.checks),
            "exhaustive": self.exhaustive,
        }
        if self.exhaustive:
            out["colengthMax"] = self.colength_max
        else:
            out.update(count=self.count, seed=self.seed, maxExponent=self.max_exponent)
        if self.plant:
            out["plant"] = self.plant
        return out


def _planted(plant: str | None) -> tuple[str, Fraction] | None:
    if not plant:
        return None
    name, _, factor = plant.partition(":")
    if name not in CHECKS or not factor:
        raise ValueError(f"plant must look like 'check:factor', got {plant!r}")
    return name, Fraction(factor)


@dataclass
class Tally:
    strict: int = 0
    equal: int = 0
    fails: int = 0
    skipped: int = 0
    undecided: int = 0
    max_ratio: float | None = None
    witness: list | None = field(default=None)

    def add(self, outcome: Outcome) -> None:
        key = {
            Outcome.HOLDS_STRICT: "strict",
            Outcome.HOLDS_EQUAL: "equal",
            Outcome.FAILS: "fails",
            Outcome.SKIPPED: "skipped",
            Outcome.UNDECIDED: "undecided",
        }[outcome]
        setattr(self, key, getattr(self, key) + 1)


def _evaluate(job: tuple[int, MonomialIdeal, tuple[str, ...], str | None]) -> dict:
    """Per-ideal work unit: plain data out so it pickles and sorts cleanly."""
    index, I, checks, plant = job
    record = {"index": index, "gens": [list(g) for g in I.gens], "verdicts": [], "error": None}
    try:
        rep = report(I)
        planted = _planted(plant)
        for name in checks:
            if not CHECKS[name].dims(I.dim):
                continue
            v: Verdict = CHECKS[name].func(rep)
            if planted and planted[0] == name:
                v = rescale_rhs(v, planted[1])
            record["verdicts"].append(
                {
                    "name": v.name,
                    "outcome": v.outcome.value,
                    "lhs": v.to_json()["lhs"],
                    "rhs": v.to_json()["rhs"],
                    "ratio": v.ratio,
                    "anomaly": v.anomaly,
                    "theorem": is_theorem(v.name, I.dim),
                }
            )
    except Exception as exc:  # engine errors are recorded, never fatal
        record["error"] = f"{type(exc).__name__}: {exc}"
    return record


def _ideals(config: SearchConfig) -> Iterator[MonomialIdeal]:
    if config.exhaustive:
        yield from enumerate_ideals(config.dim, config.colength_max)
    else:
        for i in range(config.count):
            yield random_ideal(config.dim, config.max_exponent, sub_seed(config.seed, i))


@dataclass
class SearchReport:
    config: dict
    tallies: dict[str, Tally]
    anomalies: list[dict]
    errors: list[dict]
    records: list[dict]
    ideals: int

    @property
    def theorem_failures(self) -> list[dict]:
        return [a for a in self.anomalies if a["kind"] == "theorem-fails"]

    def exit_code(self) -> int:
        """3 theorem failure or anomaly, 2 undecided, 1 conjecture failure, else 0."""
        kinds = {a["kind"] for a in self.anomalies}
        if self.errors or kinds & {"theorem-fails", "anomaly"}:
            return 3
        if "undecided" in kinds:
            return 2
        if "conjecture-fails" in kinds:
            return 1
        return 0

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "config": self.config,
            "ideals": self.ideals,
            "tallies": {
                name: {
                    "strict": t.strict,
                    "equal": t.equal,
                    "fails": t.fails,
                    "skipped": t.skipped,
                    "undecided": t.undecided,
                    "maxRatio": t.max_ratio,
                    "witness": t.witness,
                }
                for name, t in self.tallies.items()
            },
            "anomalies": self.anomalies,
            "errors": self.errors,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "check", "outcome", "lhs", "rhs", "ratio", "gens"])
        for rec in self.records:
            for v in rec["verdicts"]:
                lhs = json.dumps(v["lhs"]) if isinstance(v["lhs"], dict) else v["lhs"]
                w.writerow([rec["index"], v["name"], v["outcome"], lhs, v["rhs"], v["ratio"], json.dumps(rec["gens"])])
        return buf.getvalue()


def search(config: SearchConfig) -> SearchReport:
    """Run the configured checks over the ideal stream.

    The report depends only on the config minus ``jobs``: work units are
    pure, and aggregation walks them in index order.
    """
    checks = tuple(resolve_checks(config.checks))
    _planted(config.plant)
    jobs = [(i, I, checks, config.plant) for i, I in enumerate(_ideals(config))]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(_evaluate, jobs, chunksize=max(1, len(jobs) // (4 * config.jobs))))
    else:
        records = [_evaluate(j) for j in jobs]
    records.sort(key=lambda r: r["index"])

    tallies = {name: Tally() for name in checks if CHECKS[name].dims(config.dim)}
    anomalies, errors = [], []
    for rec in records:
        if rec["error"]:
            errors.append({"index": rec["index"], "gens": rec["gens"], "error": rec["error"]})
            continue
        for v in rec["verdicts"]:
            t = tallies[v["name"]]
            outcome = Outcome(v["outcome"])
            t.add(outcome)
            # tightest case: largest lhs/rhs, first index wins ties
            if v["ratio"] is not None and (t.max_ratio is None or v["ratio"] > t.max_ratio):
                t.max_ratio = v["ratio"]
                t.witness = rec["gens"]
            kind = None
            if outcome is Outcome.FAILS:
                kind = "theorem-fails" if v["theorem"] else "conjecture-fails"
            elif outcome is Outcome.UNDECIDED:
                kind = "undecided"
            elif v["anomaly"]:
                kind = "anomaly"
            if kind:
                anomalies.append(
                    {"kind": kind, "check": v["name"], "index": rec["index"], "gens": rec["gens"],
                     "lhs": v["lhs"], "rhs": v["rhs"], "detail": v["anomaly"]}
                )
    return SearchReport(config.describe(), tallies, anomalies, errors, records, len(records))
