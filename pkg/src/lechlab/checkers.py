"""Lech-type inequalities checked in exact arithmetic against an InvariantReport."""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, replace
from fractions import Fraction
from math import comb, factorial
from typing import Callable

import gmpy2

from lechlab.invariants import InvariantReport, r_invariant
from lechlab.monomial import DimensionMismatch, is_power_of_maximal

DEFAULT_PRECISION_CAP = 4096
START_PRECISION = 64


class Outcome(str, enum.Enum):
    HOLDS_STRICT = "HOLDS_STRICT"
    HOLDS_EQUAL = "HOLDS_EQUAL"
    FAILS = "FAILS"
    UNDECIDED = "UNDECIDED"
    SKIPPED = "SKIPPED"

    @property
    def holds(self) -> bool:
        return self in (Outcome.HOLDS_STRICT, Outcome.HOLDS_EQUAL)


@dataclass(frozen=True)
class Interval:
    """Closed rational interval [lo, hi]."""

    lo: Fraction
    hi: Fraction

    def to_json(self) -> dict:
        return {"lo": _num(self.lo), "hi": _num(self.hi)}


def _num(x: Fraction | int) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class Verdict:
    name: str
    outcome: Outcome
    lhs: Fraction | Interval | None
    rhs: Fraction | None
    report: InvariantReport
    precision_bits: int | None = None
    power_of_m: bool | None = None
    anomaly: str | None = None
    note: str | None = None

    @property
    def ratio(self) -> float | None:
        """lhs / rhs, using the upper end of an interval lhs."""
        if self.lhs is None or not self.rhs:
            return None
        upper = self.lhs.hi if isinstance(self.lhs, Interval) else self.lhs
        return float(Fraction(upper) / self.rhs)

    def to_json(self) -> dict:
        lhs = self.lhs.to_json() if isinstance(self.lhs, Interval) else (None if self.lhs is None else _num(self.lhs))
        out = {
            "name": self.name,
            "outcome": self.outcome.value,
            "lhs": lhs,
            "rhs": None if self.rhs is None else _num(self.rhs),
            "precisionBits": self.precision_bits,
            "ideal": self.report.ideal.to_json(),
        }
        if self.power_of_m is not None:
            out["isPowerOfM"] = self.power_of_m
        if self.anomaly:
            out["anomaly"] = self.anomaly
        if self.note:
            out["note"] = self.note
        return out


def compare(lhs: Fraction | int, rhs: Fraction | int) -> Outcome:
    if lhs < rhs:
        return Outcome.HOLDS_STRICT
    if lhs == rhs:
        return Outcome.HOLDS_EQUAL
    return Outcome.FAILS


def _compare_interval(lhs: Interval, rhs: Fraction) -> Outcome:
    if lhs.hi < rhs:
        return Outcome.HOLDS_STRICT
    if lhs.lo > rhs:
        return Outcome.FAILS
    if lhs.lo == lhs.hi == rhs:
        return Outcome.HOLDS_EQUAL
    return Outcome.UNDECIDED


def rescale_rhs(v: Verdict, factor: Fraction) -> Verdict:
    """The same verdict with its right-hand side multiplied by ``factor``.

    Used to plant synthetic violations when exercising the search harness.
    """
    if v.rhs is None or v.lhs is None:
        return v
    rhs = v.rhs * factor
    outcome = _compare_interval(v.lhs, rhs) if isinstance(v.lhs, Interval) else compare(v.lhs, rhs)
    return replace(v, rhs=rhs, outcome=outcome, note="planted: rhs scaled by " + str(factor))


# -- coefficient tables ----------------------------------------------------------


@dataclass(frozen=True)
class StirlingTable:
    """Coefficients of P_d(n) = n(n+1)...(n+d-1) and Q_d(n) = P_d(n)/n.

    s[i] multiplies n^(d-i) in P_d (i = 0..d-1); t[i-1] multiplies n^(d-i)
    in Q_d (i = 1..d).
    """

    d: int
    s: tuple[int, ...]
    t: tuple[int, ...]


def _expand(roots: list[int]) -> list[int]:
    """Coefficients (highest degree first) of prod (n + r) over r in roots."""
    poly = [1]
    for r in roots:
        poly = [a + r * b for a, b in zip(poly + [0], [0] + poly)]
    return poly


def stirling_table(d: int) -> StirlingTable:
    if not isinstance(d, int) or not 1 <= d <= 8:
        raise ValueError(f"Stirling tables are provided for 1 <= d <= 8, got {d!r}")
    p = _expand(list(range(d)))  # degree d, constant term 0
    q = _expand(list(range(1, d)))  # degree d-1
    return StirlingTable(d, tuple(p[:d]), tuple(q))


def rising(x, d: int):
    """x (x+1) ... (x+d-1)."""
    out = 1
    for k in range(d):
        out *= x + k
    return out


# -- checkers ----------------------------------------------------------------------


def _require_dim(rep: InvariantReport, dims, name: str) -> None:
    if rep.dim not in dims:
        raise DimensionMismatch(f"{name} applies in dimension {sorted(dims)}, not {rep.dim}")


def check_lech(rep: InvariantReport) -> Verdict:
    lhs, rhs = rep.multiplicity, factorial(rep.dim) * rep.colength
    return Verdict("lech", compare(lhs, rhs), Fraction(lhs), Fraction(rhs), rep)


def precision_cap() -> int:
    env = os.environ.get("LECHLAB_PRECISION_BITS")
    return int(env) if env else DEFAULT_PRECISION_CAP


def root_enclosure(e: int, d: int, bits: int) -> tuple[Fraction, Fraction, bool]:
    """lo <= e^(1/d) <= hi with hi - lo <= 2^-bits; the flag marks an exact root."""
    scale = 1 << bits
    root, exact = gmpy2.iroot(gmpy2.mpz(e) * scale ** d, d)
    lo = Fraction(int(root), scale)
    return (lo, lo, True) if exact else (lo, lo + Fraction(1, scale), False)


def check_root_lech(rep: InvariantReport, cap: int | None = None) -> Verdict:
    """P(e(I)^(1/d)) <= d! colength, with P the rising factorial of length d."""
    d = rep.dim
    rhs = Fraction(factorial(d) * rep.colength)
    e = rep.multiplicity
    root, exact = gmpy2.iroot(gmpy2.mpz(e), d)
    if exact:
        lhs = Fraction(rising(int(root), d))
        return Verdict("root-lech", compare(lhs, rhs), lhs, rhs, rep, precision_bits=0)
    cap = cap or precision_cap()
    bits = START_PRECISION
    while True:
        lo, hi, _ = root_enclosure(e, d, bits)
        # P is increasing on [0, oo), so the image of [lo, hi] is [P(lo), P(hi)].
        lhs = Interval(rising(lo, d), rising(hi, d))
        outcome = _compare_interval(lhs, rhs)
        if outcome is not Outcome.UNDECIDED or bits >= cap:
            break
        bits *= 2
    anomaly = "undecided at precision cap" if outcome is Outcome.UNDECIDED else None
    return Verdict("root-lech", outcome, lhs, rhs, rep, precision_bits=bits, anomaly=anomaly)


def check_length_conj(rep: InvariantReport) -> Verdict:
    """sum_{i<d} s_i e_i(m|I) <= d! colength."""
    d = rep.dim
    tab = stirling_table(d)
    lhs = sum(s * e for s, e in zip(tab.s, rep.mixed.e))
    rhs = factorial(d) * rep.colength
    return Verdict("length-conj", compare(lhs, rhs), Fraction(lhs), Fraction(rhs), rep)


def check_mi_conj(rep: InvariantReport) -> Verdict:
    """e(mI) <= d! colength: strict for d >= 4, false at I = m below that."""
    d = rep.dim
    lhs, rhs = rep.e_of_mI, factorial(d) * rep.colength
    outcome = compare(lhs, rhs)
    anomaly = note = None
    if d >= 4 and outcome is not Outcome.HOLDS_STRICT:
        anomaly = f"expected strict inequality in dimension {d}, got {outcome.value}"
    if d < 4:
        note = "not a theorem below dimension 4"
    return Verdict("mi-conj", outcome, Fraction(lhs), Fraction(rhs), rep, anomaly=anomaly, note=note)


def check_dim2_sharp(rep: InvariantReport) -> Verdict:
    """e(I) <= 2 colength - 2 ord(I) + r(closure of I)."""
    _require_dim(rep, {2}, "dim2-sharp")
    lhs = rep.multiplicity
    rhs = 2 * rep.colength - 2 * rep.ord + r_invariant(rep.closure)
    return Verdict("dim2-sharp", compare(lhs, rhs), Fraction(lhs), Fraction(rhs), rep)


def _equality_vs_powers(rep: InvariantReport, outcome: Outcome) -> tuple[bool, str | None]:
    power = is_power_of_maximal(rep.ideal)
    if rep.is_closed and (outcome is Outcome.HOLDS_EQUAL) != power:
        what = "equality at a non-power of m" if not power else "strict inequality at a power of m"
        return power, what
    return power, None


def check_dim2_equality(rep: InvariantReport) -> Verdict:
    """e(I) + e_1(m|I) <= 2 colength, with equality exactly at powers of m."""
    _require_dim(rep, {2}, "dim2-equality")
    if not rep.is_closed:
        return Verdict("dim2-equality", Outcome.SKIPPED, None, None, rep, note="ideal is not integrally closed")
    lhs = rep.multiplicity + rep.mixed.e[1]
    rhs = 2 * rep.colength
    outcome = compare(lhs, rhs)
    power, anomaly = _equality_vs_powers(rep, outcome)
    return Verdict("dim2-equality", outcome, Fraction(lhs), Fraction(rhs), rep, power_of_m=power, anomaly=anomaly)


def check_dim3(rep: InvariantReport) -> Verdict:
    """e(I) + 3 e_1(m|I) + 2 e_2(m|I) <= 6 colength."""
    _require_dim(rep, {3}, "dim3")
    e = rep.mixed.e
    lhs = e[0] + 3 * e[1] + 2 * e[2]
    rhs = 6 * rep.colength
    outcome = compare(lhs, rhs)
    power, anomaly = _equality_vs_powers(rep, outcome)
    return Verdict("dim3", outcome, Fraction(lhs), Fraction(rhs), rep, power_of_m=power, anomaly=anomaly)


def _closed_only(name: str, rep: InvariantReport) -> Verdict | None:
    if rep.is_closed:
        return None
    return Verdict(name, Outcome.SKIPPED, None, None, rep, note="ideal is not integrally closed")


def check_mu_conj(rep: InvariantReport) -> Verdict:
    """sum_{i=1}^d t_i e_i(m|I) <= (d-1)! mu(I) for integrally closed I."""
    skipped = _closed_only("mu-conj", rep)
    if skipped:
        return skipped
    d = rep.dim
    tab = stirling_table(d)
    lhs = sum(t * e for t, e in zip(tab.t, rep.mixed.e[1:]))
    rhs = factorial(d - 1) * rep.mu
    outcome = compare(lhs, rhs)
    anomaly = None
    if outcome is not Outcome.HOLDS_EQUAL and is_power_of_maximal(rep.ideal):
        anomaly = "powers of m must give equality"
    return Verdict("mu-conj", outcome, Fraction(lhs), Fraction(rhs), rep, anomaly=anomaly)


def check_mu_doubled(rep: InvariantReport) -> Verdict:
    """sum_i 2^(i-1) C(d-1, i-1) e_i(m|I) <= (d-1)! mu(I), d >= 5, I closed."""
    if rep.dim < 5:
        raise DimensionMismatch(f"mu-doubled applies in dimension >= 5, not {rep.dim}")
    skipped = _closed_only("mu-doubled", rep)
    if skipped:
        return skipped
    d = rep.dim
    lhs = sum(2 ** (i - 1) * comb(d - 1, i - 1) * rep.mixed.e[i] for i in range(1, d + 1))
    rhs = factorial(d - 1) * rep.mu
    return Verdict("mu-doubled", compare(lhs, rhs), Fraction(lhs), Fraction(rhs), rep, note="experimental: asymptotic multiplicities")


def check_dao_smirnov(rep: InvariantReport) -> Verdict:
    """e_1(m|I) <= (d-1)! (mu(I) - d + 1) for closed I; equality iff d = 2."""
    skipped = _closed_only("dao-smirnov", rep)
    if skipped:
        return skipped
    d = rep.dim
    lhs = rep.mixed.e[1]
    rhs = factorial(d - 1) * (rep.mu - d + 1)
    outcome = compare(lhs, rhs)
    anomaly = None
    if d == 2 and outcome is not Outcome.HOLDS_EQUAL:
        anomaly = "dimension two must give equality"
    elif d >= 3 and outcome is Outcome.HOLDS_EQUAL:
        anomaly = "equality in dimension >= 3"
    return Verdict("dao-smirnov", outcome, Fraction(lhs), Fraction(rhs), rep, anomaly=anomaly)


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable[[InvariantReport], Verdict]
    title: str
    dims: Callable[[int], bool]
    theorem: Callable[[int], bool]


CHECKS: dict[str, Check] = {
    c.name: c
    for c in [
        Check("lech", check_lech, "e(I) <= d! len(R/I)", lambda d: True, lambda d: True),
        Check("root-lech", check_root_lech, "P(e(I)^(1/d)) <= d! len(R/I)", lambda d: True, lambda d: d == 1),
        Check("length-conj", check_length_conj, "sum s_i e_i(m|I) <= d! len(R/I)", lambda d: True, lambda d: d <= 3),
        Check("mi-conj", check_mi_conj, "e(mI) <= d! len(R/I)", lambda d: d >= 4, lambda d: d >= 4),
        Check("dim2-sharp", check_dim2_sharp, "e(I) <= 2 len(R/I) - 2 ord(I) + r(closure)", lambda d: d == 2, lambda d: True),
        Check("dim2-equality", check_dim2_equality, "e(I) + e_1(m|I) <= 2 len(R/I)", lambda d: d == 2, lambda d: True),
        Check("dim3", check_dim3, "e(I) + 3 e_1(m|I) + 2 e_2(m|I) <= 6 len(R/I)", lambda d: d == 3, lambda d: True),
        Check("mu-conj", check_mu_conj, "sum t_i e_i(m|I) <= (d-1)! mu(I)", lambda d: True, lambda d: d <= 4),
        Check("mu-doubled", check_mu_doubled, "sum 2^(i-1) C(d-1,i-1) e_i(m|I) <= (d-1)! mu(I)", lambda d: d >= 5, lambda d: True),
        Check("dao-smirnov", check_dao_smirnov, "e_1(m|I) <= (d-1)! (mu(I) - d + 1)", lambda d: True, lambda d: True),
    ]
}


def resolve_checks(names) -> list[str]:
    """Expand "all" and validate names, preserving registry order."""
    if isinstance(names, str):
        names = [n.strip() for n in names.split(",") if n.strip()]
    names = list(names)
    if "all" in names:
        return list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise ValueError(f"unknown checks {unknown}; choose from {sorted(CHECKS)} or 'all'")
    return [n for n in CHECKS if n in names]


def is_theorem(name: str, d: int) -> bool:
    return CHECKS[name].theorem(d)


def check_all(rep: InvariantReport, names=None) -> list[Verdict]:
    """Every applicable checker for the report's dimension."""
    selected = resolve_checks(names) if names else list(CHECKS)
    return [CHECKS[n].func(rep) for n in selected if CHECKS[n].dims(rep.dim)]


def check_ideal(I, names=None, allow_experimental: bool = False) -> list[Verdict]:
    from lechlab.invariants import report

    return check_all(report(I, allow_experimental=allow_experimental), names)
