"""Numerical invariants of m-primary monomial ideals.

Colength by staircase heights, multiplicity by two independent routes
(Newton-polyhedron covolume and Hilbert-Samuel asymptotics), mixed
multiplicities e_i(m|I) by exact interpolation of e(m^s I) in s, and the
factorization exponent r(I).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Sequence

import numpy as np

from lechlab._exact import interpolate, poly_eval
from lechlab.monomial import (
    MAX_DIM,
    IdealError,
    MonomialIdeal,
    UnsupportedDimension,
    colon,
    maximal_ideal,
    mu,
    order,
    product,
    require_m_primary,
    unit_vector,
)
from lechlab.newton import MAX_HULL_DIM, build_polyhedron, integral_closure, normalized_covolume

log = logging.getLogger(__name__)

DEFAULT_MAX_START = 12
_INF = np.int64(1) << 40


class InternalError(RuntimeError):
    """An exactness contract was violated; signals a bug, not bad input."""


class NotStabilized(RuntimeError):
    """The Hilbert-Samuel window never settled below the configured cap."""


# -- colength ----------------------------------------------------------------


def _step(H: np.ndarray, gens: Sequence[tuple[int, ...]]) -> np.ndarray:
    """Heights of K*J from heights H of J, for K generated by ``gens``.

    H[u] is the number of lattice points (u, t) outside J; the last
    coordinate is the height axis.  The array must already be large enough
    that H vanishes beyond it.
    """
    shape = H.shape
    out = np.full(shape, _INF, dtype=np.int64)
    for g in gens:
        head, top = g[:-1], g[-1]
        if any(a >= n for a, n in zip(head, shape)):
            continue
        src = tuple(slice(0, n - a) for a, n in zip(head, shape))
        dst = tuple(slice(a, None) for a in head)
        np.minimum(out[dst], H[src] + top, out=out[dst])
    return out


def _pad(H: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    return np.pad(H, [(0, n - m) for m, n in zip(H.shape, shape)])


def _power_colengths(factors: Sequence[MonomialIdeal], nmax: int):
    """Yield colength(J^n) for n = 1..nmax, with J the product of ``factors``.

    Each factor must be m-primary; applying factors one at a time keeps the
    per-step cost at the sum (not the product) of their generator counts.
    """
    d = factors[0].dim
    if d == 1:
        total = sum(require_m_primary(F)[0] for F in factors)
        for n in range(1, nmax + 1):
            yield n * total
        return
    pps = [require_m_primary(F) for F in factors]
    reach = [sum(pp[k] for pp in pps) for k in range(d - 1)]
    H = np.zeros((0,) * (d - 1), dtype=np.int64)
    for n in range(1, nmax + 1):
        H = _pad(H, tuple(n * r for r in reach))
        for F in factors:
            H = _step(H, F.gens)
        yield int(H.sum())


def colength(I: MonomialIdeal) -> int:
    """Number of monomials outside I."""
    return next(_power_colengths([I], 1))


# -- multiplicity -------------------------------------------------------------


def multiplicity(I: MonomialIdeal) -> int:
    require_m_primary(I)
    if I.dim > MAX_HULL_DIM:
        return multiplicity_by_asymptotics(I)
    P = build_polyhedron(I)
    vol = Fraction(normalized_covolume(P), factorial(I.dim))
    e = vol * factorial(I.dim)
    if e.denominator != 1 or e <= 0:
        raise InternalError(f"d! * covolume = {e} is not a positive integer for {I}")
    return int(e)


def _asymptotic(factors: Sequence[MonomialIdeal], max_start: int) -> int:
    d = factors[0].dim
    width = d + 1
    last = max_start + width + 1
    values: list[int] = []
    fits: list[list[Fraction] | None] = []
    gen = _power_colengths(factors, last)
    for n0 in range(1, max_start + 2):
        while len(values) < n0 + width:
            values.append(next(gen))
        xs = list(range(n0, n0 + width))
        fit = interpolate(xs, values[n0 - 1:n0 - 1 + width])
        fits.append(fit if poly_eval(fit, n0 + width) == values[n0 + width - 1] else None)
        if len(fits) >= 2 and fits[-1] is not None and fits[-2] is not None and fits[-1] == fits[-2]:
            e = fit[d] * factorial(d)
            if e.denominator != 1 or e <= 0:
                raise InternalError(f"Hilbert-Samuel leading term {fit[d]} gives e = {e}")
            return int(e)
    raise NotStabilized(f"colength(J^n) not polynomial on any window starting at n <= {max_start}")


def multiplicity_by_asymptotics(I: MonomialIdeal, max_start: int = DEFAULT_MAX_START) -> int:
    """e(I) as d! times the leading coefficient of n -> colength(I^n).

    A degree-d fit on n0..n0+d is accepted once it also predicts the next
    value and the fit from n0+1 is the same polynomial.
    """
    require_m_primary(I)
    return _asymptotic([I], max_start)


# -- mixed multiplicities ----------------------------------------------------


@dataclass(frozen=True)
class MixedMultiplicities:
    """e_i = e_i(m | I) for i = 0..d; e_0 = e(I) and e_d = e(m) = 1."""

    d: int
    e: tuple[int, ...]

    def __getitem__(self, i: int) -> int:
        return self.e[i]


def vertex_ideal(I: MonomialIdeal) -> MonomialIdeal:
    """The ideal generated by the vertices of NP(I); same closure as I."""
    return MonomialIdeal(I.dim, build_polyhedron(I).vertices)


def _power_sum_ideal(d: int, s: int) -> MonomialIdeal:
    return MonomialIdeal(d, tuple(unit_vector(d, k, s) for k in range(d)))


def mixed_multiplicities(I: MonomialIdeal) -> MixedMultiplicities:
    """Solve e(m^s I) = sum_i C(d,i) s^i e_i exactly from s = 0..d.

    Multiplicity depends only on the Newton polyhedron, and
    NP(m^s I) = NP((x_1^s, ..., x_d^s) * V) with V the vertex ideal, so the
    small product is used in place of m^s I.
    """
    require_m_primary(I)
    d = I.dim
    values = []
    if d <= MAX_HULL_DIM:
        V = vertex_ideal(I)
        for s in range(d + 1):
            values.append(multiplicity(I) if s == 0 else multiplicity(product(_power_sum_ideal(d, s), V)))
    else:
        m = maximal_ideal(d)
        for s in range(d + 1):
            values.append(_asymptotic([m] * s + [I], DEFAULT_MAX_START))
    coeffs = interpolate(list(range(d + 1)), values)
    e = []
    for i, c in enumerate(coeffs):
        ei = c / comb(d, i)
        if ei.denominator != 1 or ei <= 0:
            raise InternalError(f"mixed multiplicity e_{i} = {ei} for {I} is not a positive integer")
        e.append(int(ei))
    if e[d] != 1:
        raise InternalError(f"e_d(m|I) = {e[d]} != 1 for {I}")
    return MixedMultiplicities(d, tuple(e))


# -- r-invariant ---------------------------------------------------------------


def r_invariant(I: MonomialIdeal) -> int:
    """Largest r with I = m^r J for some ideal J (J = R allowed)."""
    require_m_primary(I)
    m = maximal_ideal(I.dim)
    r = 0
    current = I
    while not current.is_unit:
        J = colon(current, m)
        if product(m, J) != current:
            break
        r += 1
        current = J
    return r


# -- report --------------------------------------------------------------------


@dataclass(frozen=True)
class InvariantReport:
    ideal: MonomialIdeal
    closure: MonomialIdeal
    is_closed: bool
    colength: int
    multiplicity: int
    mu: int
    ord: int
    r: int
    mixed: MixedMultiplicities
    e_of_mI: int

    @property
    def dim(self) -> int:
        return self.ideal.dim

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "gens": [list(g) for g in self.ideal.gens],
            "isClosed": self.is_closed,
            "colength": self.colength,
            "multiplicity": self.multiplicity,
            "mu": self.mu,
            "ord": self.ord,
            "r": self.r,
            "mixed": list(self.mixed.e),
            "eOfMI": self.e_of_mI,
        }


def report(I: MonomialIdeal, allow_experimental: bool = False) -> InvariantReport:
    """All invariants of I, cross-checked against each other before returning.

    Dimensions 5 and 6 go through the asymptotic oracle and need
    ``allow_experimental``.
    """
    require_m_primary(I)
    d = I.dim
    if d > MAX_HULL_DIM and not (allow_experimental and d <= MAX_DIM):
        raise UnsupportedDimension(f"invariant reports need d <= {MAX_HULL_DIM}, got d = {d}")
    closure = integral_closure(I)
    mixed = mixed_multiplicities(I)
    m = maximal_ideal(d)
    e = multiplicity(I)
    e_mI = multiplicity(product(m, I))
    rep = InvariantReport(
        ideal=I,
        closure=closure,
        is_closed=closure == I,
        colength=colength(I),
        multiplicity=e,
        mu=mu(I),
        ord=order(I),
        r=r_invariant(I),
        mixed=mixed,
        e_of_mI=e_mI,
    )
    _check_report(rep)
    return rep


def _check_report(rep: InvariantReport) -> None:
    d, e = rep.dim, rep.mixed.e
    problems = []
    if e[0] != rep.multiplicity:
        problems.append(f"e_0 = {e[0]} but e(I) = {rep.multiplicity}")
    if d >= 1 and e[d - 1] != rep.ord:
        problems.append(f"e_(d-1) = {e[d - 1]} but ord(I) = {rep.ord}")
    if sum(comb(d, i) * x for i, x in enumerate(e)) != rep.e_of_mI:
        problems.append(f"expansion gives {sum(comb(d, i) * x for i, x in enumerate(e))}, direct e(mI) = {rep.e_of_mI}")
    for i, x in enumerate(e):
        if x ** d > rep.multiplicity ** (d - i):
            problems.append(f"Rees-Sharp bound fails at i = {i}")
    if rep.r > rep.ord:
        problems.append(f"r = {rep.r} exceeds ord = {rep.ord}")
    if problems:
        raise InternalError(f"inconsistent report for {rep.ideal}: " + "; ".join(problems))


__all__ = [
    "IdealError",
    "InternalError",
    "InvariantReport",
    "MixedMultiplicities",
    "NotStabilized",
    "colength",
    "mixed_multiplicities",
    "multiplicity",
    "multiplicity_by_asymptotics",
    "r_invariant",
    "report",
    "vertex_ideal",
]
