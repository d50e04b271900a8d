"""Monomial ideals in k[x_1, ..., x_d] stored as antichains of exponent vectors."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

MAX_DIM = 6
VARIABLES = ("x", "y", "z", "w", "v", "u")

Exponent = tuple[int, ...]


class IdealError(ValueError):
    """Invalid ideal data: bad dimension, negative exponents, empty input."""


class DimensionMismatch(IdealError):
    pass


class NotMPrimary(IdealError):
    """The ideal has infinite colength (or is the unit ideal)."""


class UnsupportedDimension(IdealError):
    pass


class ParseError(IdealError):
    pass


def _check_dim(dim: int) -> None:
    if not isinstance(dim, int) or isinstance(dim, bool) or not 1 <= dim <= MAX_DIM:
        raise IdealError(f"dimension must be an integer in 1..{MAX_DIM}, got {dim!r}")


def _minimal(points: Iterable[Exponent]) -> list[Exponent]:
    # A dominated point dominates some minimal one, so checking against the
    # minimal points found so far (in order of total degree) suffices.
    kept: list[Exponent] = []
    for p in sorted(set(points), key=lambda q: (sum(q), q)):
        if not any(all(a <= b for a, b in zip(k, p)) for k in kept):
            kept.append(p)
    kept.sort()
    return kept


@dataclass(frozen=True)
class MonomialIdeal:
    """A monomial ideal given by its minimal generators.

    ``gens`` is always the lexicographically sorted antichain of minimal
    exponent vectors, so structural equality is ideal equality.  Any
    generating set may be passed; it is minimalized on construction.
    """

    dim: int
    gens: tuple[Exponent, ...]

    def __post_init__(self) -> None:
        _check_dim(self.dim)
        pts = []
        for g in self.gens:
            g = tuple(int(a) for a in g)
            if len(g) != self.dim:
                raise DimensionMismatch(f"generator {g} does not have length {self.dim}")
            if any(a < 0 for a in g):
                raise IdealError(f"negative exponent in {g}")
            pts.append(g)
        if not pts:
            raise IdealError("an ideal needs at least one generator")
        object.__setattr__(self, "gens", tuple(_minimal(pts)))

    def __str__(self) -> str:
        return "(" + ", ".join(format_monomial(g) for g in self.gens) + ")"

    @property
    def is_unit(self) -> bool:
        return self.gens == ((0,) * self.dim,)

    def __contains__(self, v: Sequence[int]) -> bool:
        return contains(self, v)

    def to_json(self) -> dict:
        return {"dim": self.dim, "gens": [list(g) for g in self.gens]}


def minimalize(points: Iterable[Sequence[int]], dim: int) -> MonomialIdeal:
    pts = [tuple(p) for p in points]
    if not pts:
        raise IdealError("cannot minimalize an empty point set")
    return MonomialIdeal(dim, tuple(pts))


def maximal_ideal(dim: int) -> MonomialIdeal:
    _check_dim(dim)
    return MonomialIdeal(dim, tuple(unit_vector(dim, k) for k in range(dim)))


def unit_ideal(dim: int) -> MonomialIdeal:
    return MonomialIdeal(dim, ((0,) * dim,))


def unit_vector(dim: int, k: int, scale: int = 1) -> Exponent:
    return tuple(scale if i == k else 0 for i in range(dim))


def _same_dim(*ideals: MonomialIdeal) -> int:
    dims = {I.dim for I in ideals}
    if len(dims) != 1:
        raise DimensionMismatch(f"ideals live in different dimensions {sorted(dims)}")
    return dims.pop()


def contains(I: MonomialIdeal, v: Sequence[int]) -> bool:
    if len(v) != I.dim:
        raise DimensionMismatch(f"vector {tuple(v)} is not of length {I.dim}")
    return any(all(a <= b for a, b in zip(g, v)) for g in I.gens)


def is_subideal(I: MonomialIdeal, J: MonomialIdeal) -> bool:
    """True iff I is contained in J."""
    _same_dim(I, J)
    return all(contains(J, g) for g in I.gens)


def product(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(I, J)
    return MonomialIdeal(d, tuple(tuple(a + b for a, b in zip(g, h)) for g in I.gens for h in J.gens))


def power(I: MonomialIdeal, n: int) -> MonomialIdeal:
    if not isinstance(n, int) or n < 0:
        raise IdealError(f"power exponent must be a nonnegative integer, got {n!r}")
    result = unit_ideal(I.dim)
    base = I
    while n:
        if n & 1:
            result = product(result, base)
        n >>= 1
        if n:
            base = product(base, base)
    return result


def ideal_sum(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(I, J)
    return MonomialIdeal(d, I.gens + J.gens)


def intersection(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    d = _same_dim(I, J)
    return MonomialIdeal(d, tuple(tuple(max(a, b) for a, b in zip(g, h)) for g in I.gens for h in J.gens))


def colon(I: MonomialIdeal, J: MonomialIdeal) -> MonomialIdeal:
    """I : J, the intersection over generators a of J of I : x^a."""
    d = _same_dim(I, J)
    result = None
    for a in J.gens:
        part = MonomialIdeal(d, tuple(tuple(max(x - y, 0) for x, y in zip(g, a)) for g in I.gens))
        result = part if result is None else intersection(result, part)
    return result


def pure_powers(I: MonomialIdeal) -> list[int | None]:
    """Per axis, the smallest p with x_k^p in I (None if there is none)."""
    out: list[int | None] = [None] * I.dim
    for g in I.gens:
        support = [k for k, a in enumerate(g) if a]
        if len(support) == 1:
            k = support[0]
            if out[k] is None or g[k] < out[k]:
                out[k] = g[k]
        elif not support:
            return [0] * I.dim
    return out


def is_m_primary(I: MonomialIdeal) -> bool:
    return all(p is not None for p in pure_powers(I))


def require_m_primary(I: MonomialIdeal) -> list[int]:
    """Pure-power exponents p_1..p_d; raises for non-m-primary or unit ideals."""
    if I.is_unit:
        raise NotMPrimary("the unit ideal has no invariants")
    pp = pure_powers(I)
    if any(p is None for p in pp):
        missing = [VARIABLES[k] if I.dim <= len(VARIABLES) else f"x{k + 1}" for k, p in enumerate(pp) if p is None]
        raise NotMPrimary(f"ideal {I} contains no pure power of {', '.join(missing)}")
    return pp  # type: ignore[return-value]


def order(I: MonomialIdeal) -> int:
    """ord(I): the largest r with I inside m^r."""
    return min(sum(g) for g in I.gens)


def mu(I: MonomialIdeal) -> int:
    return len(I.gens)


def is_power_of_maximal(I: MonomialIdeal) -> bool:
    return I == power(maximal_ideal(I.dim), order(I))


def delete_variable(I: MonomialIdeal, k: int) -> MonomialIdeal | None:
    """Image of I modulo x_k, as an ideal in the remaining d-1 variables.

    Setting x_k = 0 kills every generator divisible by x_k; the others lose
    their k-th coordinate.  Returns None when every generator is killed.
    """
    if I.dim == 1:
        raise IdealError("cannot delete the only variable")
    kept = [g[:k] + g[k + 1:] for g in I.gens if g[k] == 0]
    if not kept:
        return None
    return MonomialIdeal(I.dim - 1, tuple(kept))


# -- literal formats ---------------------------------------------------------

_TERM = re.compile(r"^([a-z])(?:\^(\d+))?$")


def format_monomial(g: Sequence[int]) -> str:
    names = VARIABLES if len(g) <= len(VARIABLES) else [f"x{k + 1}" for k in range(len(g))]
    parts = [n if a == 1 else f"{n}^{a}" for n, a in zip(names, g) if a]
    return "*".join(parts) if parts else "1"


def parse_ideal(text: str, dim: int | None = None) -> MonomialIdeal:
    """Parse ``"x^3, y^4, z^5, x*y*z"``, ``"m"`` or ``"m^n"``.

    Variables are x, y, z, w, v, u in that order.  Without ``dim`` the
    dimension is the index of the last variable mentioned.
    """
    text = text.strip()
    m = re.fullmatch(r"m(?:\^(\d+))?", text)
    if m:
        if dim is None:
            raise ParseError("the literal 'm' needs an explicit dimension")
        _check_dim(dim)
        return power(maximal_ideal(dim), int(m.group(1) or 1))
    if not text:
        raise ParseError("empty ideal literal")
    monomials = []
    highest = 0
    for raw in text.split(","):
        raw = raw.strip()
        if not raw:
            raise ParseError(f"empty term in {text!r}")
        exps: dict[int, int] = {}
        if raw != "1":
            for factor in raw.split("*"):
                fm = _TERM.match(factor.strip())
                if not fm or fm.group(1) not in VARIABLES:
                    raise ParseError(f"cannot parse factor {factor.strip()!r} in {raw!r}")
                k = VARIABLES.index(fm.group(1))
                exps[k] = exps.get(k, 0) + int(fm.group(2) or 1)
                highest = max(highest, k + 1)
        monomials.append(exps)
    if dim is None:
        dim = max(highest, 1)
    elif highest > dim:
        raise ParseError(f"variable {VARIABLES[highest - 1]} used in dimension {dim}")
    _check_dim(dim)
    return MonomialIdeal(dim, tuple(tuple(e.get(k, 0) for k in range(dim)) for e in monomials))


def ideal_from_json(data: str | dict) -> MonomialIdeal:
    if isinstance(data, str):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or set(data) - {"dim", "gens"} or "gens" not in data or "dim" not in data:
        raise ParseError('expected an object {"dim": d, "gens": [[...], ...]}')
    gens = data["gens"]
    if not isinstance(gens, list) or not all(
        isinstance(g, list) and all(isinstance(a, int) and not isinstance(a, bool) for a in g) for g in gens
    ):
        raise ParseError("gens must be a list of integer lists")
    return MonomialIdeal(data["dim"], tuple(tuple(g) for g in gens))
