"""Exact invariants and inequality checks for monomial ideals in k[x_1..x_d]."""

from lechlab.checkers import CHECKS, Outcome, Verdict, check_all, check_ideal
from lechlab.invariants import colength, mixed_multiplicities, multiplicity, r_invariant, report
from lechlab.monomial import MonomialIdeal, maximal_ideal, parse_ideal, power
from lechlab.newton import build_polyhedron, covolume, integral_closure

__version__ = "0.1.0"

__all__ = [
    "CHECKS",
    "MonomialIdeal",
    "Outcome",
    "Verdict",
    "build_polyhedron",
    "check_all",
    "check_ideal",
    "colength",
    "covolume",
    "integral_closure",
    "maximal_ideal",
    "mixed_multiplicities",
    "multiplicity",
    "parse_ideal",
    "power",
    "r_invariant",
    "report",
]
