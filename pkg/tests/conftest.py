import itertools

import pytest
from hypothesis import strategies as st

from lechlab.monomial import MonomialIdeal, contains

ACCEPTANCE_RESULTS: dict[int, tuple[bool, str]] = {}


def box_complement(I: MonomialIdeal) -> list[tuple[int, ...]]:
    """Brute-force staircase: every monomial under the pure-power box not in I."""
    from lechlab.monomial import pure_powers

    pp = pure_powers(I)
    return [v for v in itertools.product(*(range(p) for p in pp)) if not contains(I, v)]


@st.composite
def m_primary_ideals(draw, dims=(2, 3), max_exp=5, max_extra=5):
    d = draw(st.sampled_from(dims))
    pp = [draw(st.integers(1, max_exp)) for _ in range(d)]
    gens = [tuple(p if i == k else 0 for i in range(d)) for k, p in enumerate(pp)]
    extra = draw(st.lists(st.tuples(*(st.integers(0, p - 1) for p in pp)), max_size=max_extra))
    gens += [g for g in extra if any(g)]
    return MonomialIdeal(d, tuple(gens))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def record_criterion():
    def _record(k: int, ok: bool, detail: str = "") -> None:
        ACCEPTANCE_RESULTS[k] = (ok, detail)
        assert ok, f"criterion {k}: {detail}"

    return _record
