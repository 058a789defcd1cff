from __future__ import annotations

from hypothesis import strategies as st

from zkfiber.complex import SimplicialComplex, maximal_sets, vset

ACCEPTANCE_LINES: list[str] = []


@st.composite
def complexes(draw, min_m: int = 1, max_m: int = 6):
    """Random complexes on 0..m-1 with every vertex a face."""
    m = draw(st.integers(min_m, max_m))
    full = (1 << m) - 1
    raw = draw(st.lists(st.integers(1, full), min_size=0, max_size=6))
    singles = [1 << v for v in range(m)]
    return SimplicialComplex.from_facets(maximal_sets(raw + singles), full)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


__all__ = ["complexes", "vset", "ACCEPTANCE_LINES"]
