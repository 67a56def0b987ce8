from __future__ import annotations

import sys
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from digext.digraph import Digraph  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def digraphs(draw, min_n=0, max_n=6, oriented=False):
    n = draw(st.integers(min_n, max_n))
    out = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            s = draw(st.sampled_from((0, 1, 2) if oriented else (0, 1, 2, 3)))
            if s & 1:
                out[i] |= 1 << j
            if s & 2:
                out[j] |= 1 << i
    return Digraph(n, out)


@st.composite
def permutations_of(draw, n):
    return draw(st.permutations(list(range(n))))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line)
