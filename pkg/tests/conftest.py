import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nicesec.poset import from_strict_pairs

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def posets(draw, min_n=1, max_n=7, density=None):
    """Random posets: pairs i < j under a hidden linear extension, closed."""
    n = draw(st.integers(min_n, max_n))
    cand = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(st.lists(st.booleans(), min_size=len(cand), max_size=len(cand)))
    perm = draw(st.permutations(range(n)))
    pairs = [(perm[i], perm[j]) for (i, j), k in zip(cand, keep) if k]
    return from_strict_pairs(n, pairs)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
