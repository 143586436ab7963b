import random

import pytest

from linkvol.generate import random_colored_input, random_slope

# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def seeded_input(seed):
    """Colored input and per-disk slopes (|p|, |q| <= 99) for a seed."""
    d, c = random_colored_input(seed)
    rng = random.Random(1000 + seed)
    return d, c, [random_slope(rng) for _ in d.disks]


@pytest.fixture
def trefoil():
    from linkvol.tangles import NUMERATOR, Slope, close_fragment, tangle_fragment
    return close_fragment(tangle_fragment(Slope(3, 1)), NUMERATOR)


@pytest.fixture
def figure_eight():
    from linkvol.tangles import NUMERATOR, Slope, close_fragment, tangle_fragment
    return close_fragment(tangle_fragment(Slope(5, 2)), NUMERATOR)
