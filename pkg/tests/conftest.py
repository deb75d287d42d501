import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from indexcode.instance import as_groupcast, gen_family, gen_figure2, gen_random  # noqa: E402

# criterion number -> (passed, detail), filled by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def random_pool(count=25, n_max=7, m_max=5, base_seed=100):
    """Deterministic random groupcast instances with n <= n_max, m <= m_max."""
    out = []
    for i in range(count):
        n = 3 + i % (n_max - 2)
        m = min(n, 2 + i % (m_max - 1))
        density = (0.3, 0.5, 0.7)[i % 3]
        out.append((f"random:{n},{m},{density},{base_seed + i}", gen_random(n, m, density, base_seed + i)))
    return out


def acceptance_pool():
    pool = [(f"figure2:{k}", as_groupcast(gen_figure2(k))) for k in (1, 2)]
    pool.append(("complete:4", as_groupcast(gen_family("complete", 4))))
    pool += [(f"dicycle:{n}", as_groupcast(gen_family("dicycle", n))) for n in (4, 5, 6)]
    pool += random_pool()
    return pool


def small_pool():
    """Every instance family with n <= 6 used by the brute-force comparisons."""
    pool = [("figure2:1", as_groupcast(gen_figure2(1)))]
    for kind in ("complete", "empty", "dicycle", "bidicycle"):
        for n in range(1, 7):
            pool.append((f"{kind}:{n}", as_groupcast(gen_family(kind, n))))
    pool += random_pool(count=40, n_max=6, m_max=5, base_seed=500)
    return pool


@pytest.fixture(scope="session")
def pool():
    return acceptance_pool()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'} - {detail}")
