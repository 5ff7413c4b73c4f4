import numpy as np
import pytest

from khjet import jet, solver


@pytest.fixture(scope="session")
def jet128_run():
    """Default-schedule case-1 run at n=128, shared across test modules."""
    cfg = jet.with_resolution(jet.preset(1), 128)
    u, v, ps = jet.build_initial_conditions(cfg)
    sim = solver.SimConfig()
    result = solver.run_collect(sim, solver.init_state(u, v, ps))
    return cfg, sim, result


@pytest.fixture(scope="session")
def jet32_run():
    """Tiny, fast case-1 run for plumbing tests that need real-ish data."""
    cfg = jet.with_resolution(jet.preset(1), 32)
    u, v, ps = jet.build_initial_conditions(cfg)
    sim = solver.SimConfig(collect_count=6, snapshot_interval=2)
    result = solver.run_collect(sim, solver.init_state(u, v, ps))
    return cfg, sim, result


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def pytest_terminal_summary(terminalreporter):
    """Print one line per acceptance criterion after the test run."""
    try:
        import test_acceptance
    except ImportError:
        return
    results = getattr(test_acceptance, "RESULTS", [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(results):
        status = "PASS" if ok else "FAIL"
        line = f"[criterion {number:2d}] {status} {name}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
