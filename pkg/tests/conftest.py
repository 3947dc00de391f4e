import numpy as np
import pytest

from matrix_anderson.model import ModelConfig, SiteLaw


def random_config(rng, n=None, ell=None):
    n = int(rng.integers(1, 5)) if n is None else n
    signs = rng.choice([-1.0, 1.0], size=n)
    couplings = signs * rng.uniform(0.2, 3.0, size=n)
    ell = rng.uniform(0.01, 1.0) if ell is None else ell
    return ModelConfig(n, ell, tuple(couplings), SiteLaw.bernoulli(), rng.uniform(0.5, 2.0))


def random_omega(rng, n):
    return rng.integers(0, 2, size=n).astype(float)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def point_mass_n1():
    return ModelConfig(1, 1.0, (1.0,), SiteLaw.point_mass(0.0), require_support=False)


_ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance line; returns a checker that asserts after recording."""
    def check(number, description, ok, detail=""):
        _ACCEPTANCE.append((number, description, bool(ok), detail))
        assert ok, f"criterion {number} failed: {description} ({detail})"
    return check


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, description, ok, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number:>2}. {description}: {detail}")
