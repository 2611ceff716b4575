import numpy as np
import pytest

from phmor import InterpolationSet, PHSystem, gen_msd_chain

JJ2 = np.array([[0.0, 1.0], [-1.0, 0.0]])


@pytest.fixture
def oscillator():
    """Undamped unit oscillator, G(s) = s / (s^2 + 1)."""
    return PHSystem(JJ2, np.zeros((2, 2)), np.eye(2), np.array([[0.0], [1.0]]))


@pytest.fixture
def msd50():
    return gen_msd_chain(50, dampers=0.1)


@pytest.fixture
def msd50_lossless():
    return gen_msd_chain(50)


@pytest.fixture
def msd_points():
    return InterpolationSet.canonical(1j * np.array([0.05, 0.3, 0.9, -1.5, -1.9]), 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


_ACCEPTANCE = {}


@pytest.fixture
def record():
    """Store the one-line verdict of an acceptance criterion for the terminal summary."""

    def _record(key, passed, line):
        _ACCEPTANCE[key] = (bool(passed), line)
        print(f"[{'PASS' if passed else 'FAIL'}] {line}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE):
        passed, line = _ACCEPTANCE[key]
        terminalreporter.write_line(f"[{'PASS' if passed else 'FAIL'}] {line}")
