import numpy as np
import pytest

from weakwigner.grid import make_grid
from weakwigner.states import cat_state, coherent_state, hermite_state, plane_wave_windowed


@pytest.fixture(scope="session")
def grid():
    """Reference grid: N = 256, extent 20, hbar = 1."""
    return make_grid(256, 20.0, 1.0)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(64, 16.0, 1.0)


@pytest.fixture(scope="session")
def catalog(grid):
    return {
        "ground": hermite_state(0, grid),
        "hermite(1)": hermite_state(1, grid),
        "hermite(2)": hermite_state(2, grid),
        "coherent(1,2)": coherent_state(1.0, 2.0, grid),
        "coherent(1,1)": coherent_state(1.0, 1.0, grid),
        "coherent(1,0)": coherent_state(1.0, 0.0, grid),
        "coherent(0,1)": coherent_state(0.0, 1.0, grid),
        "coherent(2,0)": coherent_state(2.0, 0.0, grid),
        "coherent(2,1)": coherent_state(2.0, 1.0, grid),
        "cat(2,0)": cat_state(2.0, 0.0, grid),
        "cat(3,0)": cat_state(3.0, 0.0, grid),
        "pww(1,1.5)": plane_wave_windowed(1.0, 1.5, grid),
    }


# five (psi, phi) pairs used wherever a criterion asks for "5 catalog pairs"
FIVE_PAIRS = [
    ("ground", "coherent(1,0)"),
    ("hermite(1)", "coherent(0,1)"),
    ("coherent(1,2)", "coherent(1,1)"),
    ("cat(2,0)", "hermite(2)"),
    ("pww(1,1.5)", "ground"),
]


def sup(a):
    return float(np.max(np.abs(a)))


# (criterion number, title, measured, tolerance, passed), filled by test_acceptance
ACCEPTANCE: dict[int, tuple] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, measured, tol, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {n:2d}  {title:<34s} {measured:.3e}  (tol {tol:g})")
