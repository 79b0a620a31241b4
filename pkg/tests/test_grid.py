import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import sup
from weakwigner.errors import BoundaryLeak, GridMismatch, InvalidGrid
from weakwigner.grid import (
    SpatialGrid,
    WaveFunction,
    hbar_fourier,
    inner_product,
    inverse_hbar_fourier,
    make_grid,
    shifted,
)


def test_reference_grid_layout(grid):
    assert grid.num_points == 256
    assert grid.dx == 20.0 / 256
    assert grid.x[128] == 0.0
    assert grid.x[0] == -10.0
    assert grid.p[128] == 0.0
    assert grid.dp == 2 * np.pi * grid.hbar / (grid.num_points * grid.dx)


@pytest.mark.parametrize("n,ext,hbar", [(7, 10.0, 1.0), (256, 0.0, 1.0), (256, 20.0, -1.0), (4, 1.0, 1.0)])
def test_invalid_grid(n, ext, hbar):
    with pytest.raises(InvalidGrid):
        make_grid(n, ext, hbar)


def test_odd_grid_rejected():
    with pytest.raises(InvalidGrid):
        SpatialGrid(9, -4.5, 1.0)


def test_index_lookup(grid):
    assert grid.index_of(0.0) == 128
    assert grid.index_of(grid.dx * 3) == 131
    assert grid.index_of(0.01) is None
    assert grid.momentum_index_of(grid.p[200]) == 200


def test_ground_fourier_is_gaussian(catalog, grid):
    # analytic oracle: the ground state is its own Fourier transform
    hat = hbar_fourier(catalog["ground"])
    want = np.pi ** -0.25 * np.exp(-grid.p**2 / 2)
    assert hat.domain == "momentum"
    assert sup(hat.amplitudes - want) < 1e-12


@pytest.mark.parametrize("x0,p0", [(1.0, 2.0), (-1.5, 0.5), (0.3, -1.0)])
def test_coherent_fourier_analytic(grid, x0, p0):
    from weakwigner.states import coherent_state

    psi = coherent_state(x0, p0, grid)
    p = grid.p
    want = np.pi ** -0.25 * np.exp(-((p - p0) ** 2) / 2) * np.exp(-1j * (p * x0 - p0 * x0 / 2))
    assert sup(hbar_fourier(psi).amplitudes - want) < 1e-12


def test_round_trip_and_parseval(catalog):
    states = list(catalog.values())
    for s in states:
        back = inverse_hbar_fourier(hbar_fourier(s))
        assert sup(back.amplitudes - s.amplitudes) <= 1e-9
    for a in states:
        for b in states:
            lhs = inner_product(hbar_fourier(b), hbar_fourier(a))
            assert abs(lhs - inner_product(b, a)) <= 1e-9


def test_fourier_requires_decay(grid):
    flat = WaveFunction(grid, np.ones(grid.num_points))
    with pytest.raises(BoundaryLeak):
        hbar_fourier(flat)


def test_mismatched_grids(grid, small_grid):
    a = WaveFunction(grid, np.zeros(grid.num_points))
    b = WaveFunction(small_grid, np.zeros(small_grid.num_points))
    with pytest.raises(GridMismatch):
        inner_product(a, b)
    with pytest.raises(GridMismatch):
        WaveFunction(grid, np.zeros(3))


def test_normalized_flag_is_checked(grid):
    with pytest.raises(ValueError):
        WaveFunction(grid, np.ones(grid.num_points), normalized=True)


def test_amplitudes_are_read_only(catalog):
    with pytest.raises(ValueError):
        catalog["ground"].amplitudes[0] = 1.0


def test_shifted_zero_extends():
    v = np.arange(5, dtype=complex)
    assert shifted(v, 2).tolist() == [2, 3, 4, 0, 0]
    assert shifted(v, -1).tolist() == [0, 0, 1, 2, 3]
    assert not shifted(v, 9).any()


_amps = st.lists(
    st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False), min_size=16, max_size=16
)


@settings(max_examples=50, deadline=None)
@given(_amps, _amps, st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False))
def test_inner_product_axioms(a, b, c):
    g = make_grid(16, 8.0)
    u, v = WaveFunction(g, a), WaveFunction(g, b)
    assert abs(inner_product(u, v) - np.conj(inner_product(v, u))) <= 1e-9 * (1 + u.norm() * v.norm())
    assert abs(inner_product(u, v * c) - c * inner_product(u, v)) <= 1e-9 * (1 + abs(c) * u.norm() * v.norm())
    assert inner_product(u, u).real >= 0


@settings(max_examples=30, deadline=None)
@given(_amps)
def test_discrete_fourier_is_unitary(a):
    g = make_grid(16, 8.0)
    u = WaveFunction(g, a)
    hat = hbar_fourier(u, check=False)
    assert abs(hat.norm_squared() - u.norm_squared()) <= 1e-9 * (1 + u.norm_squared())
    assert sup(inverse_hbar_fourier(hat).amplitudes - u.amplitudes) <= 1e-9 * (1 + u.norm())
