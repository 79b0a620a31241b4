import numpy as np
import pytest

from conftest import sup
from weakwigner.errors import AliasedSymbol, BoundaryLeak, OffGrid, OffGridReflection, OffGridShift
from weakwigner.grid import inner_product, make_grid
from weakwigner.operators import (
    LinearOperator,
    grossmann_royer,
    grossmann_royer_apply,
    heisenberg,
    heisenberg_apply,
    identity,
    momentum_operator,
    operator_from_symbol_gr,
    operator_from_symbol_heisenberg,
    parity,
    position_operator,
    projector_x,
    rank_one,
    weyl_quantize,
)
from weakwigner.states import coherent_state
from weakwigner.symbolic import NAMED_SYMBOLS, PolynomialSymbol, oscillator_symbol
from weakwigner.transforms import wigner


@pytest.fixture(scope="module")
def ham(grid):
    return weyl_quantize(oscillator_symbol(), grid)


def test_oscillator_ground_eigenvector(ham, catalog):
    g0 = catalog["ground"]
    assert sup(ham.apply(g0).amplitudes - 0.5 * g0.amplitudes) <= 1e-6


def test_oscillator_spectrum(ham):
    ev = np.linalg.eigvalsh(ham.matrix)[:6]
    want = np.arange(6) + 0.5
    assert np.all(np.abs(ev - want) / want <= 1e-5)


@pytest.mark.parametrize("name", ["x", "p", "xp", "H", "H2"])
def test_real_symbols_hermitian(grid, name):
    assert weyl_quantize(NAMED_SYMBOLS[name](1.0), grid).hermiticity_defect() <= 1e-8


def test_xp_quantisation_is_symmetric_product(grid):
    x, p = position_operator(grid), momentum_operator(grid)
    sym = weyl_quantize(PolynomialSymbol({(1, 1): 1}), grid)
    assert sup(sym.matrix - 0.5 * (x @ p + p @ x).matrix) < 1e-12


def test_canonical_commutator_on_hermite_subspace(grid):
    x, p = position_operator(grid), momentum_operator(grid)
    comm = (x @ p - p @ x).compress(6)
    assert sup(comm - 1j * np.eye(7)) < 1e-10


def test_momentum_operator_on_coherent_state(grid):
    s = coherent_state(0.5, 1.5, grid)
    assert abs(momentum_operator(grid).matrix_element(s, s) - 1.5) < 1e-12


def test_aliased_symbol(grid):
    with pytest.raises(AliasedSymbol):
        weyl_quantize(PolynomialSymbol({(0, 8): 10.0}), grid)


def test_heisenberg_unitary_and_displacing(grid, catalog):
    x0, p0 = 16 * grid.dx, 0.7
    t = heisenberg(x0, p0, grid)
    assert t.unitarity_defect() <= 1e-10
    for s in catalog.values():
        assert abs(heisenberg_apply(x0, p0, s).norm() - s.norm()) <= 1e-10
    moved = t.apply(catalog["ground"])
    assert abs(position_operator(grid).matrix_element(moved, moved) - x0) < 1e-12
    assert abs(momentum_operator(grid).matrix_element(moved, moved) - p0) < 1e-12


def test_heisenberg_apply_matches_matrix(grid, catalog):
    s = catalog["coherent(1,2)"]
    x0 = -8 * grid.dx
    assert sup(heisenberg(x0, -0.3, grid).apply(s).amplitudes - heisenberg_apply(x0, -0.3, s).amplitudes) < 1e-14


def test_grossmann_royer_involution_and_unitarity(grid, catalog):
    for x0, p0 in [(0.0, 0.0), (8 * grid.dx, 1.3), (-0.5 * grid.dx, -0.4)]:
        t = grossmann_royer(x0, p0, grid)
        cols = np.flatnonzero(np.any(t.matrix != 0, axis=0))
        sq = (t @ t).matrix[:, cols]
        assert sup(sq - np.eye(grid.n)[:, cols]) <= 1e-12
        assert t.unitarity_defect() <= 1e-10
        for s in catalog.values():
            assert abs(grossmann_royer_apply(x0, p0, s).norm() - s.norm()) <= 1e-10


def test_grossmann_royer_is_displaced_parity(grid, catalog):
    # T_GR(z) = T(z) P T(z)^-1 with P the parity about 0
    x0, p0 = 8 * grid.dx, 0.9
    s = catalog["ground"]
    t = heisenberg(x0, p0, grid)
    rhs = t.apply(parity(grid).apply(t.adjoint.apply(s)))
    assert sup(grossmann_royer(x0, p0, grid).apply(s).amplitudes - rhs.amplitudes) < 1e-12


def test_off_grid_arguments(grid, catalog):
    with pytest.raises(OffGridShift):
        heisenberg(0.3 * grid.dx, 0.0, grid)
    with pytest.raises(OffGridReflection):
        grossmann_royer(0.3 * grid.dx, 0.0, grid)
    with pytest.raises(OffGrid):
        projector_x(0.01, grid)


def test_projector_normalisation(grid, catalog):
    s = catalog["coherent(1,2)"]
    total = sum(projector_x(x, grid).matrix_element(s, s) for x in grid.x[100:160]) * grid.dx
    partial = np.sum(np.abs(s.amplitudes[100:160]) ** 2) * grid.dx
    assert abs(total - partial) < 1e-12


def _compressed_gap(a: LinearOperator, b: LinearOperator) -> float:
    return sup(a.compress() - b.compress())


def test_operator_integrals_position(grid):
    x = PolynomialSymbol({(1, 0): 1})
    direct = position_operator(grid)
    assert _compressed_gap(operator_from_symbol_gr(x, grid), direct) <= 1e-5
    assert _compressed_gap(operator_from_symbol_heisenberg(x, grid), direct) <= 1e-5


def test_operator_integrals_projector(grid, catalog):
    g0 = catalog["ground"]
    w = wigner(g0)
    symbol = w.with_values(w.values * 2 * np.pi, "symbol")
    direct = rank_one(g0)
    assert _compressed_gap(operator_from_symbol_gr(symbol, grid), direct) <= 1e-5
    assert _compressed_gap(operator_from_symbol_heisenberg(symbol, grid), direct) <= 1e-5


def test_operator_integral_decay_check(grid):
    with pytest.raises(BoundaryLeak):
        operator_from_symbol_gr(PolynomialSymbol({(1, 0): 1}), grid, decay_tol=1e-8)


def test_identity_and_rank_one(grid, catalog):
    s = catalog["coherent(1,0)"]
    assert sup(identity(grid).apply(s).amplitudes - s.amplitudes) == 0
    proj = rank_one(catalog["ground"])
    assert abs(proj.matrix_element(s, s) - abs(inner_product(catalog["ground"], s)) ** 2) < 1e-14


def test_operator_algebra_small():
    g = make_grid(8, 8.0)
    a = LinearOperator(g, np.eye(8) * 2)
    b = identity(g)
    assert sup((a - b).matrix - np.eye(8)) == 0
    assert sup((a * 1j).adjoint.matrix + 2j * np.eye(8)) == 0
    assert sup((a @ a).matrix - 4 * np.eye(8)) == 0
