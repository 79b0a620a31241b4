"""Phase-space weak values, cross-Wigner transforms and state reconstruction on a 1-D grid."""
from .errors import (
    ConfigError,
    NumericalPreconditionError,
    OrthogonalStates,
    WeakWignerError,
)
from .grid import SpatialGrid, WaveFunction, hbar_fourier, inner_product, inverse_hbar_fourier, make_grid
from .operators import (
    LinearOperator,
    grossmann_royer,
    heisenberg,
    operator_from_symbol_gr,
    operator_from_symbol_heisenberg,
    weyl_quantize,
)
from .reconstruction import (
    WeakValueOracle,
    gr_reconstruct,
    gr_reconstruct_from_rho,
    invert_cross_wigner,
    lundeen_reconstruct,
    reconstruct_by_inversion,
)
from .states import cat_state, coherent_state, hermite_state, parse_state, plane_wave_windowed
from .symbolic import PolynomialSymbol, mccoy_order, parse_symbol
from .transforms import (
    PhaseSpaceFunction,
    cross_ambiguity,
    cross_wigner,
    marginal_p,
    marginal_x,
    symplectic_fourier,
    wigner,
)
from .weakvalues import (
    WeakValueResult,
    all_routes,
    pointer_statistics,
    rho,
    superposition_expectation,
    weak_value_braket,
    weak_value_phase_space,
    weak_value_via_gr,
    weak_value_via_heisenberg,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "LinearOperator",
    "NumericalPreconditionError",
    "OrthogonalStates",
    "PhaseSpaceFunction",
    "PolynomialSymbol",
    "SpatialGrid",
    "WaveFunction",
    "WeakValueOracle",
    "WeakValueResult",
    "WeakWignerError",
    "all_routes",
    "cat_state",
    "coherent_state",
    "cross_ambiguity",
    "cross_wigner",
    "gr_reconstruct",
    "gr_reconstruct_from_rho",
    "grossmann_royer",
    "hbar_fourier",
    "heisenberg",
    "hermite_state",
    "inner_product",
    "inverse_hbar_fourier",
    "invert_cross_wigner",
    "lundeen_reconstruct",
    "make_grid",
    "marginal_p",
    "marginal_x",
    "mccoy_order",
    "operator_from_symbol_gr",
    "operator_from_symbol_heisenberg",
    "parse_state",
    "parse_symbol",
    "plane_wave_windowed",
    "pointer_statistics",
    "reconstruct_by_inversion",
    "rho",
    "superposition_expectation",
    "symplectic_fourier",
    "weak_value_braket",
    "weak_value_phase_space",
    "weak_value_via_gr",
    "weak_value_via_heisenberg",
    "weyl_quantize",
    "wigner",
]
