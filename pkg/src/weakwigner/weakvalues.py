"""Weak values of Weyl observables for pre/post-selected pairs.

Four independent evaluations of ``<Phi|A|Psi> / <Phi|Psi>`` are provided:

* ``braket``: matrix element of the quantised operator;
* ``phase_space``: symbol integrated against the cross-Wigner transform;
* ``gr_operator``: symbol integrated against Grossmann-Royer matrix elements;
* ``heisenberg``: symplectic Fourier transform of the symbol integrated
  against Heisenberg-operator matrix elements.

The phase-space routes read every symbol as a Weyl symbol.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import AliasedSymbol, OrthogonalStates, ZeroSum
from .grid import WaveFunction, _same, inner_product, shifted
from .operators import LinearOperator, symbol_samples, weyl_quantize
from .symbolic import PolynomialSymbol
from .transforms import PhaseSpaceFunction, cross_wigner, symplectic_fourier, wigner

OVERLAP_EPS = 1e-8
RESOLUTION_TOL = 1e-8
ROUTES = ("braket", "phase_space", "gr_operator", "heisenberg")


class DivergentWeakValueWarning(UserWarning):
    """Weak value requested for (numerically) orthogonal states."""


@dataclass(frozen=True)
class WeakValueResult:
    value: complex
    overlap: complex
    route: str
    divergent: bool = False

    @property
    def re_part(self) -> float:
        return self.value.real

    @property
    def im_part(self) -> float:
        return self.value.imag

    @property
    def overlap_magnitude(self) -> float:
        return abs(self.overlap)

    def to_json(self) -> dict:
        d = {
            "re": _finite_or_none(self.value.real),
            "im": _finite_or_none(self.value.imag),
            "overlap_re": self.overlap.real,
            "overlap_im": self.overlap.imag,
            "route": self.route,
        }
        if self.divergent:
            d["divergent"] = True
        return d


def _finite_or_none(v: float):
    return float(v) if np.isfinite(v) else None


def _divide(num, ov):
    # forced runs may hit an exactly vanishing overlap; give inf/nan, not an exception
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.asarray(num, dtype=complex) / np.complex128(ov)
    return complex(out) if out.ndim == 0 else out


def checked_overlap(psi: WaveFunction, phi: WaveFunction, force: bool = False) -> tuple[complex, bool]:
    """``<phi|psi>`` with the orthogonality guard ``|<phi|psi>| >= 1e-8 |phi| |psi|``."""
    ov = inner_product(phi, psi)
    thresh = OVERLAP_EPS * phi.norm() * psi.norm()
    if abs(ov) < thresh:
        if not force:
            raise OrthogonalStates(
                f"|<phi|psi>| >= {OVERLAP_EPS:g} |phi||psi| violated: |overlap| = {abs(ov):.3e}; weak value undefined"
            )
        warnings.warn(f"weak value diverges: |<phi|psi>| = {abs(ov):.3e}", DivergentWeakValueWarning, stacklevel=3)
        return ov, True
    return ov, False


def _as_operator(a, grid) -> LinearOperator:
    if isinstance(a, LinearOperator):
        return a
    if isinstance(a, PolynomialSymbol):
        return weyl_quantize(a, grid)
    raise TypeError("braket route needs a LinearOperator or PolynomialSymbol")


def weak_value_braket(A, psi: WaveFunction, phi: WaveFunction, force: bool = False) -> WeakValueResult:
    """``<phi|A|psi> / <phi|psi>``."""
    ov, div = checked_overlap(psi, phi, force)
    op = _as_operator(A, psi.grid)
    return WeakValueResult(_divide(op.matrix_element(phi, psi), ov), ov, "braket", div)


def _check_resolved(prod: np.ndarray, grid) -> None:
    peak = np.abs(prod).max()
    if peak == 0:
        return
    b = prod[:, grid.band]
    edge = max(np.abs(b[:, 0]).max(), np.abs(b[:, -1]).max(), np.abs(b[0]).max(), np.abs(b[-1]).max())
    if edge > RESOLUTION_TOL * peak:
        raise AliasedSymbol(
            f"symbol x cross-Wigner does not decay inside the grid: edge/peak = {edge / peak:.3e} > {RESOLUTION_TOL:g}"
        )


def phase_space_average(a, w: PhaseSpaceFunction) -> complex:
    """``sum a(x, p) F(x, p) dx dp`` for a symbol ``a``."""
    g = w.grid
    prod = symbol_samples(a, g) * w.values
    _check_resolved(prod, g)
    return complex(np.sum(prod) * g.dx * g.dp)


def weak_value_phase_space(
    a, psi: WaveFunction, phi: WaveFunction, force: bool = False, w: PhaseSpaceFunction | None = None
) -> WeakValueResult:
    """``<phi|psi>^-1 sum a W_{psi,phi} dx dp`` (``a`` read as a Weyl symbol)."""
    ov, div = checked_overlap(psi, phi, force)
    w = cross_wigner(psi, phi) if w is None else w
    return WeakValueResult(_divide(phase_space_average(a, w), ov), ov, "phase_space", div)


def gr_matrix_elements(psi: WaveFunction, phi: WaveFunction) -> np.ndarray:
    """``G[j, k] = <phi| T_GR(x_j, p_k) |psi>`` on the Nyquist band (zero elsewhere)."""
    _same(psi, phi)
    g = psi.grid
    n = g.num_points
    pb = g.p[g.band]
    e = np.exp(2j * np.outer(pb, g.x) / g.hbar)
    cphi = np.conj(phi.amplitudes)
    rev = psi.amplitudes[::-1]
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        # psi(x_{2j - i}) as a function of i
        refl = shifted(rev, n - 1 - 2 * j)
        out[j, g.band] = np.exp(-2j * pb * g.x[j] / g.hbar) * np.sum(e * (cphi * refl)[None, :], axis=1) * g.dx
    return out


def heisenberg_matrix_elements(psi: WaveFunction, phi: WaveFunction) -> np.ndarray:
    """``H[j, k] = <phi| T(x_j, p_k) |psi>`` on the full grid."""
    _same(psi, phi)
    g = psi.grid
    n = g.num_points
    e = np.exp(1j * np.outer(g.p, g.x) / g.hbar)
    cphi = np.conj(phi.amplitudes)
    out = np.empty((n, n), dtype=complex)
    for j in range(n):
        moved = shifted(psi.amplitudes, -(j - n // 2))
        out[j] = np.exp(-1j * g.p * g.x[j] / (2 * g.hbar)) * np.sum(e * (cphi * moved)[None, :], axis=1) * g.dx
    return out


def weak_value_via_gr(
    a, psi: WaveFunction, phi: WaveFunction, force: bool = False, elements: np.ndarray | None = None
) -> WeakValueResult:
    """``(pi hbar)^-1 sum a(x, p) <T_GR(x, p)>_{phi,psi} dx dp``.

    ``elements`` may carry a precomputed :func:`gr_matrix_elements` table.
    """
    ov, div = checked_overlap(psi, phi, force)
    g = psi.grid
    weak = _divide(gr_matrix_elements(psi, phi) if elements is None else elements, ov)
    val = np.sum(symbol_samples(a, g) * weak) * g.dx * g.dp / (np.pi * g.hbar)
    return WeakValueResult(complex(val), ov, "gr_operator", div)


def weak_value_via_heisenberg(
    a, psi: WaveFunction, phi: WaveFunction, force: bool = False, elements: np.ndarray | None = None
) -> WeakValueResult:
    """``(2 pi hbar)^-1 sum F_s a(x, p) <T(x, p)>_{phi,psi} dx dp``.

    Polynomial symbols are tapered beyond the momentum band before the
    symplectic Fourier transform (see :func:`operators.symbol_samples`).
    """
    ov, div = checked_overlap(psi, phi, force)
    g = psi.grid
    vals = symbol_samples(a, g, taper=isinstance(a, PolynomialSymbol))
    fa = symplectic_fourier(PhaseSpaceFunction(g, vals, "symbol")).values
    weak = _divide(heisenberg_matrix_elements(psi, phi) if elements is None else elements, ov)
    val = np.sum(fa * weak) * g.dx * g.dp / (2 * np.pi * g.hbar)
    return WeakValueResult(complex(val), ov, "heisenberg", div)


def all_routes(a, psi: WaveFunction, phi: WaveFunction, force: bool = False) -> dict:
    """Weak value of ``a`` by every route, keyed by route name."""
    return route_table([a], psi, phi, force)[0]


def route_table(symbols, psi: WaveFunction, phi: WaveFunction, force: bool = False) -> list[dict]:
    """:func:`all_routes` for several symbols, sharing the pair-dependent tables."""
    checked_overlap(psi, phi, force)
    w = cross_wigner(psi, phi)
    gr = gr_matrix_elements(psi, phi)
    hw = heisenberg_matrix_elements(psi, phi)
    out = []
    for a in symbols:
        out.append(
            {
                "braket": weak_value_braket(weyl_quantize(a, psi.grid), psi, phi, force),
                "phase_space": weak_value_phase_space(a, psi, phi, force, w=w),
                "gr_operator": weak_value_via_gr(a, psi, phi, force, elements=gr),
                "heisenberg": weak_value_via_heisenberg(a, psi, phi, force, elements=hw),
            }
        )
    return out


def rho(psi: WaveFunction, phi: WaveFunction, force: bool = False) -> PhaseSpaceFunction:
    """Complex quasi-probability ``W_{psi,phi} / <phi|psi>``; integrates to 1."""
    ov, _ = checked_overlap(psi, phi, force)
    w = cross_wigner(psi, phi)
    return PhaseSpaceFunction(w.grid, _divide(w.values, ov), "rho")


def pointer_statistics(a, psi: WaveFunction, phi: WaveFunction, force: bool = False) -> tuple[float, float]:
    """Pointer shift ``(sum Re(a rho), sum Im(a rho))``."""
    r = rho(psi, phi, force)
    g = r.grid
    prod = symbol_samples(a, g) * r.values
    _check_resolved(prod, g)
    return float(np.sum(prod.real) * g.dx * g.dp), float(np.sum(prod.imag) * g.dx * g.dp)


def moyal_average(a, psi: WaveFunction) -> float:
    """``sum a W_psi dx dp``; the expectation of the Weyl operator of ``a``."""
    return phase_space_average(a, wigner(psi)).real


@dataclass(frozen=True)
class SuperpositionReport:
    """Expectation in ``psi + phi`` and the residuals of its decompositions.

    ``value`` is ``<psi+phi|A|psi+phi> / |psi+phi|^2``.  ``residual`` is the
    deviation of ``|psi+phi|^2 value`` from ``<A>_phi + <A>_psi + 2 Re <phi|A|psi>``.
    ``first_power_deviation`` is how far the same right-hand side divided by
    ``|psi+phi|`` (first power) lands from ``value``.  ``wigner_residual``
    compares the phase-space form of the identity when a symbol is given.
    """

    value: float
    norm_squared: float
    residual: float
    first_power_deviation: float
    wigner_residual: float | None = None


def superposition_expectation(
    A: LinearOperator, psi: WaveFunction, phi: WaveFunction, symbol=None
) -> SuperpositionReport:
    _same(psi, phi)
    s = psi + phi
    nsq = s.norm_squared()
    if nsq < 1e-24:
        raise ZeroSum("psi + phi = 0; expectation undefined")
    value = A.matrix_element(s, s).real / nsq
    cross = A.matrix_element(phi, psi)
    rhs = A.matrix_element(phi, phi).real + A.matrix_element(psi, psi).real + 2 * cross.real
    residual = abs(nsq * value - rhs)
    first = abs(rhs / np.sqrt(nsq) - value)
    wres = None
    if symbol is not None:
        w_cross = cross_wigner(psi, phi)
        lhs_w = phase_space_average(symbol, wigner(s))
        rhs_w = (
            phase_space_average(symbol, wigner(phi))
            + phase_space_average(symbol, wigner(psi))
            + 2 * phase_space_average(symbol, w_cross.with_values(w_cross.values.real))
        )
        wres = abs(lhs_w - rhs_w)
    return SuperpositionReport(float(value), float(nsq), float(residual), float(first), wres)
