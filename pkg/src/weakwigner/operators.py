"""Dense grid operators: displacements, reflections and Weyl quantisation.

Matrices act on amplitude vectors, ``(A psi)_j = sum_k M[j, k] psi_k``.
``x`` is diagonal and ``p`` is diagonal in the momentum representation
(spectral, exact for band-limited states).  Displacements and reflections are
zero-extended, so on the grid they are partial isometries: norm-preserving on
every state that decays before reaching the edge.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np

from .errors import AliasedSymbol, BoundaryLeak, GridMismatch, OffGrid, OffGridReflection, OffGridShift
from .grid import SpatialGrid, WaveFunction, _centered_fft, _same, shifted
from .states import hermite_basis
from .symbolic import PolynomialSymbol
from .transforms import PhaseSpaceFunction, symplectic_fourier

# largest admissible |c| max|x|^r max|p|^s before the matrix loses double-precision resolution
DYNAMIC_RANGE = 1e13
TAPER_FACTOR = 1.5
TAPER_ORDER = 16


@dataclass(frozen=True, eq=False)
class LinearOperator:
    grid: SpatialGrid
    matrix: np.ndarray
    unitary: bool = False
    label: str = ""

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = self.grid.num_points
        if m.shape != (n, n):
            raise GridMismatch(f"operator shape {m.shape} does not match grid N = {n}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def apply(self, psi: WaveFunction) -> WaveFunction:
        if psi.grid != self.grid:
            raise GridMismatch("operator and state live on different grids")
        return WaveFunction(self.grid, self.matrix @ psi.amplitudes)

    def __matmul__(self, other):
        if isinstance(other, WaveFunction):
            return self.apply(other)
        if other.grid != self.grid:
            raise GridMismatch("operators live on different grids")
        return LinearOperator(self.grid, self.matrix @ other.matrix, self.unitary and other.unitary)

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.grid, self.matrix + other.matrix)

    def __sub__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.grid, self.matrix - other.matrix)

    def __mul__(self, c: complex) -> "LinearOperator":
        return LinearOperator(self.grid, c * self.matrix)

    __rmul__ = __mul__

    @property
    def adjoint(self) -> "LinearOperator":
        return LinearOperator(self.grid, self.matrix.conj().T, self.unitary)

    def matrix_element(self, phi: WaveFunction, psi: WaveFunction) -> complex:
        """``<phi|A|psi>``."""
        _same(phi, psi)
        return complex(np.sum(np.conj(phi.amplitudes) * (self.matrix @ psi.amplitudes)) * self.grid.dx)

    def hermiticity_defect(self) -> float:
        return float(np.abs(self.matrix - self.matrix.conj().T).max())

    def unitarity_defect(self) -> float:
        """``max |(M^H M - I)[S, S]|`` over the columns ``S`` mapped into the grid."""
        m = self.matrix
        cols = np.flatnonzero(np.any(m != 0, axis=0))
        g = m[:, cols].conj().T @ m[:, cols]
        return float(np.abs(g - np.eye(len(cols))).max())

    def compress(self, kmax: int = 9) -> np.ndarray:
        """Matrix in the span of the Hermite functions ``0..kmax``.

        Grid operators built by different quadratures differ in their
        unresolved (near-Nyquist, near-edge) corners; this compression is how
        they are compared on the well-resolved interior.
        """
        b = hermite_basis(kmax, self.grid)
        return b.conj().T @ self.matrix @ b


def _shift_index(x0: float, grid: SpatialGrid) -> int:
    s = x0 / grid.dx
    sr = round(s)
    if abs(s - sr) > 1e-9 * max(1.0, abs(s)):
        raise OffGridShift(f"x0 must be a multiple of dx = {grid.dx:g}, got {x0!r}")
    return int(sr)


def _reflection_index(x0: float, grid: SpatialGrid) -> int:
    # x_l = 2 x0 - x_i  <=>  l = c - i with c = 2 (x0 - x_min) / dx
    c = 2 * (x0 - grid.x_min) / grid.dx
    cr = round(c)
    if abs(c - cr) > 1e-9 * max(1.0, abs(c)):
        raise OffGridReflection(f"x0 must be a multiple of dx/2 = {grid.dx / 2:g} on the grid, got {x0!r}")
    return int(cr)


def heisenberg_apply(x0: float, p0: float, psi: WaveFunction) -> WaveFunction:
    """``(T(x0, p0) psi)(x) = exp(i (p0 x - p0 x0 / 2) / hbar) psi(x - x0)``."""
    g = psi.grid
    s = _shift_index(x0, g)
    phase = np.exp(1j * (p0 * g.x - p0 * x0 / 2) / g.hbar)
    return WaveFunction(g, phase * shifted(psi.amplitudes, -s))


def heisenberg(x0: float, p0: float, grid: SpatialGrid) -> LinearOperator:
    """Heisenberg displacement operator as a matrix."""
    s = _shift_index(x0, grid)
    n = grid.num_points
    m = np.zeros((n, n), dtype=complex)
    i = np.arange(n)
    ok = (i - s >= 0) & (i - s < n)
    m[i[ok], i[ok] - s] = np.exp(1j * (p0 * grid.x[ok] - p0 * x0 / 2) / grid.hbar)
    return LinearOperator(grid, m, unitary=True, label=f"T({x0:g},{p0:g})")


def grossmann_royer_apply(x0: float, p0: float, psi: WaveFunction) -> WaveFunction:
    """``(T_GR(x0, p0) psi)(x) = exp(2 i p0 (x - x0) / hbar) psi(2 x0 - x)``."""
    g = psi.grid
    c = _reflection_index(x0, g)
    n = g.num_points
    i = np.arange(n)
    l = c - i
    ok = (l >= 0) & (l < n)
    out = np.zeros(n, dtype=complex)
    out[ok] = np.exp(2j * p0 * (g.x[ok] - x0) / g.hbar) * psi.amplitudes[l[ok]]
    return WaveFunction(g, out)


def grossmann_royer(x0: float, p0: float, grid: SpatialGrid) -> LinearOperator:
    """Grossmann-Royer reflection (displaced parity) operator as a matrix."""
    c = _reflection_index(x0, grid)
    n = grid.num_points
    i = np.arange(n)
    l = c - i
    ok = (l >= 0) & (l < n)
    m = np.zeros((n, n), dtype=complex)
    m[i[ok], l[ok]] = np.exp(2j * p0 * (grid.x[ok] - x0) / grid.hbar)
    return LinearOperator(grid, m, unitary=True, label=f"T_GR({x0:g},{p0:g})")


def parity(grid: SpatialGrid) -> LinearOperator:
    """``psi(x) -> psi(-x)``."""
    return grossmann_royer(0.0, 0.0, grid)


def cross_wigner_via_gr(psi: WaveFunction, phi: WaveFunction) -> PhaseSpaceFunction:
    """``W_{psi,phi}(x, p) = (pi hbar)^-1 <T_GR(x, p) phi | psi>`` on the Nyquist band."""
    _same(psi, phi)
    g = psi.grid
    n = g.num_points
    pb = g.p[g.band]
    e = np.exp(-2j * np.outer(pb, g.x) / g.hbar)
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        # reflection of phi about x_j; the momentum phase is applied for all band p at once
        refl = grossmann_royer_apply(g.x[j], 0.0, phi).amplitudes
        amp = np.sum(e * (np.conj(refl) * psi.amplitudes)[None, :], axis=1)
        out[j, g.band] = np.exp(2j * pb * g.x[j] / g.hbar) * amp * g.dx / (np.pi * g.hbar)
    return PhaseSpaceFunction(g, out, "cross_wigner")


@lru_cache(maxsize=8)
def _dft_matrix(grid: SpatialGrid) -> np.ndarray:
    f = _centered_fft(np.eye(grid.num_points), axis=0) / np.sqrt(grid.num_points)
    f.setflags(write=False)
    return f


def position_power(r: int, grid: SpatialGrid) -> np.ndarray:
    return np.diag(grid.x.astype(complex) ** r)


def momentum_power(s: int, grid: SpatialGrid) -> np.ndarray:
    f = _dft_matrix(grid)
    return f.conj().T @ (grid.p[:, None] ** s * f)


def position_operator(grid: SpatialGrid) -> LinearOperator:
    return LinearOperator(grid, position_power(1, grid), label="x")


def momentum_operator(grid: SpatialGrid) -> LinearOperator:
    return LinearOperator(grid, momentum_power(1, grid), label="p")


def identity(grid: SpatialGrid) -> LinearOperator:
    return LinearOperator(grid, np.eye(grid.num_points), unitary=True, label="1")


def _check_range(a: PolynomialSymbol, grid: SpatialGrid) -> None:
    xm = np.abs(grid.x).max()
    pm = np.abs(grid.p).max()
    for (r, s), c in a.terms.items():
        size = abs(c) * xm**r * pm**s
        if size > DYNAMIC_RANGE:
            raise AliasedSymbol(
                f"grid does not resolve x^{r} p^{s}: |c| max|x|^r max|p|^s = {size:.2e} > {DYNAMIC_RANGE:g}"
            )


def weyl_quantize(a: PolynomialSymbol, grid: SpatialGrid) -> LinearOperator:
    """Weyl quantisation of a polynomial symbol, monomial by monomial.

    Each ``c x^r p^s`` is realised as ``c 2^-s sum_k C(s, k) p^(s-k) x^r p^k``
    with grid matrices; this form is Hermitian for real ``c``.
    """
    _check_range(a, grid)
    n = grid.num_points
    m = np.zeros((n, n), dtype=complex)
    pcache: dict[int, np.ndarray] = {}

    def pw(s):
        if s not in pcache:
            pcache[s] = momentum_power(s, grid) if s else np.eye(n)
        return pcache[s]

    for (r, s), c in a.terms.items():
        xr = grid.x.astype(complex) ** r
        acc = np.zeros((n, n), dtype=complex)
        for k in range(s + 1):
            acc += comb(s, k) * (pw(s - k) * xr[None, :]) @ pw(k)
        m += c * acc / 2**s
    return LinearOperator(grid, m, label=a.text())


def momentum_taper(grid: SpatialGrid) -> np.ndarray:
    """Smooth cut-off ``exp(-(p / (1.5 p_band))^16)``; equals 1 to 1e-9 for ``|p| < 0.4 p_band``."""
    return np.exp(-((grid.p / (TAPER_FACTOR * grid.p_band)) ** TAPER_ORDER))


def symbol_samples(a, grid: SpatialGrid, taper: bool = False) -> np.ndarray:
    """Grid samples ``a(x_j, p_k)`` of a polynomial symbol or phase-space function.

    With ``taper`` the samples are multiplied by :func:`momentum_taper`; this
    removes the jump that an unbounded symbol has across the periodic edge of
    the momentum grid, which the discrete symplectic Fourier transform sees.
    """
    if isinstance(a, PolynomialSymbol):
        xx, pp = np.meshgrid(grid.x, grid.p, indexing="ij")
        vals = a(xx, pp)
    elif isinstance(a, PhaseSpaceFunction):
        if a.grid != grid:
            raise GridMismatch("symbol and grid differ")
        vals = np.array(a.values)
    else:
        raise TypeError(f"expected PolynomialSymbol or PhaseSpaceFunction, got {type(a).__name__}")
    if not np.all(np.isfinite(vals)):
        raise AliasedSymbol("symbol samples are not finite on the grid")
    if taper:
        vals = vals * momentum_taper(grid)[None, :]
    return vals


def _check_symbol_decay(vals: np.ndarray, grid: SpatialGrid, tol: float | None) -> None:
    if tol is None:
        return
    b = grid.band
    inner = vals[:, b]
    peak = np.abs(inner).max()
    edge = max(np.abs(inner[0]).max(), np.abs(inner[-1]).max(), np.abs(inner[:, 0]).max(), np.abs(inner[:, -1]).max())
    if peak and edge / peak > tol:
        raise BoundaryLeak(f"symbol does not decay at the phase-space boundary: edge/peak = {edge / peak:.3e} > {tol:g}")


def operator_from_symbol_gr(a, grid: SpatialGrid, decay_tol: float | None = None) -> LinearOperator:
    """``A = (pi hbar)^-1 sum a(x, p) T_GR(x, p) dx dp`` over the Nyquist band.

    ``decay_tol`` (edge/peak ratio) enables the integrability check that raises
    :class:`BoundaryLeak`.
    """
    vals = symbol_samples(a, grid)
    _check_symbol_decay(vals, grid, decay_tol)
    n = grid.num_points
    pb = grid.p[grid.band]
    e = np.exp(2j * np.outer(grid.x, pb) / grid.hbar)
    w = grid.dx * grid.dp / (np.pi * grid.hbar)
    m = np.zeros((n, n), dtype=complex)
    i = np.arange(n)
    for j in range(n):
        # T_GR(x_j, p) has entries exp(2 i p (x_i - x_j)/hbar) at (i, 2j - i)
        col = e @ (vals[j, grid.band] * np.exp(-2j * pb * grid.x[j] / grid.hbar)) * w
        l = 2 * j - i
        ok = (l >= 0) & (l < n)
        m[i[ok], l[ok]] += col[ok]
    return LinearOperator(grid, m, label="A_gr")


def operator_from_symbol_heisenberg(a, grid: SpatialGrid, decay_tol: float | None = None) -> LinearOperator:
    """``A = (2 pi hbar)^-1 sum F_s a(x, p) T(x, p) dx dp`` over the full grid."""
    vals = symbol_samples(a, grid, taper=isinstance(a, PolynomialSymbol))
    _check_symbol_decay(vals, grid, decay_tol)
    fa = symplectic_fourier(PhaseSpaceFunction(grid, vals, "symbol")).values
    n = grid.num_points
    e = np.exp(1j * np.outer(grid.x, grid.p) / grid.hbar)
    w = grid.dx * grid.dp / (2 * np.pi * grid.hbar)
    m = np.zeros((n, n), dtype=complex)
    i = np.arange(n)
    for j in range(n):
        s = j - n // 2
        # T(x_j, p) has entries exp(i p (x_i - x_j/2)/hbar) at (i, i - s)
        col = e @ (fa[j] * np.exp(-1j * grid.p * grid.x[j] / (2 * grid.hbar))) * w
        l = i - s
        ok = (l >= 0) & (l < n)
        m[i[ok], l[ok]] += col[ok]
    return LinearOperator(grid, m, label="A_heisenberg")


def projector_x(x0: float, grid: SpatialGrid) -> LinearOperator:
    """Position projector ``|x0><x0|`` on the grid.

    Realised as ``M[j0, j0] = 1/dx`` so that ``<phi|P|psi> = conj(phi(x0)) psi(x0)``
    and ``sum_j P(x_j) dx = 1``.
    """
    j0 = grid.index_of(x0)
    if j0 is None:
        raise OffGrid(f"x0 = {x0!r} is not a grid point")
    m = np.zeros((grid.num_points, grid.num_points), dtype=complex)
    m[j0, j0] = 1.0 / grid.dx
    return LinearOperator(grid, m, label=f"Pi({x0:g})")


def rank_one(psi: WaveFunction) -> LinearOperator:
    """``|psi><psi|``."""
    a = psi.amplitudes
    return LinearOperator(psi.grid, np.outer(a, np.conj(a)) * psi.grid.dx, label="projector")
