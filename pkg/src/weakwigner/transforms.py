"""Wigner, cross-Wigner and cross-ambiguity transforms on an ``(x, p)`` grid.

The cross-Wigner quadrature uses y-nodes ``y_m = 2 m dx`` so that ``x_j +- y/2``
are grid points.  With that node spacing the result is periodic in ``p`` with
period ``N dp / 2``; values are therefore kept on the Nyquist band
``|p| < pi hbar / (2 dx)`` (``grid.band``) and set to zero outside it, which
is the momentum-space analogue of zero extension in ``x``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import GridMismatch, KindMismatch
from .grid import DECAY_TOL, SpatialGrid, WaveFunction, _centered_fft, _same, hbar_fourier, shifted

KINDS = ("wigner", "cross_wigner", "ambiguity", "symbol", "rho")
REALITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PhaseSpaceFunction:
    """Samples ``values[j, k] = F(x_j, p_k)`` on the grid's phase space."""

    grid: SpatialGrid
    values: np.ndarray
    kind: str

    def __post_init__(self):
        vals = np.array(self.values, dtype=complex)
        n = self.grid.num_points
        if vals.shape != (n, n):
            raise GridMismatch(f"phase-space shape {vals.shape} does not match grid N = {n}")
        if self.kind not in KINDS:
            raise KindMismatch(f"kind must be one of {KINDS}, got {self.kind!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def p(self) -> np.ndarray:
        return self.grid.p

    def integrate(self) -> complex:
        g = self.grid
        return complex(np.sum(self.values) * g.dx * g.dp)

    def max_imag_ratio(self) -> float:
        re = np.abs(self.values.real).max()
        return float(np.abs(self.values.imag).max() / re) if re else 0.0

    def with_values(self, values: np.ndarray, kind: str | None = None) -> "PhaseSpaceFunction":
        return PhaseSpaceFunction(self.grid, values, kind or self.kind)

    def __add__(self, other: "PhaseSpaceFunction") -> "PhaseSpaceFunction":
        if other.grid != self.grid:
            raise GridMismatch("phase-space functions on different grids")
        return PhaseSpaceFunction(self.grid, self.values + other.values, self.kind)

    def __mul__(self, c: complex) -> "PhaseSpaceFunction":
        return PhaseSpaceFunction(self.grid, c * self.values, self.kind)

    __rmul__ = __mul__


@lru_cache(maxsize=8)
def _y_kernel(grid: SpatialGrid) -> np.ndarray:
    """``K[k, m] = exp(-i p_k y_m / hbar)`` for band momenta, ``y_m = 2 m dx``."""
    n = grid.num_points
    m = np.arange(-n // 2, n // 2)
    # reduce the integer phase mod N before scaling to keep large-m phases accurate
    kk = np.arange(n)[grid.band] - n // 2
    phase = (2 * np.pi / n) * np.mod(2 * np.outer(kk, m), n)
    k = np.exp(-1j * phase)
    k.setflags(write=False)
    return k


def _conj_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``a conj(b)`` with an explicit operation order, so ``b conj(a)`` is its exact conjugate."""
    return (a.real * b.real + a.imag * b.imag) + 1j * (a.imag * b.real - a.real * b.imag)


def _pair_products(psi: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """``G[j, m] = psi(x_{j+m}) conj(phi(x_{j-m}))`` for ``m in [-N/2, N/2)``."""
    n = len(psi)
    j = np.arange(n)[:, None]
    m = np.arange(-n // 2, n // 2)[None, :]
    a, b = j + m, j - m
    ok = (a >= 0) & (a < n) & (b >= 0) & (b < n)
    g = np.zeros((n, n), dtype=complex)
    g[ok] = _conj_product(psi[a[ok]], phi[b[ok]])
    return g


def _check_pair(psi: WaveFunction, phi: WaveFunction, decay_tol: float = DECAY_TOL) -> None:
    _same(psi, phi)
    if psi.domain != "position":
        raise GridMismatch("transforms expect position-domain wavefunctions")
    psi.check_decay(decay_tol)
    phi.check_decay(decay_tol)


def cross_wigner(
    psi: WaveFunction, phi: WaveFunction, method: str = "quadrature", decay_tol: float = DECAY_TOL
) -> PhaseSpaceFunction:
    """Cross-Wigner transform ``W_{psi,phi}(x_j, p_k)``.

    ``(2 pi hbar)^-1 sum_m exp(-i p_k y_m / hbar) psi(x_j + m dx) conj(phi(x_j - m dx)) 2 dx``
    on the Nyquist band, zero elsewhere.  The ``m`` and ``-m`` terms are folded
    before the reduction, which makes ``W_{phi,psi} = conj(W_{psi,phi})`` hold
    bit for bit.  ``method="fft"`` evaluates the same sum
    with an FFT over ``m``.  ``decay_tol`` is the admissible edge/peak ratio.
    """
    _check_pair(psi, phi, decay_tol)
    g = psi.grid
    n = g.num_points
    pref = 2 * g.dx / (2 * np.pi * g.hbar)
    prods = _pair_products(psi.amplitudes, phi.amplitudes)
    out = np.zeros((n, n), dtype=complex)
    if method == "quadrature":
        # Fold m and -m together and keep real arithmetic separate, so that
        # swapping psi and phi conjugates every intermediate exactly.
        h = n // 2
        kern = _y_kernel(g)[:, h + 1 :]
        kr, ki = kern.real.T, kern.imag.T
        gpos, gneg = prods[:, h + 1 :], prods[:, h - 1 : 0 : -1]
        a = gpos + gneg
        b = gpos - gneg
        s_re = a.real @ kr - b.imag @ ki
        s_im = a.imag @ kr + b.real @ ki
        out[:, g.band] = (prods[:, h : h + 1] + (s_re + 1j * s_im)) * pref
    elif method == "fft":
        # sum_m exp(-2 pi i (2 k') m / N) G[j, m]: a length-N DFT sampled at even frequencies
        spec = _centered_fft(prods, axis=1)
        kk = np.arange(n)[g.band] - n // 2
        out[:, g.band] = spec[:, np.mod(2 * kk + n // 2, n)] * pref
    else:
        raise ValueError(f"unknown method {method!r}")
    kind = "wigner" if psi is phi else "cross_wigner"
    return PhaseSpaceFunction(g, out, kind)


def wigner(psi: WaveFunction, method: str = "quadrature") -> PhaseSpaceFunction:
    """Wigner distribution; real up to rounding."""
    w = cross_wigner(psi, psi, method=method)
    return PhaseSpaceFunction(w.grid, w.values, "wigner")


def _require(f: PhaseSpaceFunction, kinds: tuple[str, ...], op: str) -> None:
    if f.kind not in kinds:
        raise KindMismatch(f"{op} requires kind in {kinds}, got {f.kind!r}")


def marginal_p(f: PhaseSpaceFunction) -> np.ndarray:
    """``int F(x, p) dp`` at every ``x_j``."""
    _require(f, ("wigner", "cross_wigner", "rho"), "marginal_p")
    return np.sum(f.values, axis=1) * f.grid.dp


def marginal_x(f: PhaseSpaceFunction) -> np.ndarray:
    """``int F(x, p) dx`` at every ``p_k``."""
    _require(f, ("wigner", "cross_wigner", "rho"), "marginal_x")
    return np.sum(f.values, axis=0) * f.grid.dx


def symplectic_fourier(f: PhaseSpaceFunction, kind: str | None = None) -> PhaseSpaceFunction:
    """Symplectic Fourier transform.

    ``F_s a(x, p) = (2 pi hbar)^-1 sum exp(-i (p x' - x p') / hbar) a(x', p') dx' dp'``,
    i.e. the 2-D hbar-Fourier transform evaluated at ``(p, -x)``.  On the grid
    the prefactor is ``1/N`` and the map is an exact involution.
    """
    g = f.grid
    n = g.num_points
    # x' -> p (forward sign), then p' -> x (inverse sign); result indexed [k, j]
    tmp = _centered_fft(f.values, axis=0)
    tmp = _centered_fft(tmp, axis=1, inverse=True)
    out = tmp.T / n
    if kind is None:
        kind = {"wigner": "ambiguity", "cross_wigner": "ambiguity", "ambiguity": "cross_wigner"}.get(f.kind, f.kind)
    return PhaseSpaceFunction(g, out, kind)


def cross_ambiguity(psi: WaveFunction, phi: WaveFunction) -> PhaseSpaceFunction:
    """Cross-ambiguity function by direct quadrature.

    ``A(x, p) = (2 pi hbar)^-1 int exp(-i p y / hbar) psi(y + x/2) conj(phi(y - x/2)) dy``,
    evaluated after the substitution ``u = y - x/2`` so that all samples fall
    on grid points: ``A = (2 pi hbar)^-1 exp(-i p x / 2 hbar) sum_u exp(-i p u / hbar) psi(u + x) conj(phi(u)) dx``.
    """
    _check_pair(psi, phi)
    g = psi.grid
    n = g.num_points
    e = np.exp(-1j * np.outer(g.p, g.x) / g.hbar)
    pref = g.dx / (2 * np.pi * g.hbar)
    cphi = np.conj(phi.amplitudes)
    out = np.empty((n, n), dtype=complex)
    for j in range(n):
        prod = shifted(psi.amplitudes, j - n // 2) * cphi
        out[j] = np.exp(-1j * g.p * g.x[j] / (2 * g.hbar)) * np.sum(e * prod[None, :], axis=1) * pref
    return PhaseSpaceFunction(g, out, "ambiguity")


def superposition_identity_check(psi: WaveFunction, phi: WaveFunction) -> float:
    """Sup-norm of ``W_{psi+phi} - W_phi - W_psi - 2 Re W_{psi,phi}``."""
    _same(psi, phi)
    total = wigner(psi + phi).values
    resid = total - wigner(phi).values - wigner(psi).values - 2 * cross_wigner(psi, phi).values.real
    return float(np.abs(resid).max())


def sample_function(grid: SpatialGrid, fn, kind: str = "symbol") -> PhaseSpaceFunction:
    """Evaluate ``fn(X, P)`` on the full phase-space grid."""
    xx, pp = np.meshgrid(grid.x, grid.p, indexing="ij")
    vals = np.broadcast_to(np.asarray(fn(xx, pp), dtype=complex), (grid.n, grid.n))
    return PhaseSpaceFunction(grid, vals, kind)


def analytic_ground_wigner(grid: SpatialGrid) -> np.ndarray:
    """``(pi hbar)^-1 exp(-(x^2 + p^2)/hbar)`` sampled on the grid."""
    xx, pp = np.meshgrid(grid.x, grid.p, indexing="ij")
    return np.exp(-(xx**2 + pp**2) / grid.hbar) / (np.pi * grid.hbar)


def momentum_marginal_target(psi: WaveFunction, phi: WaveFunction) -> np.ndarray:
    """``psi_hat(p) conj(phi_hat(p))``."""
    return hbar_fourier(psi).amplitudes * np.conj(hbar_fourier(phi).amplitudes)
