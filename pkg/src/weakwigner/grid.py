"""Uniform position/momentum grids, wavefunctions and the unitary hbar-Fourier transform.

Conventions
-----------
Position nodes are ``x_j = (j - N/2) dx`` and momentum nodes are
``p_k = (k - N/2) dp`` with ``dp = 2 pi hbar / (N dx)``.  Functions are
zero-extended outside ``[x_0, x_{N-1}]``.  Integrals are Riemann sums with
weight ``dx`` (resp. ``dp``); reductions go through ``numpy.sum`` which uses
pairwise summation, so results do not depend on thread count.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import BoundaryLeak, GridMismatch, InvalidGrid

DECAY_TOL = 1e-8
NORM_TOL = 1e-9


@dataclass(frozen=True)
class SpatialGrid:
    """Symmetric uniform grid together with its conjugate momentum grid."""

    num_points: int
    x_min: float
    dx: float
    hbar: float = 1.0

    def __post_init__(self):
        if int(self.num_points) != self.num_points or self.num_points < 8:
            raise InvalidGrid(f"num_points >= 8 required, got {self.num_points}")
        if self.num_points % 2:
            raise InvalidGrid(f"num_points must be even, got {self.num_points}")
        if not self.dx > 0:
            raise InvalidGrid(f"dx > 0 required, got {self.dx}")
        if not self.hbar > 0:
            raise InvalidGrid(f"hbar > 0 required, got {self.hbar}")

    @property
    def n(self) -> int:
        return self.num_points

    @property
    def extent(self) -> float:
        return self.num_points * self.dx

    @property
    def dp(self) -> float:
        return 2 * np.pi * self.hbar / (self.num_points * self.dx)

    @cached_property
    def x(self) -> np.ndarray:
        return self.x_min + np.arange(self.num_points) * self.dx

    @cached_property
    def p(self) -> np.ndarray:
        return (np.arange(self.num_points) - self.num_points // 2) * self.dp

    @property
    def band(self) -> slice:
        """Momentum indices of the Nyquist band ``|p| < pi hbar / (2 dx)``.

        Phase-space quadratures whose y-nodes are spaced ``2 dx`` (the
        cross-Wigner transform, Grossmann-Royer matrix elements) are periodic
        in ``p`` with period ``N dp / 2``; this band is one period centred on
        the origin.
        """
        n = self.num_points
        return slice(n // 4, n // 4 + n // 2)

    @property
    def band_mask(self) -> np.ndarray:
        mask = np.zeros(self.num_points, dtype=bool)
        mask[self.band] = True
        return mask

    @property
    def p_band(self) -> float:
        return np.pi * self.hbar / (2 * self.dx)

    def index_of(self, x0: float, *, step: float | None = None, tol: float = 1e-9) -> int | None:
        """Index ``j`` with ``x_j == x0`` (within ``tol * dx``), else None."""
        step = self.dx if step is None else step
        j = (x0 - self.x_min) / step
        jr = round(j)
        if abs(j - jr) > tol or not 0 <= jr < round(self.extent / step):
            return None
        return int(jr)

    def momentum_index_of(self, p0: float, tol: float = 1e-9) -> int | None:
        k = p0 / self.dp + self.num_points // 2
        kr = round(k)
        if abs(k - kr) > tol or not 0 <= kr < self.num_points:
            return None
        return int(kr)

    def to_dict(self) -> dict:
        return {"n_points": self.num_points, "extent": self.extent, "hbar": self.hbar}


def make_grid(num_points: int, x_extent: float, hbar: float = 1.0) -> SpatialGrid:
    """Symmetric grid on ``[-x_extent/2, x_extent/2)`` with ``dx = x_extent / N``.

    >>> g = make_grid(8, 8.0, 1.0)
    >>> g.x.tolist()
    [-4.0, -3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0]
    """
    if not x_extent > 0:
        raise InvalidGrid(f"x_extent > 0 required, got {x_extent}")
    if not hbar > 0:
        raise InvalidGrid(f"hbar > 0 required, got {hbar}")
    if int(num_points) != num_points or num_points < 8:
        raise InvalidGrid(f"num_points >= 8 required, got {num_points}")
    num_points = int(num_points)
    dx = x_extent / num_points
    return SpatialGrid(num_points, -(num_points // 2) * dx, dx, float(hbar))


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Complex amplitudes on a grid.

    ``domain`` is ``"position"`` (samples at ``grid.x``) or ``"momentum"``
    (samples at ``grid.p``, as returned by :func:`hbar_fourier`).
    """

    grid: SpatialGrid
    amplitudes: np.ndarray
    normalized: bool = False
    domain: str = "position"
    label: str = field(default="", compare=False)

    def __post_init__(self):
        amp = np.array(self.amplitudes, dtype=complex)
        if amp.shape != (self.grid.num_points,):
            raise GridMismatch(
                f"length(amplitudes) = grid.num_points violated: {amp.shape} vs {self.grid.num_points}"
            )
        amp.setflags(write=False)
        object.__setattr__(self, "amplitudes", amp)
        if self.normalized:
            err = abs(self.norm_squared() - 1.0)
            if err > NORM_TOL:
                raise ValueError(f"normalized flag set but |norm^2 - 1| = {err:.3e}")

    @property
    def weight(self) -> float:
        return self.grid.dx if self.domain == "position" else self.grid.dp

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.x if self.domain == "position" else self.grid.p

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.weight)

    def norm(self) -> float:
        return float(np.sqrt(self.norm_squared()))

    def normalize(self) -> "WaveFunction":
        return WaveFunction(self.grid, self.amplitudes / self.norm(), True, self.domain, self.label)

    def boundary_ratio(self) -> float:
        a = np.abs(self.amplitudes)
        peak = a.max()
        if peak == 0:
            return 0.0
        return float(max(a[0], a[-1]) / peak)

    def check_decay(self, tol: float = DECAY_TOL) -> None:
        r = self.boundary_ratio()
        if r > tol:
            name = self.label or "state"
            raise BoundaryLeak(f"boundary-decay invariant violated for {name}: edge/peak = {r:.3e} > {tol:g}")

    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        _same(self, other)
        return WaveFunction(self.grid, self.amplitudes + other.amplitudes, domain=self.domain)

    def __mul__(self, c: complex) -> "WaveFunction":
        return WaveFunction(self.grid, c * self.amplitudes, domain=self.domain)

    __rmul__ = __mul__


def _same(a: WaveFunction, b: WaveFunction) -> None:
    if a.grid != b.grid:
        raise GridMismatch(f"states live on different grids: {a.grid} vs {b.grid}")
    if a.domain != b.domain:
        raise GridMismatch(f"states live in different domains: {a.domain} vs {b.domain}")


def inner_product(phi: WaveFunction, psi: WaveFunction) -> complex:
    """Discrete ``<phi|psi> = sum_j conj(phi_j) psi_j dx`` (antilinear in ``phi``)."""
    _same(phi, psi)
    return complex(np.sum(np.conj(phi.amplitudes) * psi.amplitudes) * phi.weight)


def _centered_fft(a: np.ndarray, axis: int = -1, inverse: bool = False) -> np.ndarray:
    """DFT with both index ranges centred on zero, unnormalised.

    Computes ``sum_j exp(-+2 pi i (k - N/2)(j - N/2) / N) a_j`` (minus sign for
    the forward transform).  ``N`` must be even.
    """
    a = np.fft.ifftshift(a, axes=axis)
    if inverse:
        out = np.fft.ifft(a, axis=axis, norm="forward")
    else:
        out = np.fft.fft(a, axis=axis)
    return np.fft.fftshift(out, axes=axis)


def hbar_fourier(psi: WaveFunction, check: bool = True) -> WaveFunction:
    """Unitary hbar-Fourier transform sampled at the momentum nodes.

    ``psi_hat(p_k) = (2 pi hbar)^(-1/2) sum_j exp(-i p_k x_j / hbar) psi(x_j) dx``.
    Since ``dx dp N = 2 pi hbar`` this is an exactly unitary map between the
    position and momentum samples.
    """
    if psi.domain != "position":
        raise GridMismatch("hbar_fourier expects a position-domain wavefunction")
    if check:
        psi.check_decay()
    g = psi.grid
    amp = _centered_fft(psi.amplitudes) * (g.dx / np.sqrt(2 * np.pi * g.hbar))
    return WaveFunction(g, amp, domain="momentum", label=psi.label)


def inverse_hbar_fourier(psi_hat: WaveFunction) -> WaveFunction:
    if psi_hat.domain != "momentum":
        raise GridMismatch("inverse_hbar_fourier expects a momentum-domain wavefunction")
    g = psi_hat.grid
    amp = _centered_fft(psi_hat.amplitudes, inverse=True) * (g.dp / np.sqrt(2 * np.pi * g.hbar))
    return WaveFunction(g, amp, domain="position", label=psi_hat.label)


def shifted(values: np.ndarray, offset: int) -> np.ndarray:
    """``out[j] = values[j + offset]`` with zero extension."""
    n = len(values)
    out = np.zeros(n, dtype=complex)
    if abs(offset) >= n:
        return out
    if offset >= 0:
        out[: n - offset] = values[offset:]
    else:
        out[-offset:] = values[: n + offset]
    return out
