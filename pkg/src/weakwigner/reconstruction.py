"""Wavefunction reconstruction from weak values and cross-Wigner data.

Three procedures:

``lundeen``
    scan weak values of the position projector post-selected on a momentum
    eigenstate ``|p0>``; the pre-selected state only enters through a
    :class:`WeakValueOracle`.
``fourier_inversion``
    invert the momentum Fourier transform of ``W`` along lines through a
    reference point ``x_ref``.
``gr_auxiliary``
    integrate ``W`` against Grossmann-Royer reflections of an arbitrary
    auxiliary state ``Lambda`` with ``<Phi|Lambda> != 0``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import GridMismatch, KindMismatch, NodeParity, OffGrid, OrthogonalAuxiliary, SmallMomentumAmplitude
from .grid import SpatialGrid, WaveFunction, inner_product, shifted
from .operators import projector_x
from .transforms import PhaseSpaceFunction
from .weakvalues import weak_value_braket

MOMENTUM_AMPLITUDE_EPS = 1e-8
AUX_OVERLAP_EPS = 1e-8


def fidelity(reference: WaveFunction, candidate: WaveFunction) -> tuple[float, complex]:
    """``|<ref|cand>| / (|ref| |cand|)`` and the unit phase of ``<ref|cand>``."""
    ov = inner_product(reference, candidate)
    f = abs(ov) / (reference.norm() * candidate.norm())
    phase = ov / abs(ov) if abs(ov) else 1.0 + 0j
    return float(f), complex(phase)


@dataclass(frozen=True)
class ReconstructionReport:
    reconstructed: WaveFunction
    method: str
    fidelity: float | None = None
    global_phase: complex | None = None
    up_to_constant: bool = False

    def to_json(self) -> dict:
        d = {"method": self.method, "up_to_constant": self.up_to_constant}
        d["fidelity"] = self.fidelity
        d["global_phase"] = None if self.global_phase is None else [self.global_phase.real, self.global_phase.imag]
        return d


def _report(rec: WaveFunction, method: str, reference: WaveFunction | None, up_to_constant: bool) -> ReconstructionReport:
    if reference is None:
        return ReconstructionReport(rec, method, up_to_constant=up_to_constant)
    f, ph = fidelity(reference, rec)
    return ReconstructionReport(rec, method, f, ph, up_to_constant)


def plane_wave(p0: float, grid: SpatialGrid) -> WaveFunction:
    """Momentum eigenstate ``(2 pi hbar)^-1/2 exp(i p0 x / hbar)`` (delta-normalised)."""
    amp = np.exp(1j * p0 * grid.x / grid.hbar) / np.sqrt(2 * np.pi * grid.hbar)
    return WaveFunction(grid, amp, label=f"|p={p0:g}>")


class WeakValueOracle:
    """Black box answering ``x0 -> <Pi_x0>_{p0, psi}`` for a hidden state.

    Post-selection succeeds with amplitude ``<p0|psi> = psi_hat(p0)``; the
    oracle refuses to run when that amplitude is below ``1e-8``, as the
    weak values are then undefined.
    """

    def __init__(self, psi: WaveFunction, p0: float):
        g = psi.grid
        k = g.momentum_index_of(p0)
        if k is None:
            raise OffGrid(f"p0 = {p0!r} is not a momentum grid point (dp = {g.dp:g})")
        self.grid = g
        self.p0 = float(g.p[k])
        self.__psi = psi
        self.__post = plane_wave(self.p0, g)
        amp = inner_product(self.__post, psi)
        if abs(amp) < MOMENTUM_AMPLITUDE_EPS:
            raise SmallMomentumAmplitude(
                f"|psi_hat(p0)| >= {MOMENTUM_AMPLITUDE_EPS:g} violated at p0 = {self.p0:g}: |psi_hat(p0)| = {abs(amp):.3e}"
            )
        self.calls = 0

    def __call__(self, x0: float) -> complex:
        self.calls += 1
        return weak_value_braket(projector_x(x0, self.grid), self.__psi, self.__post).value


def nearest_momentum(p: float, grid: SpatialGrid) -> float:
    return float(grid.p[np.argmin(np.abs(grid.p - p))])


def lundeen_reconstruct(
    oracle: WeakValueOracle, k: complex | None = None, reference: WaveFunction | None = None
) -> ReconstructionReport:
    """Scan the weak-value oracle over every grid point.

    ``psi(x) = k exp(i p0 x / hbar) <Pi_x>`` with ``k = (2 pi hbar)^(1/2) psi_hat(p0)``.
    Without ``k`` the profile is normalised and determined up to a global
    phase (``up_to_constant``).  ``reference`` is used for the fidelity only.
    """
    g = oracle.grid
    wv = np.array([oracle(x0) for x0 in g.x])
    prof = np.exp(1j * oracle.p0 * g.x / g.hbar) * wv
    if k is not None:
        rec = WaveFunction(g, k * prof, label="lundeen")
        return _report(rec, "lundeen", reference, False)
    rec = WaveFunction(g, prof, label="lundeen").normalize()
    return _report(rec, "lundeen", reference, True)


def _grid_index(x0: float, grid: SpatialGrid) -> int:
    j = grid.index_of(x0)
    if j is None:
        raise OffGrid(f"x_ref = {x0!r} is not a grid point")
    return j


def invert_cross_wigner(
    W: PhaseSpaceFunction, x_ref: float, x: float | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """``psi(x) conj(phi(x_ref)) = sum_p exp(i p (x - x_ref)/hbar) W((x + x_ref)/2, p) dp``.

    Evaluated at every grid ``x`` whose index has the parity of ``x_ref`` (so
    the midpoint is a grid node).  Returns ``(x_nodes, values)``; passing a
    single ``x`` returns just that node and raises :class:`NodeParity` if it is
    not admissible.
    """
    if W.kind not in ("wigner", "cross_wigner"):
        raise KindMismatch(f"invert_cross_wigner requires a (cross-)Wigner function, got {W.kind!r}")
    g = W.grid
    r = _grid_index(x_ref, g)
    if x is not None:
        i = _grid_index(x, g)
        if (i - r) % 2:
            raise NodeParity(f"x and x_ref must have grid indices of equal parity: {i} vs {r}")
        idx = np.array([i])
    else:
        idx = np.arange(r % 2, g.num_points, 2)
    pb = g.p[g.band]
    mids = (idx + r) // 2
    phase = np.exp(1j * np.outer(g.x[idx] - g.x[r], pb) / g.hbar)
    vals = np.sum(phase * W.values[mids][:, g.band], axis=1) * g.dp
    return g.x[idx], vals


def reconstruct_by_inversion(
    W: PhaseSpaceFunction, phi: WaveFunction | None = None, reference: WaveFunction | None = None
) -> ReconstructionReport:
    """Full state from ``W`` by Fourier inversion on both index sublattices.

    With the post-selected ``phi`` known, each sublattice is divided by
    ``conj(phi(x_ref))`` and the result is exact.  For a diagonal Wigner
    function (``phi`` unknown) each sublattice is fixed up to its own phase;
    the odd sublattice phase is then matched to the even one by a
    least-squares fit against the neighbour average, and the result is
    normalised (``up_to_constant``).
    """
    g = W.grid
    n = g.num_points
    out = np.zeros(n, dtype=complex)
    if phi is not None:
        if phi.grid != g:
            raise GridMismatch("W and phi live on different grids")
        for parity in (0, 1):
            cand = np.arange(parity, n, 2)
            r = cand[np.argmax(np.abs(phi.amplitudes[cand]))]
            xs, vals = invert_cross_wigner(W, g.x[r])
            out[parity::2] = vals / np.conj(phi.amplitudes[r])
        return _report(WaveFunction(g, out, label="inversion"), "fourier_inversion", reference, False)
    if W.kind != "wigner":
        raise KindMismatch("inversion without phi needs a diagonal Wigner function")
    dens = np.real(np.sum(W.values, axis=1) * g.dp)
    for parity in (0, 1):
        cand = np.arange(parity, n, 2)
        r = cand[np.argmax(dens[cand])]
        _, vals = invert_cross_wigner(W, g.x[r])
        out[parity::2] = vals / np.sqrt(max(dens[r], 1e-300))
    even = out[0::2]
    odd = out[1::2]
    neigh = 0.5 * (even + np.roll(even, -1))
    c = np.vdot(odd, neigh)
    if abs(c):
        out[1::2] = odd * (c / abs(c))
    rec = WaveFunction(g, out, label="inversion").normalize()
    return _report(rec, "fourier_inversion", reference, True)


def _gr_accumulate(values: np.ndarray, lam: WaveFunction) -> np.ndarray:
    """``2 sum_{y,p} F(y, p) [T_GR(y, p) lam](x) dy dp`` for every grid ``x``.

    Loops over ``y`` (rows of ``F``) and accumulates the reflected, phased
    auxiliary state onto the output in a fixed order.
    """
    g = lam.grid
    n = g.num_points
    pb = g.p[g.band]
    e = np.exp(2j * np.outer(g.x, pb) / g.hbar)
    rev = lam.amplitudes[::-1]
    out = np.zeros(n, dtype=complex)
    for j in range(n):
        row = values[j, g.band]
        if not row.any():
            continue
        kern = e @ (row * np.exp(-2j * pb * g.x[j] / g.hbar))
        # lam(2 y_j - x_i) as a function of i
        out += kern * shifted(rev, n - 1 - 2 * j)
    return 2 * out * g.dx * g.dp


def _check_aux(lam: WaveFunction, overlap_phi_lambda: complex | None) -> None:
    lam.check_decay()
    if overlap_phi_lambda is not None and abs(overlap_phi_lambda) < AUX_OVERLAP_EPS:
        raise OrthogonalAuxiliary(
            f"|<phi|lambda>| >= {AUX_OVERLAP_EPS:g} violated: |<phi|lambda>| = {abs(overlap_phi_lambda):.3e}"
        )


def gr_reconstruct(
    W: PhaseSpaceFunction,
    lam: WaveFunction,
    overlap_phi_lambda: complex | None = None,
    reference: WaveFunction | None = None,
) -> ReconstructionReport:
    """``psi(x) = 2 <phi|lambda>^-1 sum W_{psi,phi}(y, p) [T_GR(y, p) lam](x) dy dp``.

    Given the true ``<phi|lambda>`` the recovery is exact; without it the
    normalised profile is returned and flagged ``up_to_constant``.
    """
    if W.kind not in ("wigner", "cross_wigner"):
        raise KindMismatch(f"gr_reconstruct requires a (cross-)Wigner function, got {W.kind!r}")
    if W.grid != lam.grid:
        raise GridMismatch("W and lambda live on different grids")
    _check_aux(lam, overlap_phi_lambda)
    prof = _gr_accumulate(W.values, lam)
    if overlap_phi_lambda is None:
        rec = WaveFunction(lam.grid, prof, label="gr").normalize()
        return _report(rec, "gr_auxiliary", reference, True)
    rec = WaveFunction(lam.grid, prof / overlap_phi_lambda, label="gr")
    return _report(rec, "gr_auxiliary", reference, False)


def gr_reconstruct_from_rho(
    rho: PhaseSpaceFunction,
    overlap_phi_psi: complex,
    lam: WaveFunction,
    overlap_phi_lambda: complex,
    reference: WaveFunction | None = None,
) -> ReconstructionReport:
    """Same reconstruction written with the complex distribution ``rho``.

    ``psi(x) = 2 <phi|psi> / <phi|lambda> sum rho(y, p) [T_GR(y, p) lam](x) dy dp``.
    """
    if rho.kind != "rho":
        raise KindMismatch(f"expected a rho distribution, got {rho.kind!r}")
    _check_aux(lam, overlap_phi_lambda)
    prof = _gr_accumulate(rho.values, lam) * (overlap_phi_psi / overlap_phi_lambda)
    rec = WaveFunction(lam.grid, prof, label="gr_rho")
    return _report(rec, "gr_auxiliary", reference, False)
