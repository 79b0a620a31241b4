"""Analytically known test states on a grid (oscillator units m = omega = 1)."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CenterTooFarOut, ConfigError, IndexTooHigh, ZeroSum
from .grid import SpatialGrid, WaveFunction, inner_product

MAX_HERMITE = 10
CENTER_MARGIN = 0.6

STATE_KINDS = ("hermite", "coherent", "cat", "plane_wave_windowed", "custom_csv")


def _hermite_functions(kmax: int, x: np.ndarray, hbar: float) -> list[np.ndarray]:
    # recurrence on the normalised functions; raw polynomials overflow for large k
    xi = x / np.sqrt(hbar)
    scale = hbar ** -0.25
    h = [np.pi ** -0.25 * np.exp(-xi**2 / 2)]
    if kmax >= 1:
        h.append(np.sqrt(2.0) * xi * h[0])
    for k in range(1, kmax):
        h.append(np.sqrt(2.0 / (k + 1)) * xi * h[k] - np.sqrt(k / (k + 1)) * h[k - 1])
    return [scale * f for f in h[: kmax + 1]]


def hermite_state(k: int, grid: SpatialGrid) -> WaveFunction:
    """k-th eigenfunction of ``(x^2 + p^2) / 2``, eigenvalue ``hbar (k + 1/2)``."""
    if int(k) != k or k < 0:
        raise IndexTooHigh(f"hermite index must be a non-negative integer, got {k}")
    if k > MAX_HERMITE:
        raise IndexTooHigh(f"hermite index 0 <= k <= {MAX_HERMITE} violated: k = {k}")
    amp = _hermite_functions(int(k), grid.x, grid.hbar)[int(k)]
    return WaveFunction(grid, amp, normalized=True, label=f"hermite({k})")


def hermite_basis(kmax: int, grid: SpatialGrid) -> np.ndarray:
    """Columns are the first ``kmax + 1`` Hermite functions scaled by ``sqrt(dx)``.

    The columns are orthonormal in the plain Euclidean sense, which makes
    ``B.conj().T @ M @ B`` the matrix of an operator in the oscillator basis.
    """
    fs = _hermite_functions(kmax, grid.x, grid.hbar)
    return np.array(fs).T.astype(complex) * np.sqrt(grid.dx)


def _check_center(x0: float, grid: SpatialGrid, what: str) -> None:
    half = grid.extent / 2
    if abs(x0) > CENTER_MARGIN * half:
        raise CenterTooFarOut(
            f"{what} centre within {CENTER_MARGIN:.0%} of half-extent violated: |{x0}| > {CENTER_MARGIN * half:g}"
        )


def coherent_state(x0: float, p0: float, grid: SpatialGrid) -> WaveFunction:
    """Ground state displaced by the Heisenberg operator ``T(x0, p0)``.

    Evaluated analytically so that ``x0`` need not be a grid point; for
    grid-commensurate ``x0`` it coincides with ``heisenberg(x0, p0) @ ground``.
    """
    _check_center(x0, grid, "coherent")
    hb = grid.hbar
    x = grid.x
    amp = (np.pi * hb) ** -0.25 * np.exp(-((x - x0) ** 2) / (2 * hb)) * np.exp(1j * (p0 * x - p0 * x0 / 2) / hb)
    return WaveFunction(grid, amp, normalized=True, label=f"coherent({x0:g},{p0:g})")


def cat_state(alpha: float, phase: float, grid: SpatialGrid) -> WaveFunction:
    """Normalised ``coherent(alpha, 0) + exp(i phase) coherent(-alpha, 0)``."""
    _check_center(2 * alpha, grid, "cat separation")
    a = coherent_state(alpha, 0.0, grid).amplitudes
    b = coherent_state(-alpha, 0.0, grid).amplitudes
    amp = a + np.exp(1j * phase) * b
    nrm = np.sqrt(np.sum(np.abs(amp) ** 2) * grid.dx)
    if nrm < 1e-12:
        raise ZeroSum(f"cat({alpha},{phase}) components cancel")
    return WaveFunction(grid, amp / nrm, normalized=True, label=f"cat({alpha:g},{phase:g})")


def plane_wave_windowed(p0: float, width: float, grid: SpatialGrid) -> WaveFunction:
    """Wide Gaussian wave packet with mean momentum ``p0``; approximates ``|p0>``."""
    if not width > 0:
        raise ConfigError(f"plane_wave_windowed width > 0 required, got {width}")
    x = grid.x
    amp = np.exp(-(x**2) / (2 * width**2)) * np.exp(1j * p0 * x / grid.hbar)
    amp = amp / np.sqrt(np.sum(np.abs(amp) ** 2) * grid.dx)
    return WaveFunction(grid, amp, normalized=True, label=f"plane_wave_windowed({p0:g},{width:g})")


def overlap_magnitude(phi: WaveFunction, psi: WaveFunction) -> float:
    return abs(inner_product(phi, psi))


@dataclass(frozen=True)
class StateSpec:
    """Declarative description of a catalog state, as found in scenario files."""

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in STATE_KINDS:
            raise ConfigError(f"state kind must be one of {STATE_KINDS}, got {self.kind!r}")

    @classmethod
    def from_dict(cls, d) -> "StateSpec":
        if not isinstance(d, dict) or "kind" not in d:
            raise ConfigError(f"state spec needs a 'kind' key, got {d!r}")
        params = {k: v for k, v in d.items() if k != "kind"}
        return cls(str(d["kind"]), params)

    def build(self, grid: SpatialGrid) -> WaveFunction:
        p = self.params
        try:
            if self.kind == "hermite":
                return hermite_state(int(p.get("k", 0)), grid)
            if self.kind == "coherent":
                return coherent_state(float(p.get("x0", 0.0)), float(p.get("p0", 0.0)), grid)
            if self.kind == "cat":
                return cat_state(float(p.get("alpha", 0.0)), float(p.get("phase", 0.0)), grid)
            if self.kind == "plane_wave_windowed":
                return plane_wave_windowed(float(p.get("p0", 0.0)), float(p.get("width", 1.5)), grid)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad parameters for {self.kind} state: {exc}") from exc
        from .io import read_wavefunction_csv

        if "path" not in p:
            raise ConfigError("custom_csv state requires 'path'")
        return read_wavefunction_csv(p["path"], grid)


def parse_state(text: str) -> StateSpec:
    """Parse the short form used on the command line, e.g. ``coherent(1,2)``."""
    text = text.strip()
    name, _, rest = text.partition("(")
    name = name.strip()
    args = [a.strip() for a in rest.rstrip(")").split(",") if a.strip()] if rest else []
    try:
        vals = [float(a) for a in args]
    except ValueError:
        if name == "custom_csv" and len(args) == 1:
            return StateSpec("custom_csv", {"path": args[0]})
        raise ConfigError(f"cannot parse state {text!r}") from None
    keys = {
        "hermite": ("k",),
        "ground": (),
        "coherent": ("x0", "p0"),
        "cat": ("alpha", "phase"),
        "plane_wave_windowed": ("p0", "width"),
    }
    if name not in keys or len(vals) > len(keys[name]):
        raise ConfigError(f"cannot parse state {text!r}")
    if name == "ground":
        return StateSpec("hermite", {"k": 0})
    return StateSpec(name, dict(zip(keys[name], vals)))
