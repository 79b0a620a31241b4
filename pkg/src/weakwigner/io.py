"""CSV / JSON serialisation with atomic writes.

Number formatting uses ``%.17g`` so doubles round-trip exactly and identical
inputs give byte-identical files.
"""
from __future__ import annotations

import csv
import io as _io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import ConfigError, GridMismatch, InvalidGrid
from .grid import SpatialGrid, WaveFunction
from .transforms import PhaseSpaceFunction

FLOAT_FMT = "%.17g"


def _fmt(v: float) -> str:
    return FLOAT_FMT % v


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a sibling temp file, then rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def commit_all(files: dict[str, str]) -> None:
    """Write several files so that none appear unless every render succeeded.

    Texts are rendered by the caller first; this only performs the renames.
    """
    for path, text in files.items():
        atomic_write_text(path, text)


def wavefunction_csv(psi: WaveFunction) -> str:
    lines = ["x,re,im"]
    for x, a in zip(psi.grid.x, psi.amplitudes):
        lines.append(f"{_fmt(x)},{_fmt(a.real)},{_fmt(a.imag)}")
    return "\n".join(lines) + "\n"


def write_wavefunction_csv(psi: WaveFunction, path) -> None:
    atomic_write_text(path, wavefunction_csv(psi))


def _parse_rows(text: str, header: list[str], source: str) -> np.ndarray:
    rows = list(csv.reader(_io.StringIO(text)))
    if not rows or [h.strip() for h in rows[0]] != header:
        raise ConfigError(f"{source}: expected header {','.join(header)!r}")
    body = [r for r in rows[1:] if r]
    if not body:
        raise ConfigError(f"{source}: no data rows")
    try:
        data = np.array([[float(v) for v in r] for r in body], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"{source}: non-numeric entry ({exc})") from None
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ConfigError(f"{source}: every row needs {len(header)} columns")
    if not np.all(np.isfinite(data)):
        raise ConfigError(f"{source}: non-finite value")
    return data


def read_wavefunction_csv(path, grid: SpatialGrid | None = None) -> WaveFunction:
    """Load an ``x,re,im`` CSV.

    With ``grid`` the x column must match its nodes (to 1e-9 dx); without
    one, the grid is inferred from the file and must be uniform with ``hbar = 1``.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read state file {path}: {exc.strerror}") from None
    data = _parse_rows(text, ["x", "re", "im"], str(path))
    x = data[:, 0]
    if grid is None:
        if len(x) < 8 or len(x) % 2:
            raise ConfigError(f"{path}: need an even number (>= 8) of grid points, got {len(x)}")
        dx = (x[-1] - x[0]) / (len(x) - 1)
        try:
            grid = SpatialGrid(len(x), float(x[0]), float(dx), 1.0)
        except InvalidGrid as exc:
            raise ConfigError(f"{path}: {exc}") from None
    if len(x) != grid.num_points:
        raise ConfigError(f"{path}: {len(x)} rows but the grid has N = {grid.num_points}")
    if np.abs(x - grid.x).max() > 1e-9 * grid.dx:
        raise ConfigError(f"{path}: x column does not match the configured grid")
    return WaveFunction(grid, data[:, 1] + 1j * data[:, 2], label=Path(path).stem)


def phase_space_csv(f: PhaseSpaceFunction) -> str:
    g = f.grid
    xs = [_fmt(v) for v in g.x]
    ps = [_fmt(v) for v in g.p]
    lines = ["x,p,re,im"]
    for j in range(g.num_points):
        row = f.values[j]
        for k in range(g.num_points):
            lines.append(f"{xs[j]},{ps[k]},{_fmt(row[k].real)},{_fmt(row[k].imag)}")
    return "\n".join(lines) + "\n"


def read_phase_space_csv(path, grid: SpatialGrid, kind: str) -> PhaseSpaceFunction:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    data = _parse_rows(text, ["x", "p", "re", "im"], str(path))
    n = grid.num_points
    if data.shape[0] != n * n:
        raise GridMismatch(f"{path}: {data.shape[0]} rows, expected N^2 = {n * n}")
    vals = (data[:, 2] + 1j * data[:, 3]).reshape(n, n)
    return PhaseSpaceFunction(grid, vals, kind)


def gnuplot_script(csv_name: str, n: int, title: str) -> str:
    """Heatmaps of Re, Im and |.| for a ``x,p,re,im`` file."""
    panels = (("Re", "3"), ("Im", "4"), ("abs", "(sqrt($3**2+$4**2))"))
    out = [
        f"# heatmaps for {csv_name}",
        "set datafile separator ','",
        "set terminal pngcairo size 1500,480",
        f"set output '{Path(csv_name).stem}.png'",
        "set multiplot layout 1,3",
        "set xlabel 'x'",
        "set ylabel 'p'",
        "set view map",
        "set palette defined (-1 'blue', 0 'white', 1 'red')",
        "set size square",
    ]
    for name, col in panels:
        out.append(f"set title '{title} ({name})'")
        out.append(f"plot '{csv_name}' every ::1 using 1:2:{col} with image notitle")
    out.append("unset multiplot")
    out.append(f"# grid: {n} x {n}")
    return "\n".join(out) + "\n"


def to_json_text(obj) -> str:
    """Stable JSON: sorted keys, full-precision floats, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(obj, path) -> None:
    atomic_write_text(path, to_json_text(obj))
