import json
import os

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from weakwigner.errors import ConfigError
from weakwigner.grid import WaveFunction, make_grid
from weakwigner.io import (
    atomic_write_text,
    commit_all,
    gnuplot_script,
    phase_space_csv,
    read_phase_space_csv,
    read_wavefunction_csv,
    to_json_text,
    wavefunction_csv,
    write_wavefunction_csv,
)
from weakwigner.transforms import cross_wigner


def test_wavefunction_round_trip_is_exact(tmp_path, catalog):
    psi = catalog["coherent(1,2)"]
    path = tmp_path / "psi.csv"
    write_wavefunction_csv(psi, path)
    back = read_wavefunction_csv(path, psi.grid)
    assert np.array_equal(back.amplitudes, psi.amplitudes)
    inferred = read_wavefunction_csv(path)
    assert inferred.grid.num_points == psi.grid.num_points
    assert abs(inferred.grid.dx - psi.grid.dx) < 1e-15
    assert np.array_equal(inferred.amplitudes, psi.amplitudes)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64), min_size=16, max_size=16))
def test_any_double_survives_csv(vals):
    g = make_grid(8, 4.0)
    a = np.array(vals[:8]) + 1j * np.array(vals[8:])
    text = wavefunction_csv(WaveFunction(g, a))
    rows = [r.split(",") for r in text.splitlines()[1:]]
    back = np.array([float(r[1]) + 1j * float(r[2]) for r in rows])
    assert np.array_equal(back, a)


def test_phase_space_round_trip(tmp_path, small_grid):
    from weakwigner.states import coherent_state, hermite_state

    w = cross_wigner(hermite_state(0, small_grid), coherent_state(1.0, 0.5, small_grid))
    p = tmp_path / "w.csv"
    atomic_write_text(p, phase_space_csv(w))
    back = read_phase_space_csv(p, small_grid, w.kind)
    assert np.array_equal(back.values, w.values)
    assert phase_space_csv(w) == phase_space_csv(w)
    lines = p.read_text().splitlines()
    assert lines[0] == "x,p,re,im" and len(lines) == 1 + 64 * 64


@pytest.mark.parametrize(
    "body",
    [
        "",
        "a,b,c\n1,2,3\n",
        "x,re,im\n",
        "x,re,im\n0,1\n",
        "x,re,im\n0,one,0\n",
        "x,re,im\n0,nan,0\n",
        "x,re,im\n0,1,0\n1,1,0\n2,1,0\n",
    ],
)
def test_corrupt_wavefunction_rejected(tmp_path, body):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ConfigError):
        read_wavefunction_csv(p)


def test_wrong_grid_rejected(tmp_path, catalog, small_grid):
    p = tmp_path / "psi.csv"
    write_wavefunction_csv(catalog["ground"], p)
    with pytest.raises(ConfigError):
        read_wavefunction_csv(p, small_grid)
    with pytest.raises(ConfigError):
        read_wavefunction_csv(tmp_path / "missing.csv")


def test_atomic_write_leaves_no_temp_on_failure(tmp_path):
    target = tmp_path / "out.txt"
    target.write_text("old")

    with pytest.raises(TypeError):
        atomic_write_text(target, object())
    assert target.read_text() == "old"
    assert os.listdir(tmp_path) == ["out.txt"]


def test_commit_all_and_json(tmp_path):
    files = {str(tmp_path / "sub" / "a.json"): to_json_text({"b": 1.5, "a": [0.1, 2]}), str(tmp_path / "b.txt"): "x\n"}
    commit_all(files)
    text = (tmp_path / "sub" / "a.json").read_text()
    assert text == to_json_text(json.loads(text))
    assert text.index('"a"') < text.index('"b"')
    with pytest.raises(ValueError):
        to_json_text({"v": float("nan")})


def test_gnuplot_script_mentions_all_panels():
    s = gnuplot_script("w.csv", 64, "W")
    for part in ("(Re)", "(Im)", "(abs)", "w.png", "every ::1"):
        assert part in s
