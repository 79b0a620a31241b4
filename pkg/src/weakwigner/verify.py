"""Invariant suite run by ``weakwigner verify``.

Each check measures one error figure and compares it with a tolerance.  The
report is JUnit-style XML containing only measured values, so two runs on
the same machine produce byte-identical files.
"""
from __future__ import annotations

import inspect
import itertools
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .grid import SpatialGrid, hbar_fourier, inner_product, inverse_hbar_fourier, make_grid
from .io import phase_space_csv
from .operators import (
    grossmann_royer,
    grossmann_royer_apply,
    heisenberg_apply,
    operator_from_symbol_gr,
    operator_from_symbol_heisenberg,
    position_operator,
    rank_one,
    weyl_quantize,
)
from .reconstruction import WeakValueOracle, gr_reconstruct, lundeen_reconstruct, nearest_momentum
from .errors import SmallMomentumAmplitude
from .states import hermite_state, parse_state
from .symbolic import NAMED_SYMBOLS, PolynomialSymbol, mccoy_order, mccoy_order_alt, oscillator_symbol
from .transforms import (
    cross_ambiguity,
    cross_wigner,
    marginal_p,
    marginal_x,
    momentum_marginal_target,
    superposition_identity_check,
    symplectic_fourier,
    wigner,
)
from .weakvalues import (
    ROUTES,
    moyal_average,
    phase_space_average,
    pointer_statistics,
    rho,
    route_table,
    superposition_expectation,
    weak_value_braket,
    weak_value_phase_space,
)

FULL = {"n_points": 256, "extent": 20.0, "scale": 1.0, "hermite_max": 10}
QUICK = {"n_points": 64, "extent": 16.0, "scale": 100.0, "hermite_max": 6}

CATALOG_FULL = (
    "ground", "hermite(1)", "hermite(2)", "coherent(1,2)", "coherent(1,0)",
    "coherent(0,1)", "coherent(-1,0.5)", "cat(2,0)", "plane_wave_windowed(1,1.5)",
)
CATALOG_QUICK = (
    "ground", "hermite(1)", "hermite(2)", "coherent(1,1)", "coherent(1,0)",
    "coherent(0,1)", "coherent(-1,0.5)", "cat(1.5,0)", "plane_wave_windowed(0.5,1.2)",
)
# pairs whose ambiguity lag stays well inside the x-period of the discrete F_s
FOURIER_PAIRS = (
    ("ground", "coherent(1,0)"), ("ground", "coherent(0,1)"), ("hermite(1)", "hermite(2)"),
    ("coherent(-1,0.5)", "coherent(1,0)"), ("cat", "ground"),
)
GR_PAIRS = (("ground", "coherent(1,0)"), ("hermite(1)", "coherent(0,1)"), ("moving", "coherent(0,1)"))
GR_AUX = ("ground", "coherent(1,0)", "hermite(2)")
SYMBOLS = ("1", "x", "p", "xp", "H")


@dataclass(frozen=True)
class CheckResult:
    module: str
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""


@dataclass
class Context:
    grid: SpatialGrid
    scale: float
    hermite_max: int
    catalog: tuple[str, ...]
    _cache: dict = field(default_factory=dict)

    def state(self, text: str):
        alias = {
            "cat": self.catalog[7],
            "moving": self.catalog[3],
        }
        text = alias.get(text, text)
        if text not in self._cache:
            self._cache[text] = parse_state(text).build(self.grid)
        return self._cache[text]

    @property
    def states(self):
        return [self.state(t) for t in self.catalog]

    def pairs(self):
        return list(itertools.combinations(self.states, 2))

    @cached_property
    def hamiltonian(self):
        return weyl_quantize(oscillator_symbol(), self.grid)

    def tol(self, base: float) -> float:
        return base * self.scale


_CHECKS: list = []


def check(module: str, name: str, tol: float, exact: bool = False):
    """Register ``fn(ctx) -> measured`` with base tolerance ``tol``."""

    def deco(fn):
        _CHECKS.append((module, name, tol, exact, fn))
        return fn

    return deco


def _sup(a) -> float:
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


# ---------------------------------------------------------------- core-grid
@check("core-grid", "grid_consistency", 0.0, exact=True)
def _grid_consistency(ctx):
    g = ctx.grid
    # dp is built as 2 pi hbar / (N dx); recompute in that order
    return abs(g.dp - 2 * np.pi * g.hbar / (g.num_points * g.dx))


@check("core-grid", "fourier_round_trip", 1e-9)
def _round_trip(ctx):
    return max(_sup(inverse_hbar_fourier(hbar_fourier(s)).amplitudes - s.amplitudes) for s in ctx.states)


@check("core-grid", "parseval", 1e-9)
def _parseval(ctx):
    out = 0.0
    for a, b in ctx.pairs():
        out = max(out, abs(inner_product(hbar_fourier(b), hbar_fourier(a)) - inner_product(b, a)))
    return out


# ---------------------------------------------------------------- states
@check("states", "boundary_decay", 1e-8)
def _decay(ctx):
    return max(s.boundary_ratio() for s in ctx.states)


@check("states", "hermite_eigen_residual", 1e-6)
def _hermite_residual(ctx):
    h = ctx.hamiltonian
    out = 0.0
    for k in range(ctx.hermite_max + 1):
        s = hermite_state(k, ctx.grid)
        out = max(out, _sup(h.apply(s).amplitudes - ctx.grid.hbar * (k + 0.5) * s.amplitudes))
    return out


# ---------------------------------------------------------------- transforms
@check("transforms", "bilinearity", 1e-12)
def _bilinearity(ctx):
    a, b, c = ctx.state("ground"), ctx.state("coherent(1,0)"), ctx.state("hermite(2)")
    x, y = 0.7 - 0.2j, -1.3 + 0.5j
    lhs = cross_wigner(a * x + b * y, c).values
    rhs = x * cross_wigner(a, c).values + y * cross_wigner(b, c).values
    return _sup(lhs - rhs)


@check("transforms", "hermiticity_exact", 0.0, exact=True)
def _hermiticity(ctx):
    return max(_sup(np.conj(cross_wigner(a, b).values) - cross_wigner(b, a).values) for a, b in ctx.pairs()[:8])


@check("transforms", "diagonal_reality", 1e-9)
def _reality(ctx):
    out = 0.0
    for s in ctx.states:
        w = wigner(s).values
        out = max(out, _sup(w.imag) / _sup(w))
    return out


@check("transforms", "moyal_bridge", 1e-6)
def _moyal_bridge(ctx):
    out = 0.0
    syms = [NAMED_SYMBOLS[n](ctx.grid.hbar) for n in ("1", "x", "p", "H")]
    ops = [weyl_quantize(a, ctx.grid) for a in syms]
    for a, b in ctx.pairs()[:10]:
        w = cross_wigner(a, b)
        for sym, op in zip(syms, ops):
            out = max(out, abs(phase_space_average(sym, w) - op.matrix_element(b, a)))
    return out


@check("transforms", "marginals", 1e-7)
def _marginals(ctx):
    out = 0.0
    for a, b in ctx.pairs():
        w = cross_wigner(a, b)
        out = max(out, _sup(marginal_p(w) - a.amplitudes * np.conj(b.amplitudes)))
        out = max(out, _sup(marginal_x(w) - momentum_marginal_target(a, b)))
    return out


@check("transforms", "fourier_pair", 1e-7)
def _fourier_pair(ctx):
    out = 0.0
    for ta, tb in FOURIER_PAIRS:
        a, b = ctx.state(ta), ctx.state(tb)
        w, amb = cross_wigner(a, b), cross_ambiguity(a, b)
        out = max(out, _sup(symplectic_fourier(w).values - amb.values))
        out = max(out, _sup(symplectic_fourier(amb).values - w.values))
    return out


@check("transforms", "symplectic_involution", 1e-9)
def _involution(ctx):
    w = cross_wigner(ctx.state("cat"), ctx.state("coherent(0,1)"))
    return _sup(symplectic_fourier(symplectic_fourier(w)).values - w.values)


@check("transforms", "superposition_identity", 1e-10)
def _superposition(ctx):
    return max(superposition_identity_check(a, b) for a, b in ctx.pairs()[:5])


# ---------------------------------------------------------------- operators
def _shifts(ctx):
    dx = ctx.grid.dx
    return [(0.0, 0.0), (16 * dx if dx < 0.1 else 4 * dx, 0.7), (-8 * dx if dx < 0.1 else -2 * dx, -1.1)]


@check("operators", "unitarity", 1e-10)
def _unitarity(ctx):
    out = 0.0
    for s in ctx.states:
        for x0, p0 in _shifts(ctx):
            out = max(out, abs(heisenberg_apply(x0, p0, s).norm() - s.norm()))
            out = max(out, abs(grossmann_royer_apply(x0 / 2, p0, s).norm() - s.norm()))
    return out


@check("operators", "gr_involution", 1e-12)
def _gr_involution(ctx):
    # on the columns whose image stays on the grid, M M = I
    out = 0.0
    for x0, p0 in _shifts(ctx):
        m = grossmann_royer(x0 / 2, p0, ctx.grid).matrix
        cols = np.flatnonzero(np.any(m != 0, axis=0))
        sq = m @ m[:, cols]
        out = max(out, _sup(sq - np.eye(ctx.grid.num_points)[:, cols]))
    return out


@check("operators", "mccoy_symmetry", 0.0, exact=True)
def _mccoy(ctx):
    bad = 0
    for r in range(5):
        for s in range(5):
            bad += mccoy_order(r, s).normal_form() != mccoy_order_alt(r, s)
    return float(bad)


@check("operators", "hermiticity_real_symbols", 1e-8)
def _op_hermitian(ctx):
    syms = [NAMED_SYMBOLS[n](ctx.grid.hbar) for n in ("x", "p", "xp", "H", "H2")]
    return max(weyl_quantize(a, ctx.grid).hermiticity_defect() for a in syms)


@check("operators", "oscillator_spectrum", 1e-5)
def _spectrum(ctx):
    ev = np.linalg.eigvalsh(ctx.hamiltonian.matrix)[:6]
    want = ctx.grid.hbar * (np.arange(6) + 0.5)
    return float(np.max(np.abs(ev - want) / want))


@check("operators", "operator_integrals", 1e-5)
def _operator_integrals(ctx):
    g = ctx.grid
    ground = ctx.state("ground")
    w = wigner(ground)
    proj_symbol = w.with_values(w.values * (2 * np.pi * g.hbar), "symbol")
    out = 0.0
    for sym, direct in ((PolynomialSymbol({(1, 0): 1}), position_operator(g)), (proj_symbol, rank_one(ground))):
        ref = direct.compress()
        out = max(out, _sup(operator_from_symbol_gr(sym, g).compress() - ref))
        out = max(out, _sup(operator_from_symbol_heisenberg(sym, g).compress() - ref))
    return out


# ---------------------------------------------------------------- weakvalues
@check("weakvalues", "route_consistency", 1e-5)
def _routes(ctx):
    syms = [NAMED_SYMBOLS[n](ctx.grid.hbar) for n in SYMBOLS]
    out = 0.0
    for a, b in ctx.pairs():
        if abs(inner_product(b, a)) < 1e-3:
            continue
        for row in route_table(syms, a, b):
            vals = [row[r].value for r in ROUTES]
            out = max(out, max(abs(u - v) for u in vals for v in vals))
    return out


@check("weakvalues", "reduction_to_expectation", 1e-6)
def _reduction(ctx):
    out = 0.0
    syms = [NAMED_SYMBOLS[n](ctx.grid.hbar) for n in SYMBOLS]
    for s in ctx.states:
        for a in syms:
            wv = weak_value_phase_space(a, s, s).value
            # the imaginary-part bound (1e-9) is tighter than the Moyal one
            out = max(out, abs(wv.imag) * 1e3, abs(wv.real - moyal_average(a, s)))
    return out


@check("weakvalues", "observable_linearity", 1e-9)
def _linearity(ctx):
    hb = ctx.grid.hbar
    x, p = NAMED_SYMBOLS["x"](hb), NAMED_SYMBOLS["p"](hb)
    al, be = 0.3 - 1.2j, 2.0
    combo = x * al + p * be
    out = 0.0
    for a, b in ctx.pairs()[:6]:
        if abs(inner_product(b, a)) < 1e-3:
            continue
        lhs = weak_value_phase_space(combo, a, b).value
        rhs = al * weak_value_phase_space(x, a, b).value + be * weak_value_phase_space(p, a, b).value
        out = max(out, abs(lhs - rhs))
    return out


@check("weakvalues", "weyl_negative_control", 1e-6)
def _negative_control(ctx):
    hb = ctx.grid.hbar
    g0 = ctx.state("ground")
    h = weak_value_phase_space(NAMED_SYMBOLS["H"](hb), g0, g0).value.real
    naive = weak_value_phase_space(NAMED_SYMBOLS["H2"](hb), g0, g0).value.real
    weyl = weak_value_phase_space(NAMED_SYMBOLS["H2_weyl"](hb), g0, g0).value.real
    return max(abs((naive - h * h) - hb**2 / 4), abs(weyl - h * h))


@check("weakvalues", "rho_normalisation_marginals", 1e-7)
def _rho(ctx):
    out = 0.0
    for a, b in ctx.pairs():
        ov = inner_product(b, a)
        if abs(ov) < 1e-3:
            continue
        r = rho(a, b)
        out = max(out, abs(r.integrate() - 1))
        out = max(out, _sup(marginal_p(r) - a.amplitudes * np.conj(b.amplitudes) / ov))
        out = max(out, _sup(marginal_x(r) - momentum_marginal_target(a, b) / ov))
    return out


@check("weakvalues", "pointer_statistics", 1e-9)
def _pointer(ctx):
    x = NAMED_SYMBOLS["x"](ctx.grid.hbar)
    a, b = ctx.state("ground"), ctx.state("coherent(1,0)")
    re, im = pointer_statistics(x, a, b)
    wv = weak_value_phase_space(x, a, b).value
    return max(abs(re - wv.real), abs(im - wv.imag))


@check("weakvalues", "superposition_decomposition", 1e-9)
def _decomposition(ctx):
    x_op = position_operator(ctx.grid)
    out = 0.0
    for a, b in ctx.pairs()[:5]:
        out = max(out, superposition_expectation(x_op, a, b).residual)
        out = max(out, superposition_expectation(ctx.hamiltonian, a, b).residual)
    return out


@check("weakvalues", "braket_consistency", 1e-9)
def _braket_identity(ctx):
    a, b = ctx.state("ground"), ctx.state("coherent(1,0)")
    op = position_operator(ctx.grid)
    r = weak_value_braket(op, a, b)
    return abs(r.value * r.overlap - op.matrix_element(b, a))


# ---------------------------------------------------------------- reconstruction
def _gr_runs(ctx):
    key = "__gr_runs"
    if key not in ctx._cache:
        runs = []
        for ta, tb in GR_PAIRS:
            a, b = ctx.state(ta), ctx.state(tb)
            w = cross_wigner(a, b)
            recs = [gr_reconstruct(w, ctx.state(t), inner_product(b, ctx.state(t)), reference=a) for t in GR_AUX]
            runs.append((a, b, w, recs))
        ctx._cache[key] = runs
    return ctx._cache[key]


@check("reconstruction", "gr_fidelity_defect", 1e-6)
def _gr_fidelity(ctx):
    return max(1 - r.fidelity for *_, recs in _gr_runs(ctx) for r in recs)


@check("reconstruction", "lambda_independence", 1e-5)
def _lambda_independence(ctx):
    out = 0.0
    for *_, recs in _gr_runs(ctx):
        base = recs[0].reconstructed.amplitudes
        out = max(out, max(_sup(r.reconstructed.amplitudes - base) for r in recs[1:]))
    return out


@check("reconstruction", "consistency_triangle", 1e-5)
def _triangle(ctx):
    out = 0.0
    for _, b, w, recs in _gr_runs(ctx):
        # the best-decaying reconstruction; all coincide to lambda_independence
        rec = min((r.reconstructed for r in recs), key=lambda s: s.boundary_ratio())
        out = max(out, _sup(cross_wigner(rec, b, decay_tol=ctx.tol(1e-8)).values - w.values))
    return out


@check("reconstruction", "scale_covariance", 1e-12)
def _scale(ctx):
    a, b, w, recs = _gr_runs(ctx)[0]
    lam = ctx.state(GR_AUX[1])
    c = 2.5 - 1.0j
    scaled = gr_reconstruct(w * c, lam, inner_product(b, lam)).reconstructed.amplitudes
    return _sup(scaled - c * recs[1].reconstructed.amplitudes) / _sup(recs[1].reconstructed.amplitudes)


@check("reconstruction", "lundeen_fidelity_defect", 1e-9)
def _lundeen(ctx):
    out = 0.0
    for t, p in (("ground", 0.0), (ctx.catalog[3], None)):
        s = ctx.state(t)
        p0 = nearest_momentum(p if p is not None else parse_state(t).params["p0"], ctx.grid)
        out = max(out, 1 - lundeen_reconstruct(WeakValueOracle(s, p0), reference=s).fidelity)
    return out


@check("reconstruction", "lundeen_rejects_node", 0.0, exact=True)
def _lundeen_reject(ctx):
    try:
        WeakValueOracle(ctx.state("hermite(1)"), 0.0)
    except SmallMomentumAmplitude:
        return 0.0
    return 1.0


@check("reconstruction", "oracle_purity", 0.0, exact=True)
def _purity(ctx):
    params = list(inspect.signature(lundeen_reconstruct).parameters)
    oracle = WeakValueOracle(ctx.state("ground"), 0.0)
    leaks = [n for n in vars(oracle) if not n.startswith("_WeakValueOracle__") and "psi" in n.lower()]
    return float(params != ["oracle", "k", "reference"] or bool(leaks))


# ---------------------------------------------------------------- cli
@check("cli", "csv_determinism", 0.0, exact=True)
def _csv_determinism(ctx):
    s = ctx.state("cat")
    return float(phase_space_csv(wigner(s)) != phase_space_csv(wigner(parse_state(ctx.catalog[7]).build(ctx.grid))))


def make_context(quick: bool = False, hbar: float = 1.0) -> Context:
    cfg = QUICK if quick else FULL
    grid = make_grid(cfg["n_points"], cfg["extent"], hbar)
    return Context(grid, cfg["scale"], cfg["hermite_max"], CATALOG_QUICK if quick else CATALOG_FULL)


def run_checks(quick: bool = False, hbar: float = 1.0, only: str | None = None) -> list[CheckResult]:
    ctx = make_context(quick, hbar)
    results = []
    for module, name, tol, exact, fn in _CHECKS:
        if only and only not in (module, name):
            continue
        t = tol if exact else ctx.tol(tol)
        try:
            value = float(fn(ctx))
            results.append(CheckResult(module, name, value, t, bool(value <= t)))
        except Exception as exc:  # a raised precondition is a failed invariant
            results.append(CheckResult(module, name, float("nan"), t, False, f"{type(exc).__name__}: {exc}"))
    return results


def junit_report(results: list[CheckResult], suite: str = "weakwigner.verify") -> str:
    failures = sum(not r.passed for r in results)
    root = ET.Element("testsuite", {"name": suite, "tests": str(len(results)), "failures": str(failures), "errors": "0"})
    for r in results:
        case = ET.SubElement(root, "testcase", {"classname": r.module, "name": r.name})
        props = ET.SubElement(case, "properties")
        ET.SubElement(props, "property", {"name": "measured", "value": f"{r.value:.3e}"})
        ET.SubElement(props, "property", {"name": "tolerance", "value": f"{r.tol:.3e}"})
        if not r.passed:
            fail = ET.SubElement(case, "failure", {"message": f"{r.name}: measured {r.value:.3e} > tolerance {r.tol:.3e}"})
            fail.text = r.detail or None
    ET.indent(root)
    return '<?xml version="1.0" encoding="utf-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def summary_lines(results: list[CheckResult]) -> list[str]:
    return [
        f"{'PASS' if r.passed else 'FAIL'}  {r.module:<15} {r.name:<30} {r.value:.3e} <= {r.tol:.1e}"
        + (f"  ({r.detail})" if r.detail else "")
        for r in results
    ]
