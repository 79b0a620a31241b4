"""``weakwigner`` command line.

Exit codes: 0 ok, 1 verification failure, 2 configuration error,
3 numerical precondition failure, 4 orthogonal pre/post-selection.
"""
from __future__ import annotations

import argparse
import re
import sys
import time
from dataclasses import replace
from pathlib import Path


from . import io as wio
from .config import ScenarioConfig
from .errors import ConfigError, NumericalPreconditionError, OrthogonalStates
from .grid import inner_product
from .reconstruction import (
    WeakValueOracle,
    gr_reconstruct,
    lundeen_reconstruct,
    nearest_momentum,
    reconstruct_by_inversion,
)
from .states import parse_state
from .symbolic import NAMED_SYMBOLS, mccoy_order, parse_symbol
from .transforms import cross_ambiguity, cross_wigner, wigner
from .operators import weyl_quantize
from .verify import junit_report, run_checks, summary_lines
from .weakvalues import ROUTES, all_routes, rho, weak_value_braket, weak_value_phase_space, weak_value_via_gr, weak_value_via_heisenberg

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC, EXIT_ORTHOGONAL = 0, 1, 2, 3, 4

_ROUTE_FUNCS = {
    "braket": lambda a, psi, phi, force: weak_value_braket(weyl_quantize(a, psi.grid), psi, phi, force),
    "phase_space": weak_value_phase_space,
    "gr_operator": weak_value_via_gr,
    "heisenberg": weak_value_via_heisenberg,
}
_SQUARE = re.compile(r"^\((.+)\)\s*\^\s*2$")


# ---------------------------------------------------------------- helpers
def _scenario(args) -> ScenarioConfig:
    cfg = ScenarioConfig.load(args.config) if args.config else ScenarioConfig.from_mapping({})
    if args.grid:
        cfg = cfg.with_grid(args.grid)
    if args.hbar is not None:
        if not args.hbar > 0:
            raise ConfigError(f"--hbar must be positive, got {args.hbar}")
        cfg = replace(cfg, hbar=args.hbar)
    if getattr(args, "psi", None):
        cfg = replace(cfg, pre_state=parse_state(args.psi))
    if getattr(args, "phi", None):
        cfg = replace(cfg, post_state=parse_state(args.phi))
    if args.out:
        cfg = replace(cfg, output_dir=args.out)
    return cfg


def _states(cfg: ScenarioConfig, grid, need_phi: bool):
    if cfg.pre_state is None:
        raise ConfigError("pre_state is required (config key or --psi)")
    psi = cfg.pre_state.build(grid)
    if not need_phi:
        return psi, None
    if cfg.post_state is None:
        raise ConfigError("post_state is required (config key or --phi)")
    return psi, cfg.post_state.build(grid)


def _out_path(cfg: ScenarioConfig, default_prefix: str, suffix: str) -> Path:
    return Path(cfg.output_dir) / f"{cfg.prefix or default_prefix}{suffix}"


def _emit_phase_space(cfg, f, name: str, title: str) -> list[Path]:
    csv_path = _out_path(cfg, name, ".csv")
    gp_path = _out_path(cfg, name, ".gp")
    files = {
        str(csv_path): wio.phase_space_csv(f),
        str(gp_path): wio.gnuplot_script(csv_path.name, f.grid.num_points, title),
    }
    wio.commit_all(files)
    return [csv_path, gp_path]


def _print_json(obj) -> None:
    sys.stdout.write(wio.to_json_text(obj))


# ---------------------------------------------------------------- commands
def cmd_wigner(args) -> int:
    cfg = _scenario(args)
    g = cfg.grid()
    psi, _ = _states(cfg, g, False)
    paths = _emit_phase_space(cfg, wigner(psi), "wigner", f"W {psi.label}")
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_cross_wigner(args) -> int:
    cfg = _scenario(args)
    g = cfg.grid()
    psi, phi = _states(cfg, g, True)
    paths = _emit_phase_space(cfg, cross_wigner(psi, phi), "cross_wigner", f"W {psi.label},{phi.label}")
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_ambiguity(args) -> int:
    cfg = _scenario(args)
    g = cfg.grid()
    psi, phi = _states(cfg, g, True)
    paths = _emit_phase_space(cfg, cross_ambiguity(psi, phi), "ambiguity", f"A {psi.label},{phi.label}")
    for p in paths:
        print(p)
    return EXIT_OK


def cmd_rho(args) -> int:
    cfg = _scenario(args)
    g = cfg.grid()
    psi, phi = _states(cfg, g, True)
    r = rho(psi, phi, force=args.force or bool(cfg.options.get("force")))
    paths = _emit_phase_space(cfg, r, "rho", f"rho {phi.label},{psi.label}")
    for p in paths:
        print(p)
    total = r.integrate()
    _print_json({"integral_re": total.real, "integral_im": total.imag})
    return EXIT_OK


def _symbol_text(args, cfg) -> str:
    text = args.symbol or cfg.observable
    if not text:
        raise ConfigError("an observable is required (config key 'observable' or --weyl-symbol)")
    return text


def _naive_control(text: str, psi, phi, hbar: float) -> dict:
    """Square of a symbol read classically vs. square of its operator."""
    if text in NAMED_SYMBOLS and text.endswith("2") and text[:-1] in NAMED_SYMBOLS:
        base_text = text[:-1]
    else:
        m = _SQUARE.match(text.strip())
        if not m:
            raise ConfigError(f"--naive needs a squared observable such as H2 or (x*p)^2, got {text!r}")
        base_text = m.group(1)
    base = parse_symbol(base_text, hbar)
    squared = base * base
    g = psi.grid
    op = weyl_quantize(base, g)
    naive = weak_value_phase_space(squared, psi, phi).value
    true = weak_value_braket(op @ op, psi, phi).value
    mean = weak_value_braket(op, psi, phi).value
    return {
        "symbol": squared.text(),
        "naive_phase_space": {"re": naive.real, "im": naive.imag},
        "operator_square": {"re": true.real, "im": true.imag},
        "discrepancy": {"re": (naive - true).real, "im": (naive - true).imag},
        "naive_variance": {"re": (naive - mean * mean).real, "im": (naive - mean * mean).imag},
    }


def cmd_weak_value(args) -> int:
    cfg = _scenario(args)
    g = cfg.grid()
    psi, phi = _states(cfg, g, True)
    force = args.force or bool(cfg.options.get("force"))
    text = _symbol_text(args, cfg)
    if args.naive:
        out = _naive_control(text, psi, phi, g.hbar)
    else:
        a = parse_symbol(text, g.hbar)
        if args.all_routes:
            res = all_routes(a, psi, phi, force)
            vals = [res[r].value for r in ROUTES]
            spread = max(abs(u - v) for u in vals for v in vals)
            out = {"symbol": a.text(), "routes": {r: res[r].to_json() for r in ROUTES}, "max_pairwise_difference": spread}
        else:
            routes = args.route or [cfg.options.get("route", "braket")]
            unknown = [r for r in routes if r not in ROUTES]
            if unknown:
                raise ConfigError(f"unknown route(s) {unknown}; choose from {ROUTES}")
            out = {"symbol": a.text(), "routes": {r: _ROUTE_FUNCS[r](a, psi, phi, force).to_json() for r in routes}}
    if args.out or cfg.prefix:
        wio.write_json(out, _out_path(cfg, "weak_value", ".json"))
    _print_json(out)
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    cfg = _scenario(args)
    g = cfg.grid()
    method = args.method or cfg.options.get("method")
    if method not in ("lundeen", "inversion", "gr"):
        raise ConfigError(f"method must be one of lundeen, inversion, gr; got {method!r}")
    base = Path(args.config).parent if args.config else None
    if method == "lundeen":
        psi, _ = _states(cfg, g, False)
        p0 = args.p0 if args.p0 is not None else cfg.options.get("p0")
        if p0 is None:
            p0 = cfg.pre_state.params.get("p0", 0.0) if cfg.pre_state.kind == "coherent" else 0.0
        oracle = WeakValueOracle(psi, nearest_momentum(float(p0), g))
        report = lundeen_reconstruct(oracle, reference=psi)
        extra = {"p0": oracle.p0, "oracle_calls": oracle.calls}
    else:
        psi, phi = _states(cfg, g, True)
        W = cross_wigner(psi, phi)
        if method == "inversion":
            report = reconstruct_by_inversion(W, phi, reference=psi)
            extra = {}
        else:
            lam_spec = parse_state(args.lambda_state) if args.lambda_state else cfg.lambda_spec(base)
            if lam_spec is None:
                raise ConfigError("gr reconstruction needs an auxiliary state (--lambda or options.lambda_state)")
            lam = lam_spec.build(g)
            report = gr_reconstruct(W, lam, inner_product(phi, lam), reference=psi)
            extra = {"lambda": lam.label}
    csv_path = _out_path(cfg, f"reconstruct_{method}", ".csv")
    json_path = _out_path(cfg, f"reconstruct_{method}", ".json")
    payload = {**report.to_json(), **extra, "state_csv": csv_path.name}
    wio.commit_all(
        {str(csv_path): wio.wavefunction_csv(report.reconstructed), str(json_path): wio.to_json_text(payload)}
    )
    _print_json(payload)
    print(f"fidelity = {report.fidelity:.16f}", file=sys.stderr)
    return EXIT_OK


def cmd_mccoy(args) -> int:
    expr = mccoy_order(args.r, args.s)
    nf = expr.normal_form()
    out = {"r": args.r, "s": args.s, "weyl_ordered": str(expr), "normal_form": str(nf)}
    _print_json(out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.hbar is not None and not args.hbar > 0:
        raise ConfigError(f"--hbar must be positive, got {args.hbar}")
    if args.state_csv:
        # validates an external state file against the verify grid
        from .verify import make_context

        wio.read_wavefunction_csv(args.state_csv, make_context(args.quick, args.hbar or 1.0).grid)
    t0 = time.perf_counter()
    results = run_checks(quick=args.quick, hbar=args.hbar or 1.0)
    elapsed = time.perf_counter() - t0
    for line in summary_lines(results):
        print(line)
    report = junit_report(results)
    if args.report:
        wio.atomic_write_text(args.report, report)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} invariants hold", file=sys.stderr)
    print(f"elapsed {elapsed:.1f} s", file=sys.stderr)
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------- parser
def _common(p: argparse.ArgumentParser, states: int) -> None:
    p.add_argument("--config", "-c", help="YAML scenario file")
    p.add_argument("--grid", help="override grid as N,extent")
    p.add_argument("--hbar", type=float, help="override hbar (default: $WEAKWIGNER_HBAR or 1)")
    p.add_argument("--out", "-o", help="output directory")
    if states >= 1:
        p.add_argument("--psi", help="pre-selected state, e.g. 'coherent(1,2)'")
    if states >= 2:
        p.add_argument("--phi", help="post-selected state")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weakwigner", description="Phase-space weak values and cross-Wigner tools.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("wigner", help="Wigner distribution of the pre-selected state")
    _common(p, 1)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("cross-wigner", help="cross-Wigner transform W_{psi,phi}")
    _common(p, 2)
    p.set_defaults(func=cmd_cross_wigner)

    p = sub.add_parser("ambiguity", help="cross-ambiguity function A_{psi,phi}")
    _common(p, 2)
    p.set_defaults(func=cmd_ambiguity)

    p = sub.add_parser("rho", help="complex quasi-probability W_{psi,phi} / <phi|psi>")
    _common(p, 2)
    p.add_argument("--force", action="store_true", help="proceed for (nearly) orthogonal states")
    p.set_defaults(func=cmd_rho)

    p = sub.add_parser("weak-value", help="weak value of a Weyl observable")
    _common(p, 2)
    p.add_argument("--weyl-symbol", "--symbol", dest="symbol", help="Weyl symbol, e.g. H or '0.5*x^2+0.5*p^2'")
    p.add_argument("--route", action="append", choices=ROUTES, help="route(s) to evaluate (default braket)")
    p.add_argument("--all-routes", action="store_true", help="evaluate and compare all four routes")
    p.add_argument("--force", action="store_true", help="return a flagged value for orthogonal states")
    p.add_argument("--naive", action="store_true", help="negative control: square the symbol classically")
    p.set_defaults(func=cmd_weak_value)

    p = sub.add_parser("reconstruct", help="recover the pre-selected state")
    _common(p, 2)
    p.add_argument("--method", choices=("lundeen", "inversion", "gr"))
    p.add_argument("--p0", type=float, help="post-selected momentum for lundeen")
    p.add_argument("--lambda", dest="lambda_state", help="auxiliary state for gr")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("mccoy", help="Weyl ordering of x^r p^s and its normal form")
    p.add_argument("r", type=int)
    p.add_argument("s", type=int)
    p.set_defaults(func=cmd_mccoy)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--quick", action="store_true", help="N=64 grid, tolerances x100")
    p.add_argument("--report", help="write a JUnit-style XML report here")
    p.add_argument("--hbar", type=float)
    p.add_argument("--state-csv", help="validate a state CSV against the verify grid first")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except OrthogonalStates as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_ORTHOGONAL
    except ConfigError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalPreconditionError as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
