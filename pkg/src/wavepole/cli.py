"""
Command-line interface.

Every subcommand writes a CSV table (stdout by default) preceded by '#'
metadata lines: package version, a SHA-256 of the resolved parameters, the
grid and the model. Parameters come from an optional scenario file with
[potential], [grid] and [sweep] sections of key = value lines; command-line
flags override file values.

Exit codes: 0 ok, 1 numerical failure, 2 empty result, 3 bad input, 4 I/O.
"""

from __future__ import annotations

import argparse
import configparser
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import analytic_solutions as exact
from . import coulomb, perturbation
from . import pole_extrapolation as pe
from .errors import (
    ConfigurationError,
    DomainError,
    FitError,
    NearPoleError,
    NodeSingularityError,
    NumericalFailure,
    UnsupportedOperation,
)
from .potentials import (
    SeparableModel,
    load_tabulated_csv,
    make_bargmann,
    make_gaussian,
    make_spherical_well,
    make_yamaguchi,
)
from .radial_solver import DEFAULT_STEP, RadialGrid, find_bound_states, find_virtual_states

EXIT_OK, EXIT_NUMERICAL, EXIT_EMPTY, EXIT_INPUT, EXIT_IO = 0, 1, 2, 3, 4

FIG1_DEPTHS = {1: 2.8, 2: 22.547, 3: 21.913}
FIG1_K = (0.1, 0.2, 0.5, 1.0)
FIG1_R_MAX = 3.0
FIG1_DR = 0.01


class EmptyResult(Exception):
    """Raised after output is written when the table has no data rows."""


# --------------------------------------------------------------------------
# Parameter handling
# --------------------------------------------------------------------------

LIST_KEYS = {"k", "eta", "eps", "k_samples", "r"}
INT_KEYS = {"terms", "level", "region", "case"}
STR_KEYS = {"potential", "table", "profile"}
FLOAT_KEYS = {"u0", "a", "beta", "alphab", "h", "kappa", "profile_depth", "profile_size"}
FILE_ALIASES = {"kind": "potential", "alpha_b": "alphab", "k-samples": "k_samples"}


def _parse_list(text) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(x) for x in str(text).replace(" ", "").split(",") if x]


def _coerce(key: str, value):
    try:
        if key in LIST_KEYS:
            return _parse_list(value)
        if key in INT_KEYS:
            return int(value)
        if key in FLOAT_KEYS:
            return float(value)
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key}: {value!r}") from exc
    return str(value)


def read_scenario(path) -> dict:
    """Flatten a scenario file into one parameter dict."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    with open(path) as fh:
        parser.read_file(fh)
    out = {}
    for section in parser.sections():
        if section not in ("potential", "grid", "sweep"):
            raise ConfigurationError(f"unknown scenario section [{section}]")
        for key, value in parser.items(section):
            name = FILE_ALIASES.get(key, key).lower().replace("-", "_")
            if name not in LIST_KEYS | INT_KEYS | STR_KEYS | FLOAT_KEYS:
                raise ConfigurationError(f"unknown scenario key {key!r} in [{section}]")
            out[name] = _coerce(name, value)
    return out


def resolve(args: argparse.Namespace) -> dict:
    params = read_scenario(args.scenario) if getattr(args, "scenario", None) else {}
    for key in LIST_KEYS | INT_KEYS | STR_KEYS | FLOAT_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            params[key] = _coerce(key, value)
    return params


def _require(params: dict, *keys):
    missing = [k for k in keys if k not in params]
    if missing:
        raise ConfigurationError("missing parameter(s): " + ", ".join(missing))
    return [params[k] for k in keys]


def build_model(params: dict):
    kind = params.get("potential", "well").lower()
    if kind == "well":
        (u0,) = _require(params, "u0")
        return make_spherical_well(u0, params.get("a", 1.0))
    if kind == "bargmann":
        return make_bargmann(*_require(params, "beta", "alphab"))
    if kind == "yamaguchi":
        return make_yamaguchi(*_require(params, "beta", "alphab"))
    if kind == "tabulated":
        (table,) = _require(params, "table")
        return load_tabulated_csv(table)
    raise ConfigurationError(f"unknown potential {kind!r}")
    raise ConfigurationError(f"unknown potential {kind!r}")


def scenario_hash(command: str, params: dict) -> str:
    blob = json.dumps({"command": command, **params}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()


# --------------------------------------------------------------------------
# Output
# --------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else "%.17g" % value
    return str(value)


def render_csv(command: str, params: dict, header, rows, meta=None) -> str:
    lines = [f"# wavepole {__version__}", f"# command: {command}",
             f"# scenario_sha256: {scenario_hash(command, params)}"]
    for key in sorted(params):
        lines.append(f"# param {key} = {_fmt_param(params[key])}")
    for key, value in (meta or {}).items():
        lines.append(f"# {key}: {_fmt_param(value)}")
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _fmt_param(value) -> str:
    if isinstance(value, dict):
        return "; ".join(f"{k}={_fmt_param(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(_fmt(float(v)) for v in value)
    return _fmt(value)


def emit(text: str, output):
    if output in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(output).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {output}: {exc}") from exc


def render_svg(x, columns: dict, title: str, xlabel: str = "r") -> str:
    """Plain SVG line plot of several columns against x."""
    width, height, pad = 640, 400, 50
    x = np.asarray(x, dtype=float)
    ys = {k: np.asarray(v, dtype=float) for k, v in columns.items() if v is not None}
    finite = np.concatenate([v[np.isfinite(v)] for v in ys.values()]) if ys else np.array([0.0, 1.0])
    y0, y1 = float(finite.min()), float(finite.max())
    if y1 == y0:
        y1 = y0 + 1.0
    x0, x1 = float(x.min()), float(x.max())
    sx = lambda v: pad + (v - x0) / (x1 - x0) * (width - 2 * pad)
    sy = lambda v: height - pad - (v - y0) / (y1 - y0) * (height - 2 * pad)
    palette = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"]
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">',
             f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" fill="none" stroke="#888"/>',
             f'<text x="{width / 2:.1f}" y="{pad / 2:.1f}" text-anchor="middle" font-size="14">{title}</text>',
             f'<text x="{width / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="12">{xlabel}</text>',
             f'<text x="{pad}" y="{height - pad + 16}" font-size="10">{x0:.3g}</text>',
             f'<text x="{width - pad}" y="{height - pad + 16}" text-anchor="end" font-size="10">{x1:.3g}</text>',
             f'<text x="{pad - 4}" y="{height - pad:.1f}" text-anchor="end" font-size="10">{y0:.3g}</text>',
             f'<text x="{pad - 4}" y="{pad + 4:.1f}" text-anchor="end" font-size="10">{y1:.3g}</text>']
    if y0 < 0 < y1:
        parts.append(f'<line x1="{pad}" y1="{sy(0):.2f}" x2="{width - pad}" y2="{sy(0):.2f}" stroke="#ccc"/>')
    for i, (name, y) in enumerate(ys.items()):
        color = palette[i % len(palette)]
        ok = np.isfinite(y)
        pts = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in zip(x[ok], y[ok]))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        parts.append(f'<text x="{width - pad - 4}" y="{pad + 16 + 14 * i}" text-anchor="end" font-size="11" fill="{color}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _grid_meta(grid: RadialGrid | None, h: float) -> dict:
    if grid is None:
        return {"grid_h": h}
    return {"grid_h": grid.h, "grid_r_max": grid.r_max}


# --------------------------------------------------------------------------
# Figure data
# --------------------------------------------------------------------------

def fig1_table(case: int, h: float = DEFAULT_STEP):
    """Bound and modified scattering functions of the radius-1 wells.

    Returns (r, columns, alpha_ref, grid) where columns maps names to arrays
    (``psi_bound`` is None for the virtual-state case).
    """
    if case not in FIG1_DEPTHS:
        raise ConfigurationError("case must be 1, 2 or 3")
    model = make_spherical_well(FIG1_DEPTHS[case], 1.0)
    r = np.round(np.arange(0.0, FIG1_R_MAX + FIG1_DR / 2, FIG1_DR), 10)
    if case == 3:
        virtual = find_virtual_states(model, h=h)
        alpha_ref = virtual[0]
        grid = RadialGrid.for_model(model, h, k=np.array(FIG1_K))
        bound = None
    else:
        alpha_ref = find_bound_states(model, h=h)[-1].alpha
        grid = RadialGrid.for_model(model, h, alpha=alpha_ref, k=np.array(FIG1_K))
        b = find_bound_states(model, grid)[-1]
        alpha_ref = b.alpha
        bound = np.asarray(pe.bound_psi(b, r))
    n_bound = len(find_bound_states(model, h=h))
    cols = {"psi_bound": bound}
    for k in FIG1_K:
        s = pe.solve_scattering(model, k, grid, n_bound=n_bound)
        cols[f"psi_k{k:g}"] = np.asarray(pe.modified_scattering(s, alpha_ref, r))
    return r, cols, alpha_ref, grid


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_bind(params: dict, args) -> tuple:
    model = build_model(params)
    h = params.get("h", DEFAULT_STEP)
    rows = []
    grid = None
    if isinstance(model, SeparableModel):
        b = exact.yamaguchi_bound_state(model)
        rows.append(("bound", 0, b.alpha, b.energy, b.n_as, 0))
        if args.virtual:
            raise UnsupportedOperation("virtual-state search needs a local potential")
    else:
        states = find_bound_states(model, h=h)
        grid = states[0].grid if states else None
        for i, b in enumerate(states):
            rows.append(("bound", i, b.alpha, b.energy, b.n_as, b.node_count))
        if args.virtual:
            for i, a in enumerate(find_virtual_states(model, h=h)):
                rows.append(("virtual", i, a, -a * a, None, None))
    header = ["kind", "level", "alpha", "energy", "n_as", "node_count"]
    return header, rows, {**_grid_meta(grid, h), "model": model.describe()}


def cmd_scatter(params: dict, args) -> tuple:
    model = build_model(params)
    (ks,) = _require(params, "k")
    h = params.get("h", DEFAULT_STEP)
    ks = [float(k) for k in ks]
    if any(k <= 0 for k in ks):
        raise DomainError("k values must be positive")
    grid = RadialGrid.for_model(model, h, k=np.array(ks))
    rows = []
    for k in ks:
        s = pe.solve_scattering(model, k, grid)
        sm = s.smatrix
        rows.append((k, s.delta, s.delta_folded, s.winding, sm.real, sm.imag))
    header = ["k", "delta", "delta_folded", "winding", "S_re", "S_im"]
    return header, rows, {**_grid_meta(grid, h), "model": model.describe()}


def _bound_on_common_grid(model, params):
    h = params.get("h", DEFAULT_STEP)
    level = params.get("level", -1)
    samples = params.get("k_samples", list(pe.DEFAULT_K_SAMPLES))
    b0 = pe.solve_bound_state(model, level=level, h=h)
    extra = params.get("k", [])
    grid = pe.common_grid(model, b0.alpha, list(samples) + list(extra), h)
    return pe.solve_bound_state(model, grid, level=level), samples, grid


def cmd_ratio(params: dict, args) -> tuple:
    model = build_model(params)
    b, samples, grid = _bound_on_common_grid(model, params)
    r = params.get("r", list(np.round(np.arange(0.0, 3.0 + 1e-9, 0.05), 10)))
    series = pe.fit_ratio_series(model, b, r, samples)
    rows = list(zip(series.r, series.r1, series.r2, series.r1_err, series.r2_err, series.residual,
                    series.max_deviation))
    meta = {**_grid_meta(grid, grid.h), "model": model.describe(), "alpha": b.alpha, "node_count": b.node_count,
            "k_samples": list(samples)}
    if 0.0 in list(series.r):
        r10 = float(series.r1[list(series.r).index(0.0)])
        meta["R1(0) measured"] = r10
        meta["R1(0) sign"] = "+" if r10 > 0 else "-"
        if model.kind == "SphericalWell":
            report = pe.well_r1_sign_report(model.depth, model.radius, samples, params.get("level", -1),
                                            params.get("h", DEFAULT_STEP))
            meta["R1(0) closed expansion"] = report.formula_value
            meta["sign matches closed expansion"] = report.matches_formula_sign
            meta["sign matches curve ordering at the origin"] = report.matches_ordering_sign
    header = ["r", "R1", "R2", "R1_err", "R2_err", "residual", "max_abs_R_minus_1"]
    return header, rows, meta


def cmd_crossover(params: dict, args) -> tuple:
    model = build_model(params)
    (ks,) = _require(params, "k")
    b, _, grid = _bound_on_common_grid(model, params)
    region = params.get("region", 0)
    rows = []
    for k in ks:
        rows.append((float(k), pe.crossover_radius(model, b, float(k), region=region)))
    meta = {**_grid_meta(grid, grid.h), "model": model.describe(), "alpha": b.alpha, "region": region}
    if all(r is None for _, r in rows):
        meta["note"] = "R(k, r) - 1 keeps one sign in the search interval"
    return ["k", "r_star"], rows, meta


def cmd_coulomb(params: dict, args) -> tuple:
    terms = params.get("terms", coulomb.DEFAULT_TERMS)
    if "kappa" in params:
        scale = coulomb.CoulombScale(params["kappa"])
        (ks,) = _require(params, "k")
        rows = []
        for k in ks:
            pole = coulomb.pole_decomposition(k, scale, terms)
            g = coulomb.gamow_factor(scale.eta(k))
            rows.append((k, scale.eta(k), g, pole.value, abs(g - pole.value), pole.tail_estimate,
                         coulomb.single_pole_relative_error(k, scale)))
        header = ["k", "eta", "gamow", "pole_sum", "residual", "tail_estimate", "single_pole_rel_error"]
        return header, rows, {"terms": terms}
    (etas,) = _require(params, "eta")
    rows = []
    for eta in etas:
        s = coulomb.gamow_series(eta, terms)
        g = coulomb.gamow_factor(eta)
        rows.append((eta, g, s.value, s.value - g, s.tail_estimate))
    return ["eta", "gamow", "series", "difference", "tail_estimate"], rows, {"terms": terms}


def cmd_perturb(params: dict, args) -> tuple:
    model = build_model(params)
    kind = params.get("profile", "well")
    depth = params.get("profile_depth", 1.0)
    size = params.get("profile_size", getattr(model, "radius", 1.0))
    if kind == "well":
        v1 = make_spherical_well(depth, size)
    elif kind == "gaussian":
        v1 = make_gaussian(depth, size)
    else:
        raise ConfigurationError(f"unknown perturbing profile {kind!r}")
    eps = params.get("eps", [0.04, 0.02, 0.01])
    ks = params.get("k", [0.05, 0.1, 0.2, 0.3])
    rep = perturbation.consistency_report(model, v1, eps, ks, params.get("h", DEFAULT_STEP))
    header = ["eps", "dE_pert", "dE_exact", "dE_err", "alpha_pert", "alpha_exact", "alpha_err", "phase_err"]
    meta = {"model": model.describe(), "profile": v1.describe(), "alpha0": rep.alpha0, "k": list(ks)}
    for name, values in rep.ratios.items():
        meta[f"ratio {name}"] = values
    return header, rep.table(), meta


def cmd_fig1(params: dict, args) -> tuple:
    case = params.get("case", 1)
    r, cols, alpha_ref, grid = fig1_table(case, params.get("h", DEFAULT_STEP))
    header = ["r"] + list(cols)
    rows = [[ri] + [None if c is None else c[i] for c in cols.values()] for i, ri in enumerate(r)]
    meta = {**_grid_meta(grid, grid.h), "well_depth": FIG1_DEPTHS[case], "well_radius": 1.0, "alpha_ref": alpha_ref}
    if args.svg:
        title = f"well U0={FIG1_DEPTHS[case]:g}, a=1: psi_alpha and modified scattering functions"
        try:
            Path(args.svg).write_text(render_svg(r, cols, title))
        except OSError as exc:
            raise OSError(f"cannot write {args.svg}: {exc}") from exc
    return header, rows, meta


def cmd_validate(params: dict, args) -> int:
    from . import validation

    results = validation.run_all()
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_OK if not failed else EXIT_NUMERICAL


COMMANDS = {
    "bind": cmd_bind,
    "scatter": cmd_scatter,
    "ratio": cmd_ratio,
    "crossover": cmd_crossover,
    "fig1": cmd_fig1,
    "coulomb": cmd_coulomb,
    "perturb": cmd_perturb,
}


# --------------------------------------------------------------------------
# Argument parsing
# --------------------------------------------------------------------------

def _model_args(p):
    p.add_argument("--potential", choices=["well", "bargmann", "yamaguchi", "tabulated"])
    p.add_argument("--U0", dest="u0", type=float, help="well depth (reduced units)")
    p.add_argument("--a", type=float, help="well radius (default 1)")
    p.add_argument("--beta", type=float)
    p.add_argument("--alphab", type=float, help="bound-state wavenumber of the Bargmann/Yamaguchi model")
    p.add_argument("--table", help="CSV file with columns r,U")


def _common_args(p):
    p.add_argument("--scenario", help="scenario file; flags override its values")
    p.add_argument("--h", type=float, help=f"grid step (default {DEFAULT_STEP:g})")
    p.add_argument("-o", "--output", default="-", help="CSV output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wavepole", description="Scattering wave functions near S-matrix poles.")
    parser.add_argument("--version", action="version", version=f"wavepole {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bind", help="bound (and optionally virtual) states")
    _model_args(p)
    _common_args(p)
    p.add_argument("--virtual", action="store_true", help="also list virtual states")

    p = sub.add_parser("scatter", help="phase shifts and S-matrix on the real axis")
    _model_args(p)
    _common_args(p)
    p.add_argument("--k", help="comma-separated wavenumbers")

    p = sub.add_parser("ratio", help="fitted R1(r), R2(r) of the ratio function")
    _model_args(p)
    _common_args(p)
    p.add_argument("--k-samples", dest="k_samples", help="comma-separated fit wavenumbers")
    p.add_argument("--r", help="comma-separated radii (default 0..3 step 0.05)")
    p.add_argument("--level", type=int, help="bound state index, deepest first (default: shallowest)")

    p = sub.add_parser("crossover", help="radius where R(k, r) = 1")
    _model_args(p)
    _common_args(p)
    p.add_argument("--k", help="comma-separated wavenumbers")
    p.add_argument("--level", type=int)
    p.add_argument("--region", type=int, help="inter-node region of u_alpha to search (default 0)")

    p = sub.add_parser("fig1", help="bound and modified scattering functions of the radius-1 wells")
    _common_args(p)
    p.add_argument("--case", type=int, choices=[1, 2, 3], help="1: U0=2.8, 2: U0=22.547, 3: U0=21.913")
    p.add_argument("--svg", help="also write an SVG line plot here")

    p = sub.add_parser("coulomb", help="Gamow factor, its series and pole decomposition")
    _common_args(p)
    p.add_argument("--eta", help="comma-separated Sommerfeld parameters")
    p.add_argument("--terms", type=int, help=f"series terms (default {coulomb.DEFAULT_TERMS})")
    p.add_argument("--kappa", type=float, help="Coulomb wavenumber scale; switches to the pole decomposition in k")
    p.add_argument("--k", help="comma-separated wavenumbers (with --kappa)")

    p = sub.add_parser("perturb", help="first-order shifts against exact re-solves")
    _model_args(p)
    _common_args(p)
    p.add_argument("--profile", choices=["well", "gaussian"])
    p.add_argument("--profile-depth", dest="profile_depth", type=float)
    p.add_argument("--profile-size", dest="profile_size", type=float, help="radius (well) or width (gaussian)")
    p.add_argument("--eps", help="comma-separated scale factors")
    p.add_argument("--k", help="comma-separated wavenumbers")

    sub.add_parser("validate", help="run the acceptance checks")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "validate":
            return cmd_validate({}, args)
        params = resolve(args)
        header, rows, meta = COMMANDS[args.command](params, args)
        emit(render_csv(args.command, params, header, rows, meta), args.output)
        data = [r for r in rows if any(v is not None for v in list(r)[1:])]
        if not data:
            raise EmptyResult()
        return EXIT_OK
    except EmptyResult:
        print(f"wavepole {args.command}: empty result", file=sys.stderr)
        return EXIT_EMPTY
    except (NumericalFailure, FitError, NodeSingularityError, NearPoleError) as exc:
        print(f"wavepole {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"wavepole {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, DomainError, UnsupportedOperation, configparser.Error, ValueError) as exc:
        print(f"wavepole {args.command}: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
