"""Command-line front end: sweeps, dynamics runs, regime maps, figure bundles.

Output contract: every CSV starts with a '# meta: {...}' JSON comment
line (version, command, parameters, thresholds), then a header row,
then data rows with floats printed as 17-significant-digit lowercase
scientific.  Identical configuration produces byte-identical output.

Exit codes: 0 ok, 2 configuration error, 3 degenerate parameters,
4 integration failure.  The RINGSTIR_THREADS environment variable caps
the number of worker threads used for grid evaluation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import StepControl, SweepProtocol, adiabaticity_classify, propagate
from .errors import (
    DegenerateSpectrumError,
    DegenerateSplittingError,
    PropagationError,
    RingstirError,
    ZeroC0Error,
)
from .model import RingParams
from .spectral import eigenvalues_trig, ground_state
from .transport import conductance_exact, conductance_numeric, integrated_current, q_infinity
from .twolevel import (
    RegimeLabel,
    Scheme,
    approx_conductance,
    classify_regime,
    dark_state_params,
    metamorphosis_point,
    shifted_params,
    simple_params,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DEGENERATE = 3
EXIT_INTEGRATION = 4

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#000000", "#9467bd", "#ff7f0e")


class ConfigError(RingstirError):
    """Invalid command-line or config-file input."""


# ---------------------------------------------------------------------------
# formatting and output


def _fmt(x) -> str:
    return f"{float(x) + 0.0:.16e}"  # + 0.0 folds IEEE -0.0 into +0.0


def _meta(command: str, **fields) -> dict:
    meta = {"version": __version__, "command": command}
    meta.update(fields)
    return meta


def _meta_line(meta: dict) -> str:
    return "# meta: " + json.dumps(meta, sort_keys=True, separators=(",", ":"))


def _emit(out: str | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


def _render_table(meta: dict, header: list[str], rows, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "meta": meta,
            "columns": header,
            "data": [[cell if isinstance(cell, str) else float(cell) for cell in row]
                     for row in rows],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    lines = [_meta_line(meta), ",".join(header)]
    for row in rows:
        lines.append(",".join(cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parallel grid evaluation


def _workers() -> int:
    raw = os.environ.get("RINGSTIR_THREADS", "").strip()
    if not raw:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"RINGSTIR_THREADS must be an integer, got {raw!r}") from exc
    return max(1, n)


def _parallel_map(fn, items):
    """Order-preserving map over grid points, capped by RINGSTIR_THREADS."""
    workers = _workers()
    items = list(items)
    if workers == 1 or len(items) < 8:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# SVG plotting (hand-rolled polylines; no plotting dependency)


def _svg_plot(path: str, curves, title: str, xlabel: str, ylabel: str) -> None:
    """curves: sequence of (label, x array, y array)."""
    W, H = 720, 480
    ml, mr, mt, mb = 72, 24, 36, 52
    xs = np.concatenate([np.asarray(c[1], dtype=float) for c in curves])
    ys = np.concatenate([np.asarray(c[2], dtype=float) for c in curves])
    good = np.isfinite(xs) & np.isfinite(ys)
    if not np.any(good):
        raise ConfigError("nothing finite to plot")
    x_lo, x_hi = float(xs[good].min()), float(xs[good].max())
    y_lo, y_hi = float(ys[good].min()), float(ys[good].max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad

    def px(x):
        return ml + (x - x_lo) / (x_hi - x_lo) * (W - ml - mr)

    def py(y):
        return H - mb - (y - y_lo) / (y_hi - y_lo) * (H - mt - mb)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" '
        f'viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
        f'<text x="{W/2:.1f}" y="{mt - 12}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="14">{title}</text>',
    ]
    # axes box and ticks
    parts.append(
        f'<rect x="{ml}" y="{mt}" width="{W-ml-mr}" height="{H-mt-mb}" '
        'fill="none" stroke="black" stroke-width="1"/>'
    )
    for i in range(6):
        xv = x_lo + (x_hi - x_lo) * i / 5
        yv = y_lo + (y_hi - y_lo) * i / 5
        parts.append(
            f'<line x1="{px(xv):.2f}" y1="{H-mb}" x2="{px(xv):.2f}" y2="{H-mb+5}" '
            'stroke="black"/>'
        )
        parts.append(
            f'<text x="{px(xv):.2f}" y="{H-mb+18}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xv:.6g}</text>'
        )
        parts.append(
            f'<line x1="{ml-5}" y1="{py(yv):.2f}" x2="{ml}" y2="{py(yv):.2f}" '
            'stroke="black"/>'
        )
        parts.append(
            f'<text x="{ml-8}" y="{py(yv)+4:.2f}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.6g}</text>'
        )
    parts.append(
        f'<text x="{(ml + W - mr)/2:.1f}" y="{H-14}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12">{xlabel}</text>'
    )
    parts.append(
        f'<text x="18" y="{(mt + H - mb)/2:.1f}" text-anchor="middle" '
        f'font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 18 {(mt + H - mb)/2:.1f})">{ylabel}</text>'
    )
    for k, (label, cx, cy) in enumerate(curves):
        color = _PALETTE[k % len(_PALETTE)]
        cx = np.asarray(cx, dtype=float)
        cy = np.asarray(cy, dtype=float)
        keep = np.isfinite(cx) & np.isfinite(cy)
        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(cx[keep], cy[keep]))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.2"/>'
        )
        parts.append(
            f'<text x="{W-mr-6}" y="{mt + 16 + 14*k}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11" fill="{color}">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(parts) + "\n")


# ---------------------------------------------------------------------------
# argument handling


_CONVERTERS = {
    "c0": float, "c1": float, "c2": float,
    "u_min": float, "u_max": float, "n": int,
    "u_dot": float, "tol": float, "rho": float, "sharpness": float,
    "c1_max": float, "c2_max": float,
    "out": str, "format": str, "which": str, "svg": str,
}


def _apply_config(args: argparse.Namespace) -> None:
    """key=value file given via --config; entries override parsed flags."""
    if not getattr(args, "config", None):
        return
    try:
        text = Path(args.config).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{args.config}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _CONVERTERS or not hasattr(args, key):
            raise ConfigError(f"{args.config}:{lineno}: unknown key {key!r}")
        try:
            setattr(args, key, _CONVERTERS[key](value))
        except ValueError as exc:
            raise ConfigError(f"{args.config}:{lineno}: bad value for {key}: {value!r}") from exc


def _ring_params(args) -> RingParams:
    try:
        return RingParams(args.c0, args.c1, args.c2)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _grid(args) -> np.ndarray:
    if args.n < 2:
        raise ConfigError("n must be at least 2")
    if not args.u_min < args.u_max:
        raise ConfigError("u-min must be below u-max")
    return np.linspace(args.u_min, args.u_max, args.n)


# ---------------------------------------------------------------------------
# commands


def cmd_spectrum(args) -> int:
    params = _ring_params(args)
    grid = _grid(args)
    rows = _parallel_map(
        lambda u: (u, *(eigenvalues_trig(params, u).energies)), grid
    )
    meta = _meta("spectrum", c0=params.c0, c1=params.c1, c2=params.c2,
                 u_min=args.u_min, u_max=args.u_max, n=args.n)
    _emit(args.out, _render_table(meta, ["u", "E_g", "E_d", "E_e"], rows, args.format))
    return EXIT_OK


def _scheme_metadata(params: RingParams, rho: float, sharpness: float) -> dict:
    """Regime, splitting ratio, crossing/metamorphosis scales for sidecars."""
    regime = classify_regime(params, rho=rho, sharpness_threshold=sharpness)
    lam = q_infinity(params)
    if regime.label is RegimeLabel.DARK_STATE_EXACT:
        u_c = 0.0
        u_m = None
    elif regime.label is RegimeLabel.SIMPLE_TWO_LEVEL:
        u_c = simple_params(params).u_c
        u_m = metamorphosis_point(params).u_m
    elif regime.label is RegimeLabel.SHIFTED_TWO_LEVEL:
        u_c = shifted_params(params).u_c
        u_m = metamorphosis_point(params).u_m
    else:
        # metamorphosis regime: the dressed shift is outside its validity,
        # so the overlay crossing is the zero-c0 one at u_c = 0
        u_c = 0.0
        u_m = metamorphosis_point(params).u_m
    out = {
        "regime": regime.label.value,
        "lambda": lam,
        "u_c": u_c,
        "u_m": u_m,
        "thresholds": {"rho": rho, "sharpness": sharpness},
    }
    if u_m is not None:
        # two published candidates for the crossing-to-metamorphosis
        # separation: measured from the bare crossing -c0 or from the
        # zero-c0 crossing at 0; both are reported, neither is preferred
        out["separation_candidates"] = {
            "from_minus_c0": u_m + params.c0,
            "from_zero": u_m,
        }
    return out


def cmd_sweep(args) -> int:
    params = _ring_params(args)
    grid = _grid(args)
    scheme_meta = _scheme_metadata(params, args.rho, args.sharpness)

    g_exact = conductance_exact(params, grid)
    q_vals = integrated_current(params, grid)

    def point(i):
        u = float(grid[i])
        occ = ground_state(params, u).occupations
        g_num = conductance_numeric(params, u)
        return (u, g_exact[i], g_num, q_vals[i], occ[0], occ[1], occ[2])

    rows = _parallel_map(point, range(len(grid)))
    max_gap = max(
        abs(r[1] - r[2]) / max(1.0, abs(r[1])) for r in rows
    )
    meta = _meta("sweep", c0=params.c0, c1=params.c1, c2=params.c2,
                 u_min=args.u_min, u_max=args.u_max, n=args.n,
                 oracle_max_rel_gap=max_gap, **scheme_meta)
    header = ["u", "G_exact", "G_numeric", "Q", "p0", "p1", "p2"]
    _emit(args.out, _render_table(meta, header, rows, args.format))
    if args.out is not None:
        sidecar = dict(scheme_meta)
        sidecar["version"] = __version__
        sidecar["params"] = {"c0": params.c0, "c1": params.c1, "c2": params.c2}
        with open(args.out + ".meta.json", "w", newline="\n") as fh:
            json.dump(sidecar, fh, sort_keys=True, indent=2)
            fh.write("\n")
    return EXIT_OK


def cmd_dynamics(args) -> int:
    params = _ring_params(args)
    if args.n < 2:
        raise ConfigError("n must be at least 2")
    try:
        protocol = SweepProtocol(u_dot=args.u_dot, u_start=args.u_min, u_end=args.u_max)
        control = StepControl(tol=args.tol)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    trace = propagate(params, protocol, control, n_samples=args.n)
    regime = adiabaticity_classify(params, args.u_dot)
    rows = [
        (trace.t[i], trace.u[i], trace.current[i] / trace.u_dot, trace.q_dyn[i],
         *trace.occupations[i])
        for i in range(len(trace.t))
    ]
    meta = _meta("dynamics", c0=params.c0, c1=params.c1, c2=params.c2,
                 u_min=args.u_min, u_max=args.u_max, u_dot=args.u_dot,
                 tol=args.tol, n=args.n,
                 adiabaticity=regime.value,
                 q_final=trace.q_final,
                 max_norm_drift=trace.max_norm_drift,
                 steps_accepted=trace.n_accepted,
                 steps_rejected=trace.n_rejected)
    header = ["t", "u", "I_over_udot", "Q_dyn", "p0", "p1", "p2"]
    _emit(args.out, _render_table(meta, header, rows, args.format))
    return EXIT_OK


def cmd_regimes(args) -> int:
    try:
        c0 = float(args.c0)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if args.n < 2:
        raise ConfigError("n must be at least 2")
    if args.c1_max <= 0 or args.c2_max <= 0:
        raise ConfigError("c1-max and c2-max must be positive")
    c1_grid = np.linspace(0.0, args.c1_max, args.n)
    c2_grid = np.linspace(0.0, args.c2_max, args.n)

    def classify_point(pair):
        c1, c2 = pair
        params = RingParams(c0, c1, c2)
        if c0 != 0.0 and c1 == c2:
            # splitting ratio diverges on the diagonal
            u_m = c1 * c2 / c0
            return (c1, c2, "degenerate", math.nan, u_m)
        label = classify_regime(params, rho=args.rho,
                                sharpness_threshold=args.sharpness).label.value
        try:
            lam = q_infinity(params)
        except RingstirError:
            lam = math.nan
        u_m = c1 * c2 / c0 if c0 != 0.0 else math.nan
        return (c1, c2, label, lam, u_m)

    pairs = [(float(a), float(b)) for a in c1_grid for b in c2_grid]
    rows = _parallel_map(classify_point, pairs)
    meta = _meta("regimes", c0=c0, c1_max=args.c1_max, c2_max=args.c2_max,
                 n=args.n, rho=args.rho, sharpness=args.sharpness)
    header = ["c1", "c2", "regime_label", "lambda", "u_m"]
    _emit(args.out, _render_table(meta, header, rows, args.format))
    if args.svg:
        # one polyline per regime boundary is overkill; mark rows by
        # regime index on a scatter-like polyline per c1 column
        label_codes = sorted({r[2] for r in rows})
        curves = []
        for code in label_codes:
            pts = [(r[0], r[1]) for r in rows if r[2] == code]
            if pts:
                xs, ys = zip(*pts)
                curves.append((code, np.array(xs), np.array(ys)))
        _svg_plot(args.svg, curves, f"coupling-plane regimes (c0={c0:g})", "c1", "c2")
    return EXIT_OK


# figure bundles: parameter sets and grids are fixed so reruns are
# byte-identical


_FIG2_SETS = ((0.2, 0.15), (5.0, 4.3), (19.0, 17.0), (19.0, -17.0))


def _figure_fig2(out_dir: Path, fmt: str):
    grid = np.linspace(-800.0, 800.0, 3201)
    curves = []
    for c1, c2 in _FIG2_SETS:
        params = RingParams(1.0, c1, c2)
        q_vals = integrated_current(params, grid)
        name = f"fig2_q_c1_{c1:g}_c2_{c2:g}".replace("-", "m").replace(".", "p")
        meta = _meta("figures", figure="fig2", c0=1.0, c1=c1, c2=c2,
                     **_scheme_metadata(params, 0.5, 0.2))
        rows = list(zip(grid, q_vals))
        _emit(str(out_dir / f"{name}.csv"), _render_table(meta, ["u", "Q"], rows, fmt))
        curves.append((f"(c1,c2)=({c1:g},{c2:g})", grid, q_vals))
    _svg_plot(str(out_dir / "fig2.svg"), curves,
              "integrated charge during the sweep (c0=1)", "u", "Q")


_FIG4_SETS = (
    ((0.2, 0.15), (-3.0, 1.0, 1601), Scheme.SIMPLE),
    ((5.0, 4.3), (-30.0, 70.0, 2001), Scheme.SHIFTED),
)


def _figure_fig4(out_dir: Path, fmt: str):
    for idx, ((c1, c2), (lo, hi, n), scheme) in enumerate(_FIG4_SETS, start=1):
        params = RingParams(1.0, c1, c2)
        grid = np.linspace(lo, hi, n)
        spect = np.array([eigenvalues_trig(params, u).energies for u in grid])
        meta = _meta("figures", figure="fig4", panel=f"a{idx}", c0=1.0, c1=c1, c2=c2)
        rows = [(grid[i], *spect[i]) for i in range(len(grid))]
        _emit(str(out_dir / f"fig4_a{idx}_spectrum.csv"),
              _render_table(meta, ["u", "E_g", "E_d", "E_e"], rows, fmt))

        tl = simple_params(params) if scheme is Scheme.SIMPLE else shifted_params(params)
        g_ex = conductance_exact(params, grid)
        g_ap = approx_conductance(tl, grid)
        meta = _meta("figures", figure="fig4", panel=f"b{idx}", c0=1.0, c1=c1, c2=c2,
                     scheme=tl.scheme.value, lam=tl.lam, C_eff=tl.C_eff,
                     u_c=tl.u_c, alpha=tl.alpha)
        rows = [(grid[i], g_ex[i], g_ap[i]) for i in range(len(grid))]
        _emit(str(out_dir / f"fig4_b{idx}_conductance.csv"),
              _render_table(meta, ["u", "G_exact", "G_approx"], rows, fmt))
        _svg_plot(str(out_dir / f"fig4_b{idx}.svg"),
                  [("exact", grid, g_ex), (tl.scheme.value, grid, g_ap)],
                  f"conductance, (c1,c2)=({c1:g},{c2:g})", "u", "G")


def _figure_fig5(out_dir: Path, fmt: str):
    params = RingParams(1.0, 19.0, 15.0)
    grid = np.linspace(-50.0, 650.0, 1401)
    spect = np.array([eigenvalues_trig(params, u).energies for u in grid])
    meta = _meta("figures", figure="fig5", panel="a", c0=1.0, c1=19.0, c2=15.0)
    rows = [(grid[i], *spect[i]) for i in range(len(grid))]
    _emit(str(out_dir / "fig5_a_spectrum.csv"),
          _render_table(meta, ["u", "E_g", "E_d", "E_e"], rows, fmt))

    g_ex = conductance_exact(params, grid)
    dark = dark_state_params(RingParams(0.0, 19.0, 15.0))
    g_dark = approx_conductance(dark, grid)
    meta = _meta("figures", figure="fig5", panel="b", c0=1.0, c1=19.0, c2=15.0,
                 **_scheme_metadata(params, 0.5, 0.2))
    rows = [(grid[i], g_ex[i], g_dark[i]) for i in range(len(grid))]
    _emit(str(out_dir / "fig5_b_conductance.csv"),
          _render_table(meta, ["u", "G_exact", "G_dark"], rows, fmt))

    curves = [("adiabatic", grid, g_ex), ("zero-c0", grid, g_dark)]
    for u_dot in (2.0, 50.0):
        protocol = SweepProtocol(u_dot=u_dot, u_start=-200.0, u_end=650.0)
        trace = propagate(params, protocol, StepControl(tol=1e-6), n_samples=1401)
        meta = _meta("figures", figure="fig5", panel="b", c0=1.0, c1=19.0, c2=15.0,
                     u_dot=u_dot, q_final=trace.q_final)
        rows = [
            (trace.u[i], trace.current[i] / u_dot, trace.q_dyn[i])
            for i in range(len(trace.u))
        ]
        _emit(str(out_dir / f"fig5_b_dynamics_udot{u_dot:g}.csv"),
              _render_table(meta, ["u", "I_over_udot", "Q_dyn"], rows, fmt))
        curves.append((f"u_dot={u_dot:g}", trace.u, trace.current / u_dot))
    _svg_plot(str(out_dir / "fig5_b.svg"), curves,
              "bond 0-1 current per unit sweep rate", "u", "I/u_dot")

    occ = np.array([ground_state(params, u).occupations for u in grid])
    meta = _meta("figures", figure="fig5", panel="c", c0=1.0, c1=19.0, c2=15.0)
    rows = [(grid[i], occ[i, 0], occ[i, 1], occ[i, 2]) for i in range(len(grid))]
    _emit(str(out_dir / "fig5_c_occupations.csv"),
          _render_table(meta, ["u", "p0", "p1", "p2"], rows, fmt))
    _svg_plot(str(out_dir / "fig5_c.svg"),
              [("p0", grid, occ[:, 0]), ("p1", grid, occ[:, 1]), ("p2", grid, occ[:, 2])],
              "adiabatic occupations", "u", "p")


def cmd_figures(args) -> int:
    out_dir = Path(args.out or ".")
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.which == "fig2":
        _figure_fig2(out_dir, args.format)
    elif args.which == "fig4":
        _figure_fig4(out_dir, args.format)
    elif args.which == "fig5":
        _figure_fig5(out_dir, args.format)
    else:
        raise ConfigError(f"unknown figure id {args.which!r} (use fig2, fig4, or fig5)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringstir",
        description="Adiabatic transport in a driven three-site ring: "
                    "spectra, conductance sweeps, dynamics, regime maps, figures.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    def common(p, dynamics=False):
        p.add_argument("--c0", type=float, default=1.0, help="intra-wire coupling")
        p.add_argument("--c1", type=float, default=0.2, help="dot coupling, bond 0-1")
        p.add_argument("--c2", type=float, default=0.15, help="dot coupling, bond 0-2")
        p.add_argument("--u-min", dest="u_min", type=float, default=-10.0)
        p.add_argument("--u-max", dest="u_max", type=float, default=10.0)
        p.add_argument("--n", type=int, default=1001,
                       help="grid points (samples for dynamics)")
        p.add_argument("--out", default=None, help="output path (stdout if omitted)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--config", default=None,
                       help="key=value file; entries override flags")
        if dynamics:
            p.add_argument("--u-dot", dest="u_dot", type=float, default=1.0,
                           help="sweep rate")
            p.add_argument("--tol", type=float, default=1e-8,
                           help="local error per unit time")

    p_spec = sub.add_parser("spectrum", help="adiabatic energies over a u grid")
    common(p_spec)

    p_sweep = sub.add_parser("sweep", help="conductance, charge, occupations over u")
    common(p_sweep)
    p_sweep.add_argument("--rho", type=float, default=0.5,
                         help="two-level validity threshold |c+-|/|c0|")
    p_sweep.add_argument("--sharpness", type=float, default=0.2,
                         help="metamorphosis sharpness threshold")

    p_dyn = sub.add_parser("dynamics", help="time-dependent sweep propagation")
    common(p_dyn, dynamics=True)

    p_reg = sub.add_parser("regimes", help="regime map over the (c1, c2) plane")
    p_reg.add_argument("--c0", type=float, default=1.0)
    p_reg.add_argument("--c1-max", dest="c1_max", type=float, default=3.0)
    p_reg.add_argument("--c2-max", dest="c2_max", type=float, default=3.0)
    p_reg.add_argument("--n", type=int, default=61, help="grid points per axis")
    p_reg.add_argument("--rho", type=float, default=0.5)
    p_reg.add_argument("--sharpness", type=float, default=0.2)
    p_reg.add_argument("--out", default=None)
    p_reg.add_argument("--format", choices=("csv", "json"), default="csv")
    p_reg.add_argument("--svg", default=None, help="optional SVG map path")
    p_reg.add_argument("--config", default=None)

    p_fig = sub.add_parser("figures", help="reference figure data bundles")
    p_fig.add_argument("which", choices=("fig2", "fig4", "fig5"),
                       help="which bundle to emit")
    p_fig.add_argument("--out", default=None, help="output directory")
    p_fig.add_argument("--format", choices=("csv", "json"), default="csv")
    p_fig.add_argument("--config", default=None)
    return parser


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "sweep": cmd_sweep,
    "dynamics": cmd_dynamics,
    "regimes": cmd_regimes,
    "figures": cmd_figures,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args)
        return _DISPATCH[args.cmd](args)
    except ConfigError as exc:
        print(f"ringstir: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateSplittingError, DegenerateSpectrumError, ZeroC0Error) as exc:
        print(f"ringstir: degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PropagationError as exc:
        print(f"ringstir: integration failure: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION


if __name__ == "__main__":
    sys.exit(main())
