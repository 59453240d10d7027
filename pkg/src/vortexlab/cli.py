"""Command-line front end: presets, field exports, sweeps and validation.

Subcommands
-----------
field       sample a beam on a grid; write CSV + PNG + rendered figure +
            JSON visibility report (``--preset all`` batches all presets
            and writes an index file)
visibility  visibility report only (JSON)
sweep       visibility along a parameter sweep (CSV + JSON index)
scaling     ring-radius scaling of the paraxial scalar model over ell
validate    run the residual check suite; exit 1 on any failure
presets     list the named presets

Exit codes: 0 success, 1 check/validation failure, 2 usage error.
Physical units are spelled in the flag names (``--w0-um``,
``--lambda-nm``, ``--omega-hz``); conversion happens in one place.  The
``VORTEXLAB_THREADS`` environment variable caps grid-evaluation workers.
A JSON configuration file (``--config``) may supply the same settings;
explicit flags override file values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import analyze_beam, find_r_max, scaling_fit
from .gridio import GridSpec, sample_grid, write_csv, write_figure, write_png, write_report
from .potentials import ParaxialLGParams, ParaxialScalarBeam, SuperpositionSpec
from .presets import (
    PRESETS,
    PresetError,
    SPECIES_BUILDERS,
    build_beam,
    build_electron,
    build_gw,
    build_photon,
    preset_names,
)
from .validation import ValidationConfig, run_negative_controls, run_standard_suite

__all__ = ["main", "entrypoint"]

_CONFIG_KEYS = {"species", "preset", "params", "grid", "outdir", "sweep", "weighting"}
_PARAM_KEYS = {
    "photon": {"ell", "w0_um", "lambda_nm", "w0_lambda", "sigma"},
    "electron": {"ell", "b", "gamma"},
    "gw": {"ell", "w0_lambda", "omega_hz", "sigma"},
}


class UsageError(Exception):
    """Configuration problems that should exit with code 2."""


# ---------------------------------------------------------------------------
# Configuration assembly
# ---------------------------------------------------------------------------

def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}")
    if not isinstance(raw, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(raw) - _CONFIG_KEYS
    if unknown:
        raise UsageError(
            f"unknown config keys: {', '.join(sorted(unknown))}; "
            f"valid keys: {', '.join(sorted(_CONFIG_KEYS))}"
        )
    return raw


def _collect_params(args: argparse.Namespace, config: dict) -> dict:
    """Explicit beam parameters from config file and flags (flags win)."""
    params = dict(config.get("params") or {})
    for key, flag in [
        ("ell", "l"),
        ("w0_um", "w0_um"),
        ("lambda_nm", "lambda_nm"),
        ("w0_lambda", "w0_lambda"),
        ("omega_hz", "omega_hz"),
        ("b", "b"),
        ("gamma", "gamma"),
        ("sigma", "sigma"),
    ]:
        value = getattr(args, flag, None)
        if value is not None:
            params[key] = value
    return params


def _resolve_beam(args: argparse.Namespace, config: dict):
    """Beam + name from preset or explicit parameters (mutually exclusive)."""
    preset = getattr(args, "preset", None) or config.get("preset")
    species = getattr(args, "species", None) or config.get("species")
    weighting = getattr(args, "weighting", None) or config.get("weighting") or "cos"
    params = _collect_params(args, config)

    if preset and params:
        raise UsageError("give either a preset or explicit parameters, not both")
    if preset:
        try:
            return build_beam(preset, weighting=weighting), preset
        except PresetError as exc:
            raise UsageError(str(exc.args[0]))
    if not species:
        raise UsageError("need --preset or --species with parameters")
    if species not in SPECIES_BUILDERS:
        raise UsageError(
            f"unknown species {species!r}; valid species: {', '.join(SPECIES_BUILDERS)}"
        )
    unknown = set(params) - _PARAM_KEYS[species]
    if unknown:
        raise UsageError(
            f"parameters {sorted(unknown)} are not valid for species {species!r}; "
            f"valid: {sorted(_PARAM_KEYS[species])}"
        )
    if "ell" not in params:
        raise UsageError("explicit parameters need --l (topological charge)")
    builder = SPECIES_BUILDERS[species]
    try:
        beam = builder(**params, weighting=weighting)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad parameters for {species}: {exc}")
    return beam, f"{species}_custom"


def _resolve_grid(args: argparse.Namespace, config: dict, beam) -> GridSpec:
    grid_cfg = dict(config.get("grid") or {})
    kind = getattr(args, "grid", None) or grid_cfg.get("kind") or "cartesian"
    res = getattr(args, "resolution", None) or grid_cfg.get("resolution")
    if res is None:
        resolution = (512, 512) if kind == "cartesian" else (192, 64 * beam.ell)
    elif isinstance(res, str):
        try:
            n0, _, n1 = res.partition("x")
            resolution = (int(n0), int(n1))
        except ValueError:
            raise UsageError(f"bad resolution {res!r}; expected e.g. 512x512")
    else:
        resolution = (int(res[0]), int(res[1]))
    ring = math.sqrt(beam.ell / 2.0)
    extent = getattr(args, "extent", None) or grid_cfg.get("half_extent") or 2.0 * ring
    try:
        if kind == "cartesian":
            return GridSpec(kind="cartesian", half_extent=float(extent), resolution=resolution)
        r_min = getattr(args, "r_min", None) or grid_cfg.get("r_min") or 0.05
        return GridSpec(
            kind="polar", r_min=float(r_min), r_max=float(extent), resolution=resolution
        )
    except ValueError as exc:
        raise UsageError(f"bad grid: {exc}")


def _outdir(args: argparse.Namespace, config: dict) -> Path:
    out = getattr(args, "outdir", None) or config.get("outdir") or "out"
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def _export_field(beam, name: str, grid_spec: GridSpec, outdir: Path, colormap: str) -> dict:
    report = analyze_beam(beam)
    grid = sample_grid(beam, grid_spec)
    csv_path = outdir / f"{name}_intensity.csv"
    png_path = outdir / f"{name}_intensity.png"
    fig_path = outdir / f"{name}_figure.png"
    report_path = outdir / f"{name}_report.json"
    write_csv(grid, csv_path)
    write_png(grid, png_path, colormap=colormap)
    write_figure(grid, fig_path, colormap=colormap)
    write_report(report, report_path)
    print(
        f"{name}: vis={report.vis:.4f} r_max={report.r_max:.6g} "
        f"fringes={report.fringe_count} -> {csv_path}, {png_path}, {fig_path}, {report_path}"
    )
    return {
        "vis": report.vis,
        "r_max": report.r_max,
        "fringe_count": report.fringe_count,
        "files": [p.name for p in (csv_path, png_path, fig_path, report_path)],
    }


def cmd_field(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    outdir = _outdir(args, config)
    if (getattr(args, "preset", None) or config.get("preset")) == "all":
        index = {}
        for name in preset_names():
            beam = build_beam(name, weighting=args.weighting or "cos")
            grid_spec = _resolve_grid(args, config, beam)
            index[name] = _export_field(beam, name, grid_spec, outdir, args.colormap)
        index_path = outdir / "index.json"
        index_path.write_text(json.dumps({"presets": index}, indent=2) + "\n", encoding="utf-8")
        print(f"index -> {index_path}")
        return 0
    beam, name = _resolve_beam(args, config)
    grid_spec = _resolve_grid(args, config, beam)
    _export_field(beam, name, grid_spec, outdir, args.colormap)
    return 0


def cmd_visibility(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    beam, name = _resolve_beam(args, config)
    report = analyze_beam(beam)
    text = report.to_json()
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
        print(f"{name}: vis={report.vis:.4f} -> {args.output}")
    else:
        print(text)
    return 0


_SWEEPABLE = ("w0", "b", "gamma", "l")


def _sweep_beams(param: str, values: list[float], args, config: dict):
    weighting = getattr(args, "weighting", None) or config.get("weighting") or "cos"
    base = _collect_params(args, config)
    species = getattr(args, "species", None) or config.get("species")
    ell = int(base.get("ell", 15))
    for value in values:
        if param == "w0":
            if species == "gw":
                yield value, build_gw(
                    ell=ell,
                    w0_lambda=value,
                    omega_hz=base.get("omega_hz", 150.0),
                    weighting=weighting,
                )
            else:
                yield value, build_photon(ell=ell, w0_lambda=value, weighting=weighting)
        elif param == "b":
            yield value, build_electron(
                ell=ell, b=value, gamma=base.get("gamma", 1.9), weighting=weighting
            )
        elif param == "gamma":
            yield value, build_electron(
                ell=ell, b=base.get("b", 1500.0), gamma=value, weighting=weighting
            )
        elif param == "l":
            params = ParaxialLGParams(ell=int(value), w0=1.0)
            yield value, ParaxialScalarBeam(
                params, SuperpositionSpec.cosine(int(value))
            )


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    sweep_cfg = dict(config.get("sweep") or {})
    param = args.param or sweep_cfg.get("param")
    if param not in _SWEEPABLE:
        raise UsageError(f"sweep parameter must be one of {', '.join(_SWEEPABLE)}")
    raw_values = args.values or sweep_cfg.get("values")
    if not raw_values:
        raise UsageError("sweep needs --values v1,v2,...")
    if isinstance(raw_values, str):
        try:
            values = [float(tok) for tok in raw_values.split(",")]
        except ValueError:
            raise UsageError(f"bad sweep values {raw_values!r}")
    else:
        values = [float(v) for v in raw_values]

    outdir = _outdir(args, config)
    rows = []
    for value, beam in _sweep_beams(param, values, args, config):
        report = analyze_beam(beam)
        rows.append((value, report.r_max, report.vis))
        print(f"{param}={value:g}: r_max={report.r_max:.6g} vis={report.vis:.4f}")

    csv_path = outdir / f"sweep_{param}.csv"
    lines = [f"# param={param}", "# columns=value,r_max,vis"]
    lines += [f"{repr(v)},{repr(r)},{repr(vis)}" for v, r, vis in rows]
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    index = {
        "param": param,
        "rows": [{"value": v, "r_max": r, "vis": vis} for v, r, vis in rows],
    }
    if param == "l" and len(rows) >= 4:
        index["scaling_exponent"] = scaling_fit([(v, r) for v, r, _ in rows])
    json_path = outdir / f"sweep_{param}.json"
    json_path.write_text(json.dumps(index, indent=2) + "\n", encoding="utf-8")
    print(f"-> {csv_path}, {json_path}")
    return 0


def cmd_scaling(args: argparse.Namespace) -> int:
    config = _load_config(args.config)
    values = [int(v) for v in (args.values or "5,10,20,40").split(",")]
    outdir = _outdir(args, config)
    pairs = []
    for ell in values:
        beam = ParaxialScalarBeam(
            ParaxialLGParams(ell=ell, w0=1.0), SuperpositionSpec.cosine(ell)
        )
        loc = find_r_max(beam.intensity, ell, 1.0)
        expected = math.sqrt(ell / 2.0)
        pairs.append((ell, loc.r_max))
        print(
            f"ell={ell}: r_max={loc.r_max:.6f} (w0 sqrt(ell/2)={expected:.6f}, "
            f"rel err {abs(loc.r_max - expected) / expected:.2e})"
        )
    exponent = scaling_fit(pairs)
    print(f"log-log scaling exponent: {exponent:.4f}")
    csv_path = outdir / "scaling.csv"
    lines = ["# columns=ell,r_max", *(f"{ell},{repr(r)}" for ell, r in pairs)]
    csv_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    json_path = outdir / "scaling.json"
    json_path.write_text(
        json.dumps({"exponent": exponent, "pairs": pairs}, indent=2) + "\n",
        encoding="utf-8",
    )
    print(f"-> {csv_path}, {json_path}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    config = ValidationConfig()
    for spec in args.threshold or []:
        name, _, value = spec.partition("=")
        try:
            config = config.with_threshold(name.strip(), float(value))
        except (KeyError, ValueError):
            raise UsageError(
                f"bad threshold {spec!r}; use name=value with name in "
                "dalembert, divergence, evolution, steuernagel, paraxial"
            )

    reports = run_standard_suite(config)
    ok = True
    print(f"{'check':34s} {'residual':>12s} {'threshold':>10s}  status")
    for rep in reports:
        status = "PASS" if rep.passed else "FAIL"
        ok = ok and rep.passed
        print(f"{rep.name:34s} {rep.max_residual:12.3e} {rep.threshold:10.0e}  {status}")

    if args.negative_controls:
        for rep in run_negative_controls(config):
            status = "expected-fail" if rep.as_designed else "UNEXPECTED-PASS"
            ok = ok and rep.as_designed
            print(f"{rep.name:34s} {rep.max_residual:12.3e} {rep.threshold:10.0e}  {status}")

    return 0 if ok else 1


def cmd_presets(args: argparse.Namespace) -> int:
    for name, preset in PRESETS.items():
        print(f"{name}: {preset.description}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def _add_beam_flags(parser: argparse.ArgumentParser, with_preset: bool = True) -> None:
    if with_preset:
        parser.add_argument("--preset", help="named preset (see `presets`); 'all' batches every preset")
    parser.add_argument("--species", choices=tuple(SPECIES_BUILDERS), help="beam species for explicit parameters")
    parser.add_argument("--l", type=int, help="topological charge magnitude")
    parser.add_argument("--w0-um", dest="w0_um", type=float, help="waist in micrometers (photon)")
    parser.add_argument("--lambda-nm", dest="lambda_nm", type=float, help="wavelength in nanometers (photon)")
    parser.add_argument("--w0-lambda", dest="w0_lambda", type=float, help="waist in wavelengths (photon/gw)")
    parser.add_argument("--omega-hz", dest="omega_hz", type=float, help="mean frequency in hertz (gw)")
    parser.add_argument("--b", type=float, help="dimensionless packet width (electron)")
    parser.add_argument("--gamma", type=float, help="Lorentz factor (electron)")
    parser.add_argument("--sigma", type=int, choices=(-1, 1), help="circular polarization")
    parser.add_argument("--weighting", choices=("cos", "sin", "single"), help="superposition weighting (default cos)")
    parser.add_argument("--config", help="JSON configuration file; flags override")


def _add_grid_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--grid", choices=("polar", "cartesian"), help="grid kind (default cartesian)")
    parser.add_argument("--resolution", help="grid resolution, e.g. 512x512")
    parser.add_argument("--extent", type=float, help="half extent (cartesian) or r_max (polar), waist units")
    parser.add_argument("--r-min", dest="r_min", type=float, help="inner radius of polar grids, waist units")
    parser.add_argument("--colormap", default="inferno", help="matplotlib colormap for PNG output")
    parser.add_argument("--outdir", help="output directory (default ./out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vortexlab",
        description="Exact vortex beam fields and fringe-visibility analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_field = sub.add_parser("field", help="sample a field and export CSV/PNG/report")
    _add_beam_flags(p_field)
    _add_grid_flags(p_field)
    p_field.set_defaults(fn=cmd_field)

    p_vis = sub.add_parser("visibility", help="visibility report for one beam")
    _add_beam_flags(p_vis)
    p_vis.add_argument("--output", help="write the JSON report here instead of stdout")
    p_vis.set_defaults(fn=cmd_visibility)

    p_sweep = sub.add_parser("sweep", help="visibility along a parameter sweep")
    _add_beam_flags(p_sweep, with_preset=False)
    p_sweep.add_argument("--param", choices=_SWEEPABLE, help="sweep parameter")
    p_sweep.add_argument("--values", help="comma-separated sweep values")
    p_sweep.add_argument("--outdir", help="output directory (default ./out)")
    p_sweep.set_defaults(fn=cmd_sweep)

    p_scaling = sub.add_parser("scaling", help="paraxial ring-radius scaling over ell")
    p_scaling.add_argument("--values", help="comma-separated ell values (default 5,10,20,40)")
    p_scaling.add_argument("--outdir", help="output directory (default ./out)")
    p_scaling.add_argument("--config", help="JSON configuration file")
    p_scaling.set_defaults(fn=cmd_scaling)

    p_val = sub.add_parser("validate", help="run the residual check suite")
    p_val.add_argument(
        "--negative-controls",
        action="store_true",
        help="also run the deliberately broken controls (listed as expected-fail)",
    )
    p_val.add_argument(
        "--threshold",
        action="append",
        metavar="NAME=VALUE",
        help="override a threshold, e.g. dalembert=1e-8 (repeatable)",
    )
    p_val.set_defaults(fn=cmd_validate)

    p_presets = sub.add_parser("presets", help="list named presets")
    p_presets.set_defaults(fn=cmd_presets)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failures: non-zero, but not usage
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
