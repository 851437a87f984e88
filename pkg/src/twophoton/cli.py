"""Command-line interface.

Subcommands
-----------
evolve      coherent two-photon probability series -> CSV
master      damped two-photon population series -> CSV
scan        sweep a detuning (or a damping ladder) -> per-row CSVs + summary
resonance   locate the shifted resonance three ways -> JSON (+ scan summary)
spectrum    coherent-sector eigenvalues and line spacings -> CSV
selfcheck   fast engine cross-validations

Runs are configured by a JSON file (--config) mirroring the library's
parameter names; individual flags override file values.  Output locations
resolve as --out, then $TWOPHOTON_OUTDIR, then the working directory.
Numbers are written with 15 significant digits so repeat runs are
byte-identical.

Exit codes: 0 success, 1 usage error, 2 numerical invariant breach,
3 configuration error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from .effective import effective_g_omega
from .errors import (ConfigurationError, NumericalInvariantError,
                     TwoPhotonError)
from .experiments import (DEFAULT_HORIZON, PEAK_GRID_STEP, SweepSpec,
                          damping_sweep, default_horizon, engine_version,
                          resonance_report, scan_two_photon, time_grid)
from .lindblad import evolve_density, population_series, two_photon_population
from .operators import spectrum_lines
from .params import PARAM_FIELDS, ModelParams, SystemKind
from .unitary import evolve_amplitudes, two_photon_probability

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVARIANT = 2
EXIT_CONFIG = 3

OUTDIR_ENV = "TWOPHOTON_OUTDIR"


def _fmt(x: float) -> str:
    return f"{float(x):.15g}"


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except FileNotFoundError:
        raise ConfigurationError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config file {path} is not valid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigurationError(f"config file {path} must hold a JSON object")
    return cfg


def _resolve_params(args, cfg: dict) -> ModelParams:
    fields = dict(cfg.get("params", {}))
    if not isinstance(fields, dict):
        raise ConfigurationError("config key 'params' must be an object")
    for key in PARAM_FIELDS:          # flat top-level keys also accepted
        if key in cfg:
            fields[key] = cfg[key]
    for key in PARAM_FIELDS:
        value = getattr(args, key, None)
        if value is not None:
            fields[key] = value
    unknown = set(fields) - set(PARAM_FIELDS)
    if unknown:
        raise ConfigurationError(
            f"unknown parameter keys {sorted(unknown)}; valid keys are {list(PARAM_FIELDS)}")
    return ModelParams(**fields)


def _resolve_kind(args, cfg: dict) -> SystemKind:
    kind = getattr(args, "kind", None) or cfg.get("kind", "bimodal")
    return SystemKind.coerce(kind)


def _resolve_scalar(args, cfg: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is None:
        value = cfg.get(key, default)
    return value


def _resolve_outdir(args) -> Path:
    out = getattr(args, "out", None) or os.environ.get(OUTDIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _resolve_axis_values(args, cfg: dict) -> np.ndarray:
    start = getattr(args, "start", None)
    stop = getattr(args, "stop", None)
    step = getattr(args, "step", None)
    if start is not None or stop is not None or step is not None:
        if None in (start, stop, step):
            raise ConfigurationError("--start/--stop/--step must be given together")
        values = {"start": start, "stop": stop, "step": step}
    else:
        values = cfg.get("values")
    if values is None:
        raise ConfigurationError(
            "scan needs axis values: --start/--stop/--step or config 'values'")
    if isinstance(values, dict):
        try:
            start, stop, step = (float(values[k]) for k in ("start", "stop", "step"))
        except KeyError as exc:
            raise ConfigurationError(
                f"values object needs start/stop/step, missing {exc}") from None
        if step <= 0 or stop <= start:
            raise ConfigurationError("axis range needs step > 0 and stop > start")
        n = int(round((stop - start) / step))
        return start + step * np.arange(n + 1)
    return np.asarray(values, dtype=float)


def _write_series_csv(path: Path, times, values) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("g1_t,value\n")
        for t, v in zip(times, values):
            fh.write(f"{_fmt(t)},{_fmt(v)}\n")


def _write_manifest(outdir: Path, command: str, kind: SystemKind,
                    params: ModelParams, outputs: list[str], **extra) -> None:
    manifest = {
        "command": command,
        "engine": engine_version(),
        "kind": kind.value,
        "params": {k: getattr(params, k) for k in PARAM_FIELDS},
        "grid_step": PEAK_GRID_STEP,
        "outputs": outputs,
    }
    manifest.update(extra)
    with open(outdir / "run_manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_evolve(args) -> int:
    cfg = _load_config(args.config)
    kind = _resolve_kind(args, cfg)
    params = _resolve_params(args, cfg)
    horizon = _resolve_scalar(args, cfg, "horizon")
    if horizon is None:
        horizon = default_horizon(kind, params)
    substep = _resolve_scalar(args, cfg, "substep")
    outdir = _resolve_outdir(args)

    grid = time_grid(float(horizon))
    series = two_photon_probability(
        evolve_amplitudes(kind, params, grid, substep=substep))
    out = outdir / "evolve.csv"
    _write_series_csv(out, series.times, series.values)
    _write_manifest(outdir, "evolve", kind, params, [out.name],
                    horizon=float(horizon), substep=substep)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_master(args) -> int:
    cfg = _load_config(args.config)
    kind = _resolve_kind(args, cfg)
    params = _resolve_params(args, cfg)
    horizon = _resolve_scalar(args, cfg, "horizon", DEFAULT_HORIZON)
    substep = _resolve_scalar(args, cfg, "substep")
    state = _resolve_scalar(args, cfg, "state")
    outdir = _resolve_outdir(args)

    grid = time_grid(float(horizon))
    states = evolve_density(kind, params, grid, substep=substep)
    series = (population_series(states, state) if state
              else two_photon_population(states))
    out = outdir / "master.csv"
    _write_series_csv(out, series.times, series.values)
    _write_manifest(outdir, "master", kind, params, [out.name],
                    horizon=float(horizon), substep=substep,
                    observable=(f"population:{state}" if state
                                else "two_photon_population"))
    print(f"wrote {out}")
    return EXIT_OK


def _summary_rows(result) -> list[dict]:
    rows = []
    for row in result.rows:
        entry = {"axis": row.axis_value, "peak_value": row.peak_value,
                 "peak_time": row.peak_time}
        entry.update(row.extras)
        rows.append(entry)
    return rows


def _write_summary_csv(path: Path, rows: list[dict]) -> None:
    if not rows:
        raise ConfigurationError("no sweep rows to summarize")
    keys = list(rows[0])
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(keys) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(row[k]) for k in keys) + "\n")


def _cmd_scan(args) -> int:
    cfg = _load_config(args.config)
    kind = _resolve_kind(args, cfg)
    params = _resolve_params(args, cfg)
    axis = _resolve_scalar(args, cfg, "axis", "delta_small")
    horizon = _resolve_scalar(args, cfg, "horizon", DEFAULT_HORIZON)
    substep = _resolve_scalar(args, cfg, "substep")
    outdir = _resolve_outdir(args)

    if axis == "kappa":
        kappas = _resolve_scalar(args, cfg, "kappas")
        if kappas is None:
            kappas = _resolve_axis_values(args, cfg)
        else:
            kappas = np.asarray(
                [float(k) for k in (kappas.split(",") if isinstance(kappas, str)
                                    else kappas)], dtype=float)
        result = damping_sweep(kind, params, kappas=kappas,
                               horizon=float(horizon), substep=substep)
        prefix = "master_kappa"
        summary_name = "damping_summary.csv"
    else:
        values = _resolve_axis_values(args, cfg)
        spec = SweepSpec(kind=kind, params=params, axis=axis,
                         values=tuple(values), horizon=float(horizon))
        result = scan_two_photon(spec, substep=substep)
        prefix = f"scan_{axis}"
        summary_name = "scan_summary.csv"

    outputs = []
    for i, row in enumerate(result.rows):
        name = f"{prefix}_row{i:03d}.csv"
        _write_series_csv(outdir / name, row.series.times, row.series.values)
        outputs.append(name)
    summary = outdir / summary_name
    _write_summary_csv(summary, _summary_rows(result))
    outputs.append(summary.name)
    _write_manifest(outdir, "scan", kind, params, outputs,
                    horizon=float(horizon), axis=axis,
                    provenance=result.provenance)
    best = result.argmax_row()
    print(f"wrote {len(outputs)} files to {outdir}")
    print(f"peak {axis}={_fmt(best.axis_value)}: "
          f"max={_fmt(best.peak_value)} at g1_t={_fmt(best.peak_time)}")
    return EXIT_OK


def _cmd_resonance(args) -> int:
    cfg = _load_config(args.config)
    kind = _resolve_kind(args, cfg)
    params = _resolve_params(args, cfg)
    interval = getattr(args, "interval", None) or cfg.get("interval")
    if interval is None:
        raise ConfigurationError(
            "resonance needs a search interval: --interval LO HI or config 'interval'")
    lo, hi = (float(interval[0]), float(interval[1]))
    scan_step = float(_resolve_scalar(args, cfg, "scan_step", 0.05))
    horizon = _resolve_scalar(args, cfg, "horizon")
    substep = _resolve_scalar(args, cfg, "substep")
    outdir = _resolve_outdir(args)

    report = resonance_report(kind, params, (lo, hi), scan_step=scan_step,
                              horizon=None if horizon is None else float(horizon),
                              substep=substep)
    payload = {
        "kind": kind.value,
        "interval": [lo, hi],
        "delta_star_omega": report.delta_star_omega,
        "delta_star_stark": report.delta_star_stark,
        "delta_star_scan": report.delta_star_scan,
        "scan_peak_value": report.scan_peak_value,
        "scan_peak_time": report.scan_peak_time,
        "omega_minus_scan": report.omega_minus_scan,
        "shift_from_bare": report.shift_from_bare,
        "scan_step": scan_step,
        "horizon": report.scan.provenance["horizon"],
        "engine": engine_version(),
    }
    out = outdir / "resonance.json"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    summary = outdir / "resonance_scan_summary.csv"
    _write_summary_csv(summary, _summary_rows(report.scan))
    _write_manifest(outdir, "resonance", kind, params,
                    [out.name, summary.name],
                    provenance=report.scan.provenance)
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def _cmd_spectrum(args) -> int:
    cfg = _load_config(args.config)
    kind = _resolve_kind(args, cfg)
    params = _resolve_params(args, cfg)
    outdir = _resolve_outdir(args)

    eigenvalues, lines = spectrum_lines(params, kind)
    out = outdir / "spectrum.csv"
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("quantity,index,value\n")
        for i, e in enumerate(eigenvalues):
            fh.write(f"eigenvalue,{i},{_fmt(e)}\n")
        for i, line in enumerate(lines):
            fh.write(f"line,{i},{_fmt(line)}\n")
    big_g, big_omega = effective_g_omega(kind, params)
    _write_manifest(outdir, "spectrum", kind, params, [out.name],
                    effective_g=big_g, effective_omega=big_omega)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_selfcheck(args) -> int:
    from .selfcheck import run_selfcheck
    results = run_selfcheck()
    for result in results:
        mark = "ok  " if result.passed else "FAIL"
        print(f"{mark} {result.name}: {result.detail}")
    if all(r.passed for r in results):
        print(f"selfcheck passed ({len(results)} checks)")
        return EXIT_OK
    print("selfcheck FAILED", file=sys.stderr)
    return EXIT_INVARIANT


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file")
    sub.add_argument("--kind", choices=[k.value for k in SystemKind])
    sub.add_argument("--out", help=f"output directory (default ${OUTDIR_ENV} or .)")
    for key in PARAM_FIELDS:
        sub.add_argument(f"--{key.replace('_', '-')}", dest=key, type=float)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twophoton",
        description="Two-photon vacuum Rabi dynamics of atom pairs in cavities")
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser(
        "evolve", help="coherent two-photon probability series to CSV")
    _add_common(evolve)
    evolve.add_argument("--horizon", type=float)
    evolve.add_argument("--substep", type=float)
    evolve.set_defaults(func=_cmd_evolve)

    master = commands.add_parser(
        "master", help="damped two-photon population series to CSV")
    _add_common(master)
    master.add_argument("--horizon", type=float)
    master.add_argument("--substep", type=float)
    master.add_argument("--state", help="emit this state's population instead")
    master.set_defaults(func=_cmd_master)

    scan = commands.add_parser(
        "scan", help="sweep a detuning axis or a damping ladder")
    _add_common(scan)
    scan.add_argument("--axis", choices=["delta_small", "delta_cap", "kappa"])
    scan.add_argument("--start", type=float)
    scan.add_argument("--stop", type=float)
    scan.add_argument("--step", type=float)
    scan.add_argument("--kappas", help="comma-separated damping ladder")
    scan.add_argument("--horizon", type=float)
    scan.add_argument("--substep", type=float)
    scan.set_defaults(func=_cmd_scan)

    resonance = commands.add_parser(
        "resonance", help="locate the shifted two-photon resonance")
    _add_common(resonance)
    resonance.add_argument("--interval", nargs=2, type=float,
                           metavar=("LO", "HI"))
    resonance.add_argument("--scan-step", dest="scan_step", type=float)
    resonance.add_argument("--horizon", type=float)
    resonance.add_argument("--substep", type=float)
    resonance.set_defaults(func=_cmd_resonance)

    spectrum = commands.add_parser(
        "spectrum", help="coherent-sector eigenvalues and line spacings")
    _add_common(spectrum)
    spectrum.set_defaults(func=_cmd_spectrum)

    selfcheck = commands.add_parser(
        "selfcheck", help="fast engine cross-validations")
    selfcheck.set_defaults(func=_cmd_selfcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:       # argparse exits 2 on usage errors
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalInvariantError as exc:
        print(f"numerical invariant breached: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except TwoPhotonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
