"""Command-line pipeline: synth -> noise -> fit -> export-spice -> optimize.

Each subcommand wraps one library stage and writes a machine-readable
artifact; human-readable progress goes to stderr. Exit codes are a stable
contract: 0 success, 2 input/config error, 3 domain error, 4 numerical
failure.
"""

import argparse
import math
import sys

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import damping_data, macromodel, noise, optimizer, squeeze_film
from .errors import DomainError, FitError, OrderError, SchemaError, SfdNoiseError

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_NUMERICAL = 4


def _log(msg):
    print(msg, file=sys.stderr)


def _load_geometry(path):
    try:
        with open(path, "rb") as fh:
            doc = tomllib.load(fh)
    except FileNotFoundError:
        raise CliInputError(f"geometry file not found: {path}")
    except tomllib.TOMLDecodeError as exc:
        raise CliInputError(f"geometry file is not valid TOML: {exc}")
    try:
        plate = doc["plate"]
        gas = doc["gas"]
        geom = squeeze_film.PlateGeometry(
            length_m=float(plate["length_m"]),
            width_m=float(plate["width_m"]),
            gap_m=float(plate["gap_m"]),
        )
        props = squeeze_film.GasProperties(
            pressure_pa=float(gas["pressure_pa"]),
            viscosity_pa_s=float(gas["viscosity_pa_s"]),
            temperature_k=float(gas["temperature_k"]),
        )
    except KeyError as exc:
        raise CliInputError(f"geometry file missing field: {exc}")
    except ValueError as exc:
        raise CliInputError(f"invalid geometry value: {exc}")
    return geom, props


class CliInputError(Exception):
    pass


def _read_spectrum(path):
    try:
        return damping_data.parse_csv(path)
    except FileNotFoundError:
        raise CliInputError(f"input file not found: {path}")
    except (SchemaError, OrderError, ValueError) as exc:
        raise CliInputError(f"bad damping table {path}: {exc}")


def cmd_synth(args):
    geom, gas = _load_geometry(args.geometry)
    if not (0 < args.fmin < args.fmax):
        raise CliInputError("invalid frequency grid: need 0 < fmin < fmax")
    if args.points < 1:
        raise CliInputError("invalid frequency grid: need at least one point")
    grid = np.geomspace(args.fmin, args.fmax, args.points)
    spec = squeeze_film.synth_spectrum(geom, gas, grid)
    with open(args.out, "wb") as fh:
        fh.write(damping_data.export_csv(spec))
    _log(f"wrote {len(spec)}-row damping table to {args.out}")
    return EXIT_OK


def cmd_noise(args):
    spec = _read_spectrum(args.infile)
    params = noise.ResonatorParams(
        mass_kg=args.mass, k_spring_n_per_m=args.kspring, temperature_k=args.temp
    )
    anchor = None if args.white_anchor in (None, "fmin") else float(args.white_anchor)
    spectra = noise.compute_spectra(spec, params, anchor_hz=anchor)
    with open(args.out, "wb") as fh:
        fh.write(noise.export_noise_csv(spectra))
    _log(f"wrote noise spectra ({len(spectra.freq_hz)} rows) to {args.out}")
    if args.plot_script:
        with open(args.plot_script, "w", encoding="utf-8") as fh:
            fh.write(_gnuplot_script(args.out))
        _log(f"wrote gnuplot script to {args.plot_script}")
    return EXIT_OK


def _gnuplot_script(csv_path):
    return (
        "set datafile separator ','\n"
        "set logscale xy\n"
        "set xlabel 'frequency [Hz]'\n"
        "set ylabel 'displacement noise [m/sqrt(Hz)]'\n"
        f"plot '{csv_path}' skip 1 using 1:4 with lines title 'frequency-dependent', \\\n"
        f"     '{csv_path}' skip 1 using 1:5 with lines title 'white baseline'\n"
    )


def cmd_fit(args):
    spec = _read_spectrum(args.infile)
    interp = damping_data.build_interpolant(spec)
    f_lo = args.fmin if args.fmin is not None else interp.f_min
    f_hi = args.fmax if args.fmax is not None else interp.f_max
    try:
        model = macromodel.fit_from_interpolant(
            interp, f_lo, f_hi, n_branches=args.branches
        )
    except FitError as exc:
        _log(f"fit failed: {exc} (best residual: {exc.best_residual})")
        return EXIT_NUMERICAL
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(macromodel.model_to_json(model))
    _log(
        f"fitted {args.branches}-branch model, relative RMS residual "
        f"{model.fit_residual:.3e}, wrote {args.out}"
    )
    return EXIT_OK


def cmd_export_spice(args):
    try:
        with open(args.infile, "r", encoding="utf-8") as fh:
            model = macromodel.model_from_json(fh.read())
    except FileNotFoundError:
        raise CliInputError(f"model file not found: {args.infile}")
    except ValueError as exc:
        raise CliInputError(f"bad model file: {exc}")
    params = noise.ResonatorParams(
        mass_kg=args.mass, k_spring_n_per_m=args.kspring, temperature_k=args.temp
    )
    netlist = macromodel.export_spice(model, params)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(netlist)
    _log(f"wrote SPICE netlist to {args.out}")
    return EXIT_OK


def cmd_optimize(args):
    spec = _read_spectrum(args.infile)
    interp = damping_data.build_interpolant(spec)
    try:
        cfg = optimizer.objective_config_from_toml(args.objective)
    except FileNotFoundError:
        raise CliInputError(f"objective file not found: {args.objective}")
    except (KeyError, ValueError) as exc:
        raise CliInputError(f"bad objective file: {exc}")
    result = optimizer.optimize_spring(cfg, interp, args.mass, args.temp)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(result.to_json())
    _log(result.summary())
    if result.on_boundary:
        _log("warning: optimum sits on the search-range boundary")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="sfdnoise",
        description="Squeeze-film damping noise analysis and macromodel extraction",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="synthesize a damping table from plate geometry")
    p.add_argument("--geometry", required=True, help="plate/gas TOML file")
    p.add_argument("--fmin", type=float, default=1e2)
    p.add_argument("--fmax", type=float, default=1e6)
    p.add_argument("--points", type=int, default=50)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("noise", help="compute noise spectra from a damping table")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--kspring", type=float, required=True)
    p.add_argument("--temp", type=float, default=300.0)
    p.add_argument("--white-anchor", default="fmin",
                   help="'fmin' or an anchor frequency in Hz for the white baseline")
    p.add_argument("--plot-script", default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("fit", help="fit a lumped parallel-RL chain to the air impedance")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--branches", type=int, default=3)
    p.add_argument("--fmin", type=float, default=None)
    p.add_argument("--fmax", type=float, default=None)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("export-spice", help="emit a SPICE subcircuit from a fitted model")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--kspring", type=float, required=True)
    p.add_argument("--temp", type=float, default=300.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export_spice)

    p = sub.add_parser("optimize", help="optimize the mechanical spring constant")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--objective", required=True, help="objective TOML file")
    p.add_argument("--mass", type=float, required=True)
    p.add_argument("--temp", type=float, default=300.0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_optimize)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        _log(f"error: {exc}")
        return EXIT_INPUT
    except DomainError as exc:
        _log(f"domain error: {exc}")
        return EXIT_DOMAIN
    except FitError as exc:
        _log(f"numerical failure: {exc}")
        return EXIT_NUMERICAL
    except SfdNoiseError as exc:
        _log(f"error: {exc}")
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
