"""Command-line front end: ``run``, ``compare``, ``analyze`` and ``show-preset``."""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import bode_magnitude_db, bode_slope, second_order_char
from .config import ConfigError, dumps, load
from .metrics import MetricsReport
from .scenario import CHANNELS, PRESETS, RunResult, ScenarioConfig, run
from .simcore import SimulationError

EXIT_OK, EXIT_CONFIG, EXIT_SIM = 0, 1, 2

# number of significant digits in CSV output; unset means shortest round-trip repr
PRECISION_ENV = "INTDPID_CSV_DIGITS"

INDEX_LABELS = (("iae", "IAE"), ("itae", "ITAE"), ("itse", "ITSE"), ("isu", "ISU"), ("iau", "IAU"), ("mse", "MSE"))


def _float_formatter():
    digits = os.environ.get(PRECISION_ENV)
    if not digits:
        return repr
    try:
        d = int(digits)
    except ValueError:
        raise ConfigError(f"{PRECISION_ENV}: expected an integer, got {digits!r}") from None
    if d < 1:
        raise ConfigError(f"{PRECISION_ENV}: must be >= 1")
    return lambda v: f"{v:.{d}g}"


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def resolve(source: str) -> tuple[str, ScenarioConfig]:
    """A preset name or a path to a config file."""
    if source in PRESETS:
        return source, PRESETS[source]
    path = Path(source)
    if path.suffix or path.exists():
        return path.stem, load(path)
    raise ConfigError(f"unknown preset {source!r}; valid presets: {', '.join(PRESETS)}")


def trajectory_csv(result: RunResult) -> str:
    fmt = _float_formatter()
    lines = [",".join(("t",) + CHANNELS)]
    for row in result.table():
        lines.append(",".join(fmt(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def provenance_block(result: RunResult, cfg: ScenarioConfig) -> str:
    p = result.provenance
    integ = " ".join(f"{k}={v}" for k, v in p["integrator"].items())
    head = [
        f"# intdpid {p['artifact_version']}",
        f"# config_hash: {p['config_hash']}",
        f"# seed: {p['seed']}",
        f"# noise_algorithm: {p['noise_algorithm']}",
        f"# integrator: {integ}",
        f"# envelope_violated: {result.envelope_violated}",
        "# config:",
    ]
    head += [f"#   {line}" if line else "#" for line in dumps(cfg).splitlines()]
    return "\n".join(head) + "\n"


def metrics_table(m: MetricsReport) -> str:
    fmt = _float_formatter()
    rows = ["index,value"] + [f"{label},{fmt(getattr(m, key))}" for key, label in INDEX_LABELS]
    return "\n".join(rows) + "\n"


def compare_table(name_a: str, a: MetricsReport, name_b: str, b: MetricsReport) -> str:
    rows = [f"{'Performance Index':<18} {name_a:>16} {name_b:>16} {'delta (B-A)':>14}  winner"]
    for key, label in INDEX_LABELS:
        va, vb = getattr(a, key), getattr(b, key)
        winner = "tie" if va == vb else (name_a if va < vb else name_b)
        rows.append(f"{label:<18} {va:>16.6f} {vb:>16.6f} {vb - va:>14.6g}  {winner}")
    return "\n".join(rows) + "\n"


def _execute(source: str) -> tuple[str, ScenarioConfig, RunResult]:
    name, cfg = resolve(source)
    return name, cfg, run(cfg)


def cmd_run(args) -> int:
    name, cfg, result = _execute(args.source)
    out = Path(args.output_dir)
    write_atomic(out / f"{name}_trajectory.csv", trajectory_csv(result))
    write_atomic(out / f"{name}_metrics.csv", provenance_block(result, cfg) + metrics_table(result.metrics))
    for key, label in INDEX_LABELS[:5]:
        print(f"{label} {getattr(result.metrics, key):.6f}")
    return EXIT_OK


def cmd_compare(args) -> int:
    name_a, cfg_a, res_a = _execute(args.a)
    name_b, cfg_b, res_b = _execute(args.b)
    out = Path(args.output_dir)
    table = compare_table(name_a, res_a.metrics, name_b, res_b.metrics)
    for name, cfg, res in ((name_a, cfg_a, res_a), (name_b, cfg_b, res_b)):
        write_atomic(out / f"{name}_trajectory.csv", trajectory_csv(res))
        write_atomic(out / f"{name}_metrics.csv", provenance_block(res, cfg) + metrics_table(res.metrics))
    write_atomic(out / f"compare_{name_a}_vs_{name_b}.txt", table)
    print(table, end="")
    return EXIT_OK


def cmd_analyze(args) -> int:
    name, cfg = resolve(args.source)
    if cfg.intd_params is None:
        raise ConfigError("[intd]: analyze needs INTD parameters")
    if args.points < 2:
        raise ConfigError("points: need at least 2 frequencies to fit a slope")
    if not 0 < args.omega_min < args.omega_max:
        raise ConfigError("omega range: need 0 < omega_min < omega_max")
    p = cfg.intd_params
    ch = second_order_char(p)
    omega = np.logspace(np.log10(args.omega_min), np.log10(args.omega_max), args.points)
    mag = bode_magnitude_db(omega, p)
    fmt = _float_formatter()
    text = "omega,magnitude_db\n" + "".join(f"{fmt(w)},{fmt(m)}\n" for w, m in zip(omega, mag))
    write_atomic(Path(args.output_dir) / f"{name}_bode.csv", text)

    def band_slope(lo, hi):
        sel = (omega >= lo) & (omega <= hi)
        return f"{bode_slope(omega[sel], mag[sel]):+.3f}" if sel.sum() >= 2 else "n/a"

    low = band_slope(ch.omega_n / 1000, ch.omega_n / 100)
    high = band_slope(10 * ch.omega_n, 1000 * ch.omega_n)
    print(f"omega_n={ch.omega_n:.6g} rad/s xi={ch.xi:.6g} dc_gain={ch.dc_gain:.6g} "
          f"low_slope={low} dB/dec high_slope={high} dB/dec")
    return EXIT_OK


def cmd_show_preset(args) -> int:
    if args.name is None:
        print("\n".join(PRESETS))
        return EXIT_OK
    if args.name not in PRESETS:
        raise ConfigError(f"unknown preset {args.name!r}; valid presets: {', '.join(PRESETS)}")
    print(dumps(PRESETS[args.name]), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="intdpid", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run a preset or config file")
    p.add_argument("source", nargs="?", help="preset name or config path")
    p.add_argument("--preset", dest="preset")
    p.add_argument("--config", dest="config")
    p.add_argument("-o", "--output-dir", default="out")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("compare", help="run two scenarios and tabulate their indices")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("-o", "--output-dir", default="out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("analyze", help="Bode magnitude and second-order characteristics of the INTD")
    p.add_argument("source", nargs="?", help="preset name or config path (default case1_intd)")
    p.add_argument("--preset", dest="preset")
    p.add_argument("--config", dest="config")
    p.add_argument("--omega-min", type=float, default=0.01)
    p.add_argument("--omega-max", type=float, default=1e5)
    p.add_argument("--points", type=int, default=400)
    p.add_argument("-o", "--output-dir", default="out")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("show-preset", help="print a preset as an editable config file")
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_show_preset)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "preset"):
        given = [s for s in (args.source, args.preset, args.config) if s]
        if len(given) > 1:
            print("error: give one of SOURCE, --preset or --config", file=sys.stderr)
            return EXIT_CONFIG
        args.source = given[0] if given else ("case1_intd" if args.command == "analyze" else None)
        if not args.source:
            print("error: a preset name or config path is required", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except (ConfigError, KeyError) as err:
        msg = err.args[0] if isinstance(err, KeyError) and err.args else err
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_CONFIG
    except SimulationError as err:
        print(f"simulation failed: {type(err).__name__}: {err}", file=sys.stderr)
        return EXIT_SIM


if __name__ == "__main__":
    sys.exit(main())
