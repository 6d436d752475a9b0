"""Command-line front end: ``cycle``, ``sweep``, ``adiabatic`` and ``plot``."""
import argparse
import csv
import io
import math
import sys

from .config import KEYS, ConfigError, RunConfig, load_config
from .cycle import run_otto_cycle
from .linalg import NumericalContractError
from .model import ModelParams
from .svgplot import sweep_svg
from .thermo import (adiabaticity_leakage, gibbs_state, ramp_hamiltonians,
                     time_ordered_propagator, unitarity_defect)
from .model import build_h1

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3

SWEEP_HEADER = ("j", "q_h", "q_l", "w_net", "eta", "cop", "eta_prime", "regime", "outcome_prob")
ADIABATIC_HEADER = ("tau", "steps", "leakage", "unitarity_defect")
TRACK_SAMPLES = 65


def fmt(x):
    """Shortest round-trip decimal; empty for absent values."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def _params(cfg, j):
    return ModelParams(j=j, b=cfg.b_h, omega=cfg.omega, k=cfg.k, kbt_h=cfg.kbt_h)


def _single_j(cfg):
    if cfg.j is None:
        raise ConfigError("j", "a single coupling value is required (--j)")
    return cfg.j


def _point(cfg, j):
    return run_otto_cycle(_params(cfg, j), cfg.b_l, cfg.measure,
                          cost=cfg.cost, cost_kbt=cfg.cost_kbt)


def sweep_row(pt):
    return (pt.j, pt.q_h, pt.q_l, pt.w_net, pt.eta, pt.cop, pt.eta_prime,
            pt.regime.value, pt.outcome_prob)


def cmd_cycle(cfg, out):
    pt = _point(cfg, _single_j(cfg))
    lines = [("j", pt.j), ("q_h", pt.q_h), ("q_l", pt.q_l), ("w1", pt.w1),
             ("w2", pt.w2), ("w_net", pt.w_net)]
    if pt.eta is not None:
        lines.append(("eta", pt.eta))
    if pt.cop is not None:
        lines.append(("cop", pt.cop))
    if cfg.cost:
        lines.append(("eta_prime", pt.eta_prime))
    lines += [("regime", pt.regime.value), ("outcome_prob", pt.outcome_prob)]
    for key, value in lines:
        out.write(f"{key}={fmt(value)}\n")


def sweep_csv(cfg):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for j in cfg.j_grid():
        writer.writerow([fmt(v) for v in sweep_row(_point(cfg, j))])
    return buf.getvalue()


def adiabatic_rows(cfg):
    p = _params(cfg, cfg.j if cfg.j is not None else 5.0)
    ts = gibbs_state(build_h1(p), p.kbt_h)
    h_end = build_h1(p.with_field(cfg.b_l))
    path = ramp_hamiltonians(p, cfg.b_l, TRACK_SAMPLES)
    rows = []
    for tau in cfg.tau:
        u = time_ordered_propagator(p, cfg.b_l, tau, cfg.steps)
        rows.append((tau, cfg.steps, adiabaticity_leakage(ts, u, h_end, path),
                     unitarity_defect(u)))
    return rows


def adiabatic_csv(cfg):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ADIABATIC_HEADER)
    for row in adiabatic_rows(cfg):
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


class CsvFormatError(ValueError):
    pass


def read_sweep_csv(text):
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvFormatError("empty CSV") from None
    if tuple(header) != SWEEP_HEADER:
        raise CsvFormatError(f"unexpected header {header!r}")
    rows = []
    for n, rec in enumerate(reader, 2):
        if not rec:
            continue
        if len(rec) != len(SWEEP_HEADER):
            raise CsvFormatError(f"line {n}: expected {len(SWEEP_HEADER)} fields, got {len(rec)}")
        row = {}
        for key, val in zip(SWEEP_HEADER, rec):
            if key == "regime":
                row[key] = val
                continue
            try:
                row[key] = float(val) if val != "" else None
            except ValueError:
                raise CsvFormatError(f"line {n}: {key}={val!r} is not a number") from None
            if row[key] is not None and not math.isfinite(row[key]):
                raise CsvFormatError(f"line {n}: {key} is not finite")
        for key in ("j", "q_h", "q_l", "w_net"):
            if row[key] is None:
                raise CsvFormatError(f"line {n}: {key} is missing")
        rows.append(row)
    if not rows:
        raise CsvFormatError("CSV has no data rows")
    return rows


def cmd_plot(csv_path, out_path):
    try:
        with open(csv_path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CsvFormatError(f"cannot read {csv_path}: {exc.strerror}") from None
    svg = sweep_svg(read_sweep_csv(text))
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(svg)


def _emit(text, out_path, stdout):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="flat 'key = value' config file")
    for key in KEYS:
        flag = "--" + key.replace("_", "-")
        if key == "cost":
            common.add_argument(flag, action="store_const", const="true", default=None,
                                help="charge the measurement cost (adds eta_prime)")
        elif key == "measure":
            common.add_argument(flag, choices=("e1", "e2", "e3", "e4"), type=str.lower)
        else:
            common.add_argument(flag, dest=key, metavar=key.upper())
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="ionotto", description=(
        "Two-ion measurement-driven quantum Otto machine."))
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("cycle", parents=[common], help="run one cycle at --j")
    sub.add_parser("sweep", parents=[common], help="CSV table over a J grid")
    sub.add_parser("adiabatic", parents=[common],
                   help="propagator leakage/unitarity for each --tau (comma separated)")
    plot = sub.add_parser("plot", help="render a sweep CSV as SVG")
    plot.add_argument("csv_path")
    plot.add_argument("--out", required=True, metavar="PATH")
    return parser


def resolve_config(args):
    cfg = RunConfig()
    if args.config:
        cfg = load_config(args.config, cfg)
    overrides = {k: getattr(args, k) for k in KEYS if getattr(args, k, None) is not None}
    return cfg.with_values(overrides).validate()


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        if args.command == "plot":
            cmd_plot(args.csv_path, args.out)
            return EXIT_OK
        cfg = resolve_config(args)
        if args.command == "cycle":
            buf = io.StringIO()
            cmd_cycle(cfg, buf)
            _emit(buf.getvalue(), args.out, stdout)
        elif args.command == "sweep":
            _emit(sweep_csv(cfg), args.out, stdout)
        else:
            _emit(adiabatic_csv(cfg), args.out, stdout)
    except (ConfigError, CsvFormatError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_CONFIG
    except NumericalContractError as exc:
        stderr.write(f"numerical contract violated: {exc}\n")
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
