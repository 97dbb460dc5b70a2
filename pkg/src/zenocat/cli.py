"""Command-line front end: ``zenocat <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, Sequence

import numpy as np

from . import __version__, dynamics, svg
from .certify import run_verification
from .coefficients import (QuadratureError, analytic_gamma_minus, measured_rates,
                           rates_by_time_average, thermal_gamma_minus)
from .config import ConfigError, RunConfig, load_config, render_config
from .dynamics import EvolutionKernels
from .oracle import PropagationError
from .reservoir import BoseEinstein
from .states import TruncationError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3

RATE_COLUMNS = ("r", "omega_c_tau", "tau", "gamma_plus", "gamma_minus", "markov_plus",
                "markov_minus", "analytic_gamma_minus", "thermal_gamma_minus", "rel_err_identity")
PEAK_COLUMNS = ("r", "omega_c_tau", "t", "gamma_t", "quantity", "value", "scenario")
PN_COLUMNS = ("r", "omega_c_tau", "t", "gamma_t", "n", "p_n", "scenario")
PARITY_COLUMNS = ("r", "omega_c_tau", "t", "gamma_t", "parity_contrast", "mean_photon_number",
                  "total_probability", "scenario")
FIELD_COLUMNS = ("r", "omega_c_tau", "t", "gamma_t", "beta_r", "beta_i", "wigner", "scenario")


# --- output helpers --------------------------------------------------------

def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if value is None:
        return ""
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return f"{v:.12g}"


def _key(row):
    # numeric-aware lexicographic order; inf sorts last
    return tuple((0, v, "") if isinstance(v, (int, float, np.floating, np.integer)) else (1, 0.0, str(v))
                 for v in row)


def write_csv(path: str, columns: Sequence[str], rows: Iterable[Sequence], cfg: RunConfig,
              command: str, sort_by: Sequence[int] | None = None) -> int:
    rows = list(rows)
    if sort_by is not None:
        rows.sort(key=lambda r: _key([r[i] for i in sort_by]))
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(f"# zenocat {__version__} {command}\n")
        for line in cfg.header_lines():
            fh.write(f"# {line}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return len(rows)


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _out_path(cfg: RunConfig, name: str) -> str:
    os.makedirs(cfg.out_dir, exist_ok=True)
    return os.path.join(cfg.out_dir, name)


def _wants(cfg: RunConfig, tag: str) -> bool:
    return cfg.scenario in ("all", tag)


def _coherent_scenario(cfg: RunConfig, command: str) -> None:
    if cfg.scenario == "measured":
        raise ConfigError(f"{command}: the measured scenario destroys coherences; "
                          "use none, shuttered or all")


# --- rates -----------------------------------------------------------------

def _rate_row(args):
    cfg, r, x = args
    spec = cfg.spec(r)
    tau = x / r
    rs = measured_rates(tau, spec)
    avg = rates_by_time_average(tau, spec)
    rel = max(abs(rs.gamma_plus - avg.gamma_plus) / rs.gamma_plus,
              abs(rs.gamma_minus - avg.gamma_minus) / max(rs.gamma_minus, 1e-300))
    if isinstance(spec.thermal, BoseEinstein):
        analytic = thermal = None
    else:
        analytic = analytic_gamma_minus(tau, spec)
        thermal = thermal_gamma_minus(tau, spec)
    return (r, x, tau, rs.gamma_plus, rs.gamma_minus, rs.markov_plus, rs.markov_minus,
            analytic, thermal, rel)


def _parallel_map(func, tasks, workers):
    if workers <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, tasks))


def cmd_rates(cfg: RunConfig, log=print) -> list[tuple]:
    tasks = [(cfg, r, x) for r in cfg.r_values for x in cfg.rate_grid()]
    rows = _parallel_map(_rate_row, tasks, cfg.workers)
    path = _out_path(cfg, "rates.csv")
    write_csv(path, RATE_COLUMNS, rows, cfg, "rates", sort_by=(0, 1))
    if cfg.svg:
        series = []
        for r in cfg.r_values:
            sel = sorted((row for row in rows if row[0] == r), key=lambda row: row[1])
            series.append((f"r={r:g}", [math.log10(row[1]) for row in sel],
                           [row[4] / row[6] for row in sel]))
        write_text(_out_path(cfg, "rates.svg"),
                   svg.line_chart(series, "shuttered / Markovian gamma_-1", "log10(omega_c tau)",
                                  "gamma_-1(tau) / (Gamma N)"))
    worst = max(row[-1] for row in rows)
    log(f"wrote {len(rows)} rows to {path}; worst identity error {worst:.2e}")
    return rows


# --- Wigner peak -------------------------------------------------------------

def peak_curves(cfg: RunConfig, r: float):
    """Yield ``(scenario, omega_c_tau, kernels)`` for one panel."""
    spec = cfg.spec(r)
    if _wants(cfg, "none"):
        yield "none", math.inf, EvolutionKernels.markov(spec)
    if _wants(cfg, "shuttered"):
        for x in cfg.omega_c_tau:
            yield "shuttered", x, EvolutionKernels.from_rates(measured_rates(x / r, spec))


def cmd_wigner_peak(cfg: RunConfig, log=print) -> list[tuple]:
    _coherent_scenario(cfg, "wigner-peak")
    cat = cfg.cat()
    rows = []
    gamma_grid = np.linspace(0.0, cfg.t_end, cfg.samples)
    for r in cfg.r_values:
        big = cfg.spec(r).big_gamma
        times = gamma_grid / big
        series = []
        for scenario, x, kern in peak_curves(cfg, r):
            logs = dynamics.log_wigner_peak(times, kern, cat)
            norm = np.exp(logs - logs[0])
            for gt, t, lp, nv in zip(gamma_grid, times, logs, norm):
                rows.append((r, x, t, gt, "log_peak", lp, scenario))
                rows.append((r, x, t, gt, "peak", math.exp(lp), scenario))
                rows.append((r, x, t, gt, "peak_normalized", nv, scenario))
            label = "Markov" if scenario == "none" else f"omega_c tau={x:g}"
            series.append((label, list(gamma_grid), list(norm)))
        if cfg.svg:
            write_text(_out_path(cfg, f"wigner_peak_r{r:g}.svg"),
                       svg.line_chart(series, f"Wigner interference peak, r={r:g}", "Gamma t",
                                      "W_peak(t) / W_peak(0)", ylim=(0.0, 1.0)))
    path = _out_path(cfg, "wigner_peak.csv")
    write_csv(path, PEAK_COLUMNS, rows, cfg, "wigner-peak", sort_by=(0, 1, 2, 4, 6))
    log(f"wrote {len(rows)} rows to {path}")
    return rows


# --- number distribution snapshots -------------------------------------------

def _adequate_n_max(cfg: RunConfig, kernels: Sequence[EvolutionKernels], times) -> int:
    """Smallest cutoff (in steps of 10) holding all but 1e-10 of every
    snapshot distribution."""
    cat = cfg.cat()

    def deficit(n_max):
        return max(1.0 - dynamics.pn_distribution(t, k, cat, n_max).total()
                   for k in kernels for t in times)

    if cfg.n_max is not None:
        lost = deficit(cfg.n_max)
        if lost > 1e-8:
            raise TruncationError(f"cat.n_max={cfg.n_max} drops {lost:.1e} of the probability")
        return cfg.n_max
    n_max = cat.default_n_max()
    while n_max < 400 and deficit(n_max) > 1e-10:
        n_max += 10
    return n_max


def snapshot_scenarios(cfg: RunConfig, r: float):
    spec = cfg.spec(r)
    if _wants(cfg, "none"):
        yield "none", math.inf, EvolutionKernels.markov(spec)
    # both interruption pictures share the same Fock-diagonal dynamics
    for tag in ("shuttered", "measured"):
        if cfg.scenario == tag or (cfg.scenario == "all" and tag == "shuttered"):
            for x in cfg.pn_omega_c_tau:
                yield tag, x, EvolutionKernels.from_rates(measured_rates(x / r, spec))


def cmd_pn_snapshots(cfg: RunConfig, log=print) -> tuple[list[tuple], list[tuple]]:
    cat = cfg.cat()
    pn_rows, parity_rows = [], []
    panels, labels = [], []
    for r in cfg.r_values:
        big = cfg.spec(r).big_gamma
        scen = list(snapshot_scenarios(cfg, r))
        times = [gt / big for gt in cfg.snapshots]
        n_max = _adequate_n_max(cfg, [k for _, _, k in scen], times)
        for scenario, x, kern in scen:
            row_panels = []
            for gt, t in zip(cfg.snapshots, times):
                dist = dynamics.pn_distribution(t, kern, cat, n_max)
                for n, p in enumerate(dist.probs):
                    pn_rows.append((r, x, t, gt, n, p, scenario))
                parity_rows.append((r, x, t, gt, dist.parity_contrast(), dist.mean(), dist.total(),
                                    scenario))
                row_panels.append((f"Gamma t={gt:g}", list(dist.probs[:min(n_max + 1, 40)])))
            if scenario == "none" and r != cfg.r_values[0]:
                continue
            panels.append(row_panels)
            labels.append("no shutter" if scenario == "none" else f"{scenario} r={r:g} wct={x:g}")
    path = _out_path(cfg, "pn_snapshots.csv")
    write_csv(path, PN_COLUMNS, pn_rows, cfg, "pn-snapshots", sort_by=(0, 1, 2, 4, 6))
    ppath = _out_path(cfg, "parity.csv")
    write_csv(ppath, PARITY_COLUMNS, parity_rows, cfg, "pn-snapshots", sort_by=(0, 1, 2, 7))
    if cfg.svg:
        write_text(_out_path(cfg, "pn_snapshots.svg"),
                   svg.bar_grid(panels, labels, "number distribution snapshots"))
    log(f"wrote {len(pn_rows)} rows to {path} and {len(parity_rows)} rows to {ppath}")
    return pn_rows, parity_rows


# --- Wigner field ------------------------------------------------------------

def cmd_wigner_field(cfg: RunConfig, log=print) -> list[tuple]:
    _coherent_scenario(cfg, "wigner-field")
    cat = cfg.cat()
    r = cfg.r_values[0]
    spec = cfg.spec(r)
    big = spec.big_gamma
    scen = []
    if _wants(cfg, "none"):
        scen.append(("none", math.inf, EvolutionKernels.markov(spec)))
    if _wants(cfg, "shuttered"):
        x = cfg.omega_c_tau[0]
        scen.append(("shuttered", x, EvolutionKernels.from_rates(measured_rates(x / r, spec))))
    rows = []
    cuts = []
    for scenario, x, kern in scen:
        for gt in cfg.field_times:
            t = gt / big
            fld = dynamics.wigner_field(t, kern, cat, cfg.grid_points, cfg.half_width)
            for i, br in enumerate(fld.beta_r):
                for j, bi in enumerate(fld.beta_i):
                    rows.append((r, x, t, gt, br, bi, fld.values[i, j], scenario))
            mid = len(fld.beta_r) // 2
            label = "Markov" if scenario == "none" else f"omega_c tau={x:g}"
            cuts.append((f"{label}, Gamma t={gt:g}", list(fld.beta_i), list(fld.values[mid])))
    path = _out_path(cfg, "wigner_field.csv")
    write_csv(path, FIELD_COLUMNS, rows, cfg, "wigner-field", sort_by=(0, 1, 2, 7, 4, 5))
    if cfg.svg:
        write_text(_out_path(cfg, "wigner_cut.svg"),
                   svg.line_chart(cuts, f"W(0 + i beta_i), r={r:g}", "beta_i", "W"))
    log(f"wrote {len(rows)} rows to {path}")
    return rows


# --- verify / print-config -----------------------------------------------------

def cmd_verify(cfg: RunConfig, log=print) -> bool:
    report = run_verification(cfg, log=log)
    lines = report.lines()
    for line in lines[-2:]:
        log(line)
    write_text(_out_path(cfg, "verify_report.txt"), "\n".join(lines) + "\n")
    return report.passed


def cmd_print_config(cfg: RunConfig, log=print) -> None:
    sys.stdout.write(render_config(cfg))


# --- argument parsing ----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="INI configuration file")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--r", type=float, action="append", metavar="R",
                        help="omega_c/omega_0 (repeatable)")
    common.add_argument("--omega-c-tau", type=float, action="append", metavar="X",
                        help="interruption interval in units of 1/omega_c (repeatable)")
    common.add_argument("--alpha", type=float, help="cat amplitude")
    common.add_argument("--n0", type=float, help="thermal occupation at omega_0")
    common.add_argument("--g", type=float, help="system-reservoir coupling")
    common.add_argument("--scenario", choices=("all", "none", "shuttered", "measured"))
    common.add_argument("--svg", action="store_true", help="also write SVG charts")

    parser = argparse.ArgumentParser(prog="zenocat", description=__doc__)
    parser.add_argument("--version", action="version", version=f"zenocat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (("rates", "shuttered decay rates on an omega_c tau sweep"),
                           ("wigner-peak", "interference-peak decay curves"),
                           ("pn-snapshots", "photon-number distributions at snapshot times"),
                           ("wigner-field", "Wigner function on the phase-space grid"),
                           ("verify", "oracle certification suite"),
                           ("print-config", "print the resolved configuration")):
        sub.add_parser(name, parents=[common], help=helptext)
    return parser


def _overrides(ns) -> dict[str, dict[str, str]]:
    out: dict[str, dict[str, str]] = {}

    def put(section, key, value):
        out.setdefault(section, {})[key] = value

    if ns.out is not None:
        put("output", "dir", ns.out)
    if ns.r:
        put("reservoir", "r", ", ".join(repr(v) for v in ns.r))
    if ns.omega_c_tau:
        values = ", ".join(repr(v) for v in ns.omega_c_tau)
        put("schedule", "omega_c_tau", values)
        put("schedule", "pn_omega_c_tau", values)
        put("sweep", "omega_c_tau", values)
    if ns.alpha is not None:
        put("cat", "alpha", repr(ns.alpha))
    if ns.n0 is not None:
        put("reservoir", "n0", repr(ns.n0))
    if ns.g is not None:
        put("reservoir", "g", repr(ns.g))
    if ns.scenario is not None:
        put("run", "scenario", ns.scenario)
    if ns.svg:
        put("output", "svg", "true")
    return out


COMMANDS = {
    "rates": cmd_rates,
    "wigner-peak": cmd_wigner_peak,
    "pn-snapshots": cmd_pn_snapshots,
    "wigner-field": cmd_wigner_field,
    "verify": cmd_verify,
    "print-config": cmd_print_config,
}


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    err = sys.stderr
    try:
        cfg = load_config(ns.config, _overrides(ns))
        cfg.cat()
        for r in cfg.r_values:
            cfg.spec(r)
    except (ConfigError, ValueError, TypeError) as exc:
        print(f"zenocat: configuration error: {exc}", file=err)
        return EXIT_CONFIG
    try:
        with np.errstate(over="raise", invalid="raise"):
            result = COMMANDS[ns.command](cfg)
    except ConfigError as exc:
        print(f"zenocat: configuration error: {exc}", file=err)
        return EXIT_CONFIG
    except (QuadratureError, PropagationError, TruncationError, FloatingPointError,
            ZeroDivisionError, OverflowError) as exc:
        print(f"zenocat: numerical failure: {exc}", file=err)
        return EXIT_NUMERIC
    if ns.command == "verify" and not result:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
