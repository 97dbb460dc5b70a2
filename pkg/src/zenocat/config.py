"""Run configuration: INI sections, validated, with command-line overrides.

Times in the ``schedule`` section are in units of ``1/Gamma`` (the Markovian
damping rate of each ``r``), so the no-shutter reference curve is the same
for every ``r``.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass
from typing import Mapping

from .reservoir import BoseEinstein, ConstantN, HighTemperature, ReservoirSpec
from .states import CatState

DEFAULTS: dict[str, dict[str, str]] = {
    "reservoir": {
        "r": "10, 0.1",
        "g": "0.1",
        "omega_0": "1",
        "thermal": "high-temperature",
        "n0": "100",
    },
    "cat": {
        "alpha": "2",
        "n_max": "auto",
    },
    "schedule": {
        "omega_c_tau": "1, 0.1, 0.01",
        "pn_omega_c_tau": "0.01",
        "t_end": "0.005",
        "samples": "101",
        "snapshots": "0, 0.0005, 0.002, 0.01",
        "field_times": "0",
    },
    "sweep": {
        "omega_c_tau": "",
        "rate_min": "1e-3",
        "rate_max": "1e2",
        "rate_points": "21",
        "workers": "1",
    },
    "grid": {
        "points": "257",
        "half_width": "auto",
        "fourier_spacing": "0.05",
    },
    "output": {
        "dir": "zenocat-out",
        "svg": "false",
    },
    "run": {
        "scenario": "all",
    },
}

THERMAL_MODELS = ("high-temperature", "constant", "bose-einstein")
SCENARIOS = ("all", "none", "shuttered", "measured")


class ConfigError(ValueError):
    """Invalid or unknown configuration entry."""


def _floats(text: str, key: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(v) for v in text.replace(",", " ").split())
    except ValueError as exc:
        raise ConfigError(f"{key}: expected numbers, got {text!r}") from exc
    if any(not math.isfinite(v) for v in vals):
        raise ConfigError(f"{key}: values must be finite")
    return vals


def _float(text: str, key: str) -> float:
    vals = _floats(text, key)
    if len(vals) != 1:
        raise ConfigError(f"{key}: expected a single number, got {text!r}")
    return vals[0]


def _int(text: str, key: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: expected an integer, got {text!r}") from exc


def _bool(text: str, key: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {text!r}")


@dataclass(frozen=True)
class RunConfig:
    raw: tuple[tuple[str, tuple[tuple[str, str], ...]], ...]
    r_values: tuple[float, ...]
    g: float
    omega_0: float
    thermal: str
    n0: float
    alpha: float
    n_max: int | None
    omega_c_tau: tuple[float, ...]
    pn_omega_c_tau: tuple[float, ...]
    t_end: float
    samples: int
    snapshots: tuple[float, ...]
    field_times: tuple[float, ...]
    sweep_omega_c_tau: tuple[float, ...]
    workers: int
    grid_points: int
    half_width: float | None
    fourier_spacing: float
    out_dir: str
    svg: bool
    scenario: str

    def thermal_model(self):
        if self.thermal == "constant":
            return ConstantN(self.n0)
        if self.thermal == "high-temperature":
            return HighTemperature(self.n0)
        # Planck law with N(omega_0) = n0
        return BoseEinstein(1.0 / math.log1p(1.0 / self.n0))

    def spec(self, r: float, g: float | None = None) -> ReservoirSpec:
        return ReservoirSpec.from_ratio(r, self.g if g is None else g, self.thermal_model(),
                                        self.omega_0)

    def cat(self) -> CatState:
        return CatState(self.alpha)

    def cat_n_max(self) -> int:
        return self.n_max if self.n_max is not None else self.cat().default_n_max()

    def rate_grid(self) -> tuple[float, ...]:
        return self.sweep_omega_c_tau

    def header_lines(self) -> list[str]:
        lines = []
        for section, items in self.raw:
            lines.append(f"[{section}]")
            lines.extend(f"{k} = {v}" for k, v in items)
        return lines


def _log_grid(lo: float, hi: float, n: int) -> tuple[float, ...]:
    if n == 1:
        return (lo,)
    step = (math.log10(hi) - math.log10(lo)) / (n - 1)
    return tuple(float(f"{10 ** (math.log10(lo) + k * step):.12g}") for k in range(n))


def load_config(path: str | None = None, overrides: Mapping[str, Mapping[str, str]] | None = None
                ) -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser.read_dict(DEFAULTS)
    if path is not None:
        user = configparser.ConfigParser(interpolation=None)
        user.optionxform = str
        try:
            with open(path, encoding="utf-8") as fh:
                user.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path!r}: {exc}") from exc
        _merge(parser, user)
    if overrides:
        for section, items in overrides.items():
            for key, value in items.items():
                _set(parser, section, key, value)
    return _build(parser)


def _set(parser, section, key, value):
    if section not in DEFAULTS:
        raise ConfigError(f"unknown section [{section}]")
    if key not in DEFAULTS[section]:
        raise ConfigError(f"unknown key {key!r} in [{section}]")
    parser.set(section, key, str(value))


def _merge(parser, user):
    for section in user.sections():
        for key, value in user.items(section):
            _set(parser, section, key, value)


def _build(p) -> RunConfig:
    raw = tuple((s, tuple((k, p.get(s, k)) for k in DEFAULTS[s])) for s in DEFAULTS)
    res = p["reservoir"]
    r_values = _floats(res["r"], "reservoir.r")
    if not r_values or any(v <= 0 for v in r_values):
        raise ConfigError("reservoir.r: need one or more positive values")
    g = _float(res["g"], "reservoir.g")
    omega_0 = _float(res["omega_0"], "reservoir.omega_0")
    if g <= 0 or omega_0 <= 0:
        raise ConfigError("reservoir.g and reservoir.omega_0 must be positive")
    thermal = res["thermal"].strip().lower()
    if thermal not in THERMAL_MODELS:
        raise ConfigError(f"reservoir.thermal must be one of {', '.join(THERMAL_MODELS)}")
    n0 = _float(res["n0"], "reservoir.n0")
    if n0 < 0 or (n0 == 0 and thermal != "constant"):
        raise ConfigError("reservoir.n0 must be positive (nonnegative for constant)")

    cat = p["cat"]
    alpha = _float(cat["alpha"], "cat.alpha")
    n_max = None if cat["n_max"].strip() == "auto" else _int(cat["n_max"], "cat.n_max")
    if n_max is not None and n_max < 1:
        raise ConfigError("cat.n_max must be positive or 'auto'")

    sch = p["schedule"]
    omega_c_tau = _floats(sch["omega_c_tau"], "schedule.omega_c_tau")
    pn_omega_c_tau = _floats(sch["pn_omega_c_tau"], "schedule.pn_omega_c_tau")
    t_end = _float(sch["t_end"], "schedule.t_end")
    samples = _int(sch["samples"], "schedule.samples")
    snapshots = _floats(sch["snapshots"], "schedule.snapshots")
    field_times = _floats(sch["field_times"], "schedule.field_times")
    if any(v <= 0 for v in omega_c_tau + pn_omega_c_tau):
        raise ConfigError("omega_c_tau values must be positive")
    if t_end <= 0 or samples < 2:
        raise ConfigError("schedule.t_end must be positive and samples >= 2")
    if any(v < 0 for v in snapshots + field_times):
        raise ConfigError("snapshot times must be nonnegative")

    sw = p["sweep"]
    if sw["omega_c_tau"].strip():
        sweep = _floats(sw["omega_c_tau"], "sweep.omega_c_tau")
        if any(v <= 0 for v in sweep):
            raise ConfigError("sweep.omega_c_tau values must be positive")
    else:
        lo = _float(sw["rate_min"], "sweep.rate_min")
        hi = _float(sw["rate_max"], "sweep.rate_max")
        npts = _int(sw["rate_points"], "sweep.rate_points")
        if not (0 < lo <= hi) or npts < 1:
            raise ConfigError("sweep: need 0 < rate_min <= rate_max and rate_points >= 1")
        sweep = _log_grid(lo, hi, npts)
    workers = _int(sw["workers"], "sweep.workers")
    if workers < 1:
        raise ConfigError("sweep.workers must be at least 1")

    gr = p["grid"]
    points = _int(gr["points"], "grid.points")
    half_width = None if gr["half_width"].strip() == "auto" else _float(gr["half_width"], "grid.half_width")
    spacing = _float(gr["fourier_spacing"], "grid.fourier_spacing")
    if points < 3 or (half_width is not None and half_width <= 0) or spacing <= 0:
        raise ConfigError("grid: points >= 3, half_width > 0 and fourier_spacing > 0 required")

    out = p["output"]
    scenario = p["run"]["scenario"].strip().lower()
    if scenario not in SCENARIOS:
        raise ConfigError(f"run.scenario must be one of {', '.join(SCENARIOS)}")

    return RunConfig(raw, r_values, g, omega_0, thermal, n0, alpha, n_max, omega_c_tau,
                     pn_omega_c_tau, t_end, samples, snapshots, field_times, sweep, workers,
                     points, half_width, spacing, out["dir"], _bool(out["svg"], "output.svg"),
                     scenario)


def render_config(cfg: RunConfig) -> str:
    return "\n".join(_with_blank_lines(cfg.header_lines())) + "\n"


def _with_blank_lines(lines):
    first = True
    for line in lines:
        if line.startswith("[") and not first:
            yield ""
        first = False
        yield line
