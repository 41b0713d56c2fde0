"""Command-line interface.

    curvpend simulate|portrait|period|spectrum|verify [flags]

Every flag can also be given in a config file of ``key = value`` lines
(``#`` starts a comment) whose keys are the long flag names without the
leading dashes.  Precedence, lowest first: built-in defaults, the config
file (``--config``, or else the file named by ``$CURVPEND_CONFIG``),
command-line flags.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 numeric abort (partial output is still written).
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from . import analysis, integrate, oracle
from .model import (
    ConstantSpeed,
    ElasticState,
    PendulumParams,
    PiecewiseAccel,
    RigidState,
    SinusoidalAccel,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

ENV_CONFIG = "CURVPEND_CONFIG"

DEFAULTS = {
    "curvature": 1.0,
    "rod-length": 1.0,
    "mass": 1.0,
    "speed": 1.0,
    "accel": "none",
    "zeta0": 0.0,
    "zeta-dot0": 0.0,
    "elastic": False,
    "spring-k": 0.0,
    "l0": 0.0,
    "l-dot0": 0.0,
    "dt": 1e-3,
    "t-end": 10.0,
    "integrator": "rk4",
    "rel-tol": 1e-8,
    "abs-tol": 1e-10,
    "embed": False,
    "hbar": 0.01,
    "grid-n": 2048,
    "n-levels": 6,
    "output": None,
    "degrees": False,
    "sample-stride": 1,
    "zeta-min": -math.pi,
    "zeta-max": math.pi,
    "zeta-dot-min": -2.0,
    "zeta-dot-max": 2.0,
    "portrait-n": 21,
}

FLOAT_KEYS = {
    "curvature", "rod-length", "mass", "speed", "zeta0", "zeta-dot0", "spring-k",
    "l0", "l-dot0", "dt", "t-end", "rel-tol", "abs-tol", "hbar",
    "zeta-min", "zeta-max", "zeta-dot-min", "zeta-dot-max",
}
INT_KEYS = {"grid-n", "n-levels", "sample-stride", "portrait-n"}
BOOL_KEYS = {"elastic", "embed", "degrees"}
ANGLE_KEYS = ("zeta0", "zeta-dot0", "zeta-min", "zeta-max", "zeta-dot-min", "zeta-dot-max")


class ConfigError(ValueError):
    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")


# -- config parsing ---------------------------------------------------------------


def _convert(key, raw):
    if raw is None or not isinstance(raw, str):
        return raw
    try:
        if key in FLOAT_KEYS:
            return float(raw)
        if key in INT_KEYS:
            return int(raw)
    except ValueError:
        raise ConfigError(key, f"cannot parse {raw!r}") from None
    if key in BOOL_KEYS:
        low = raw.strip().lower()
        if low in ("1", "true", "yes", "on"):
            return True
        if low in ("0", "false", "no", "off"):
            return False
        raise ConfigError(key, f"expected a boolean, got {raw!r}")
    return raw


def read_config_file(path) -> dict:
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path!r}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in DEFAULTS:
            raise ConfigError(key, f"unknown key in {path}:{lineno}")
        values[key] = _convert(key, value)
    return values


def parse_accel(spec: str, v0: float):
    """``none``, ``const:A``, ``sin:A,W`` or ``piecewise:T0:A0,T1:A1,...``."""
    kind, _, arg = spec.strip().partition(":")
    try:
        if kind == "none" and not arg:
            return ConstantSpeed(v0)
        if kind == "const":
            return PiecewiseAccel(v0, [(0.0, float(arg))])
        if kind == "sin":
            amp, omega = (float(x) for x in arg.split(","))
            return SinusoidalAccel(amp, omega, v0)
        if kind == "piecewise":
            pairs = [item.split(":") for item in arg.split(",")]
            return PiecewiseAccel(v0, [(float(t), float(a)) for t, a in pairs])
    except ValueError as exc:
        raise ConfigError("accel", f"invalid profile {spec!r}: {exc}") from None
    raise ConfigError("accel", f"unknown profile {spec!r}")


@dataclass
class RunConfig:
    values: dict

    def __getitem__(self, key):
        return self.values[key]

    @property
    def params(self) -> PendulumParams:
        return PendulumParams(
            self["mass"], self["rod-length"], self["curvature"], spring_k=self["spring-k"]
        )

    @property
    def motion(self):
        return parse_accel(self["accel"], self["speed"])

    @property
    def spec(self) -> integrate.IntegratorSpec:
        return integrate.IntegratorSpec(
            self["integrator"], self["dt"], self["t-end"], self["rel-tol"],
            self["abs-tol"], self["sample-stride"],
        )


def validate(values: dict, command: str) -> RunConfig:
    v = dict(values)
    if v["degrees"]:
        for key in ANGLE_KEYS:
            v[key] = math.radians(v[key])
    for key in FLOAT_KEYS:
        if not math.isfinite(v[key]):
            raise ConfigError(key, "must be finite")
    K = v["curvature"]
    if v["mass"] <= 0:
        raise ConfigError("mass", "must be > 0")
    if v["rod-length"] <= 0:
        raise ConfigError("rod-length", "must be > 0")
    if K > 0 and v["rod-length"] * math.sqrt(K) >= math.pi:
        raise ConfigError("rod-length", "rod-length*sqrt(curvature) must be < pi")
    if v["spring-k"] < 0:
        raise ConfigError("spring-k", "must be >= 0")
    for key in ("dt", "t-end", "rel-tol", "abs-tol", "hbar"):
        if v[key] <= 0:
            raise ConfigError(key, "must be > 0")
    if v["sample-stride"] < 1:
        raise ConfigError("sample-stride", "must be >= 1")
    if v["integrator"] not in integrate.METHODS:
        raise ConfigError("integrator", f"must be one of {', '.join(integrate.METHODS)}")
    motion = parse_accel(v["accel"], v["speed"])
    constant = isinstance(motion, ConstantSpeed)

    if command == "simulate":
        if v["elastic"]:
            if K == 0:
                raise ConfigError("curvature", "the elastic model needs curvature != 0")
            if not constant:
                raise ConfigError("accel", "the elastic model supports constant speed only")
            r = v["rod-length"] + v["l0"]
            if r <= 0 or (K > 0 and r * math.sqrt(K) >= math.pi):
                raise ConfigError("l0", "rod-length + l0 outside the valid range")
        if v["integrator"] == "leapfrog" and (v["elastic"] or not constant):
            raise ConfigError("integrator", "leapfrog needs a rigid rod and constant speed")
        if not constant and K == 0:
            raise ConfigError("accel", "an accelerated pivot needs curvature != 0")
        if v["embed"] and K == 0:
            raise ConfigError("embed", "embedding needs curvature != 0")
    elif command == "portrait":
        if v["portrait-n"] < 2:
            raise ConfigError("portrait-n", "must be >= 2")
        if K == 0 or v["speed"] == 0:
            raise ConfigError("curvature", "portrait needs curvature != 0 and speed != 0")
    elif command == "period":
        if K == 0:
            raise ConfigError("curvature", "period needs curvature != 0")
        if v["speed"] == 0:
            raise ConfigError("speed", "period needs speed != 0")
        if not constant:
            raise ConfigError("accel", "period needs a constant-speed pivot")
    elif command == "spectrum":
        if K <= 0:
            raise ConfigError("curvature", "spectrum is implemented for curvature > 0 only")
        if v["grid-n"] < 200:
            raise ConfigError("grid-n", "must be >= 200")
        if not 1 <= v["n-levels"] <= v["grid-n"]:
            raise ConfigError("n-levels", "must lie in [1, grid-n]")
    return RunConfig(v)


# -- output -----------------------------------------------------------------------


def fmt(x) -> str:
    return format(float(x), ".17g")


@contextmanager
def _open_output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _write_rows(fh, header, rows):
    fh.write(",".join(header) + "\n")
    for row in rows:
        fh.write(",".join(fmt(x) for x in row) + "\n")


# -- commands -----------------------------------------------------------------------


def cmd_simulate(cfg: RunConfig) -> int:
    p, spec = cfg.params, cfg.spec
    try:
        if cfg["elastic"]:
            s0 = ElasticState(cfg["zeta0"], cfg["l0"], cfg["zeta-dot0"], cfg["l-dot0"])
            traj = integrate.simulate_elastic(p, cfg["speed"], s0, spec, embed=cfg["embed"])
            cols = [traj.t, traj.zeta, traj.zeta_dot, traj.l, traj.l_dot]
            header = ["t", "zeta", "zeta_dot", "l", "l_dot"]
        else:
            s0 = RigidState(cfg["zeta0"], cfg["zeta-dot0"])
            traj = integrate.simulate_rigid(p, cfg.motion, s0, spec, embed=cfg["embed"])
            cols = [traj.t, traj.zeta, traj.zeta_dot]
            header = ["t", "zeta", "zeta_dot"]
    except integrate.IntegrationError as exc:
        print(f"numeric abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    cols += [traj.energy, traj.first_integral]
    header += ["H", "first_integral"]
    if traj.embedded is not None:
        cols += list(traj.embedded.T)
        header += ["x_pivot", "y_pivot", "z_pivot", "x_mass", "y_mass", "z_mass"]
    with _open_output(cfg["output"]) as fh:
        _write_rows(fh, header, zip(*cols))
    if traj.error:
        print(f"numeric abort: {traj.error}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def portrait_grid(cfg: RunConfig):
    """(zeta0, zeta_dot0, first_integral, classification) over the grid."""
    n = cfg["portrait-n"]
    K, v = cfg["curvature"], cfg["speed"]
    z = np.linspace(cfg["zeta-min"], cfg["zeta-max"], n)
    zd = np.linspace(cfg["zeta-dot-min"], cfg["zeta-dot-max"], n)
    Z, ZD = np.meshgrid(z, zd, indexing="ij")
    fi = analysis.first_integral(K, v, RigidState(Z.ravel(), ZD.ravel()))
    labels = analysis.classify(K, v, fi)
    return Z.ravel(), ZD.ravel(), fi, labels


def cmd_portrait(cfg: RunConfig) -> int:
    Z, ZD, fi, labels = portrait_grid(cfg)
    with _open_output(cfg["output"]) as fh:
        fh.write("zeta0,zeta_dot0,first_integral,classification\n")
        for row in zip(Z, ZD, fi, labels):
            fh.write(f"{fmt(row[0])},{fmt(row[1])},{fmt(row[2])},{row[3]}\n")
    return EXIT_OK


def cmd_period(cfg: RunConfig) -> int:
    K, v = cfg["curvature"], cfg["speed"]
    s0 = RigidState(cfg["zeta0"], cfg["zeta-dot0"])
    try:
        u0 = analysis.amplitude(K, v, s0)
        T_exact = analysis.period_exact(K, v, u0)
    except ValueError as exc:
        raise ConfigError("zeta0", str(exc)) from None
    omega = analysis.small_osc_frequency(K, v)
    # long enough for at least two full periods
    t_end = max(cfg["t-end"], 2.5 * T_exact)
    spec = integrate.IntegratorSpec(
        cfg["integrator"], cfg["dt"], t_end, cfg["rel-tol"], cfg["abs-tol"], cfg["sample-stride"]
    )
    traj = integrate.simulate_rigid(cfg.params, ConstantSpeed(v), s0, spec)
    report = {
        "curvature": K,
        "speed": v,
        "amplitude_u0": u0,
        "period_small_oscillation": 2 * math.pi / omega,
        "period_exact": T_exact,
    }
    status = EXIT_OK
    try:
        if traj.error:
            raise ValueError(traj.error)
        T_sim = analysis.measure_period(
            traj.t, traj.zeta, traj.zeta_dot, analysis.stable_center(K)
        )
        report["period_simulated"] = T_sim
        report["relative_deviation"] = abs(T_sim - T_exact) / T_exact
    except ValueError as exc:
        print(f"numeric abort: {exc}", file=sys.stderr)
        status = EXIT_NUMERIC
    with _open_output(cfg["output"]) as fh:
        for key, val in report.items():
            fh.write(f"{key}: {fmt(val)}\n")
        fh.write(f"integrator: {spec.method} dt={fmt(spec.dt)} t_end={fmt(t_end)}\n")
    return status


def cmd_spectrum(cfg: RunConfig) -> int:
    p, v, hbar = cfg.params, cfg["speed"], cfg["hbar"]
    n = cfg["n-levels"]
    try:
        num = analysis.schrodinger_spectrum(p, v, hbar, cfg["grid-n"], n)
    except analysis.SpectrumError as exc:
        print(f"numeric abort: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    # the periodic domain holds two wells, so each harmonic level appears twice
    closed = analysis.quantum_levels(p, v, hbar, (n - 1) // 2).levels
    with _open_output(cfg["output"]) as fh:
        fh.write("n,E_closed_form,E_numeric,deviation\n")
        for i, e in enumerate(num.levels):
            c = closed[i // 2]
            fh.write(f"{i},{fmt(c)},{fmt(e)},{fmt((e - c) / c)}\n")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    reports = oracle.standard_checks(v=cfg["speed"])
    with _open_output(cfg["output"]) as fh:
        fh.write(oracle.format_reports(reports) + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_VERIFY_FAILED


COMMANDS = {
    "simulate": cmd_simulate,
    "portrait": cmd_portrait,
    "period": cmd_period,
    "spectrum": cmd_spectrum,
    "verify": cmd_verify,
}


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("model and run options")
    for key in DEFAULTS:
        flag = "--" + key
        if key in BOOL_KEYS:
            g.add_argument(flag, dest=key, action="store_true")
        elif key == "integrator":
            g.add_argument(flag, dest=key, choices=integrate.METHODS)
        else:
            g.add_argument(flag, dest=key, metavar=key.upper().replace("-", "_"))
    g.add_argument("--config", dest="config", metavar="FILE",
                   help=f"config file (default: ${ENV_CONFIG})")

    parser = argparse.ArgumentParser(
        prog="curvpend",
        description="Pendulums dragged along geodesics of constant-curvature surfaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "integrate a trajectory and write CSV",
        "portrait": "classify a grid of initial conditions",
        "period": "compare exact and simulated oscillation period",
        "spectrum": "closed-form vs finite-difference quantum levels",
        "verify": "check the equations of motion against the Euler-Lagrange oracle",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name], argument_default=argparse.SUPPRESS)
    return parser


def resolve(argv=None, environ=None):
    """Parse argv and merge with config file and defaults; returns (command, values)."""
    environ = os.environ if environ is None else environ
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    config_path = args.pop("config", None) or environ.get(ENV_CONFIG) or None
    values = dict(DEFAULTS)
    if config_path:
        values.update(read_config_file(config_path))
    for key, raw in args.items():
        values[key] = _convert(key, raw)
    return command, values


def main(argv=None) -> int:
    try:
        command, values = resolve(argv)
        cfg = validate(values, command)
        return COMMANDS[command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
