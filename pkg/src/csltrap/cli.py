"""Command-line entry point.

    csltrap chi     shape factors chi(x) for sphere and cube
    csltrap err     CSL energy raising rate for the configured body
    csltrap budget  heating budget at the configured trap
    csltrap sweep   heating against trap size d (mechanical, electric, CSL)
    csltrap map     smallest detectable lambda over (r_c, L, p)
    csltrap bound   pressure bound and collision rate
    csltrap detect  resolvable energy and detection time
    csltrap oracle  Monte-Carlo check of the analytic heating rates

Exit status: 0 on success, 1 for configuration or usage errors, 2 for
numerical/domain errors. Tables go to ``--out`` (or stdout); logs go to stderr.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys

import numpy as np

from . import __version__
from .config import RunConfig, load_config
from .constants import K_B
from .csl import chi, chi_cube, chi_sphere, csl_param_convert, energy_raising_rate
from .errors import ConfigError, CslTrapError
from .feasibility import (
    detectability_map,
    detection_energy,
    detection_time,
    heating_budget,
    heating_vs_size_sweep,
    lambda_min,
)
from .noise import (
    collision_heating,
    collision_rate,
    electric_psd,
    max_pressure,
    mean_speed,
    mechanical_psd,
    trap_frequency,
)
from .oracle import (
    OneOverF,
    SimulationConfig,
    TabulatedPSD,
    WhiteForce,
    simulate_collision_kicks,
    synthesis_band,
    verify_heating_formula,
)
from .tables import OutputTable, to_csv, to_json

log = logging.getLogger("csltrap")

COMMANDS = ("chi", "err", "budget", "sweep", "map", "bound", "detect", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="key = value configuration file")
    common.add_argument("--out", metavar="PATH", help="write the table here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, help="override sim.seed")
    common.add_argument("--threads", type=int, default=1, help="worker threads for map/oracle")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="csltrap", description="CSL heating feasibility analysis for a Paul trap")
    parser.add_argument("--version", action="version", version=f"csltrap {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    helps = {
        "chi": "shape factor curves for sphere and cube",
        "err": "CSL energy raising rate",
        "budget": "heating budget for the configured trap",
        "sweep": "heating against trap size",
        "map": "smallest detectable lambda map",
        "bound": "pressure bound and collision rate",
        "detect": "detection energy and time",
        "oracle": "Monte-Carlo verification report",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def cmd_chi(cfg: RunConfig, args) -> OutputTable:
    x = np.logspace(math.log10(cfg.get("chi.x_min")), math.log10(cfg.get("chi.x_max")), cfg.get("chi.points"))
    table = OutputTable(["x", "chi_sphere", "chi_cube"], ["1", "1", "1"])
    for xi, s, c in zip(x, chi_sphere(x), chi_cube(x)):
        table.append(float(xi), float(s), float(c))
    return table


def cmd_err(cfg: RunConfig, args) -> OutputTable:
    body, csl = cfg.body, cfg.csl
    ups = energy_raising_rate(body, csl)
    gamma, alpha = csl_param_convert(csl)
    table = OutputTable(
        ["shape", "L", "r_c", "lambda", "x", "chi", "upsilon", "upsilon_nK_per_min", "gamma", "alpha"],
        ["-", "m", "m", "1/s", "1", "1", "W", "nK/min", "m^3/s", "1/m^2"],
    )
    x = body.L / csl.r_c
    table.append(
        body.shape.value, body.L, csl.r_c, csl.lam, x, chi(body.shape, x), ups, ups * 60.0 / K_B * 1e9, gamma, alpha
    )
    return table


def cmd_budget(cfg: RunConfig, args) -> OutputTable:
    b = heating_budget(cfg.body, cfg.trap, cfg.gas, cfg.noise, cfg.csl)
    lam = lambda_min(cfg.csl.r_c, cfg.body, cfg.trap, cfg.gas, cfg.noise)
    table = OutputTable(
        [
            "omega0", "f0", "upsilon_csl", "gamma_mechanical", "gamma_electric", "gamma_magnetic",
            "gamma_induced", "gamma_collision", "total_noise", "dominant_noise_source", "detectable",
            "lambda_min",
        ],
        ["rad/s", "Hz", "W", "W", "W", "W", "W", "W", "W", "-", "-", "1/s"],
    )
    table.append(
        b.omega0, b.omega0 / (2 * math.pi), b.upsilon_csl, b.gamma_mechanical, b.gamma_electric,
        b.gamma_magnetic, b.gamma_induced, b.gamma_collision, b.total_noise, b.dominant_source,
        b.detectable, lam,
    )
    return table


def cmd_sweep(cfg: RunConfig, args) -> OutputTable:
    points = heating_vs_size_sweep(
        cfg.body,
        (cfg.get("sweep.d_min"), cfg.get("sweep.d_max")),
        cfg.get("sweep.points"),
        trap=cfg.trap,
        noise=cfg.noise,
        csl=cfg.csl,
    )
    table = OutputTable(
        ["d", "f", "gamma_mechanical", "gamma_electric", "upsilon"], ["m", "Hz", "W", "W", "W"]
    )
    for p in points:
        table.append(p.d, p.f, p.gamma_mechanical, p.gamma_electric, p.upsilon)
    return table


def cmd_map(cfg: RunConfig, args) -> OutputTable:
    rows = detectability_map(cfg.map, threads=args.threads)
    table = OutputTable(
        ["r_c", "L", "pressure", "lambda_min", "dominant_noise_source", "omega0", "d_used"],
        ["m", "m", "Pa", "1/s", "-", "rad/s", "m"],
    )
    for r in rows:
        table.append(r.r_c, r.L, r.pressure, r.lambda_min, r.dominant_noise_source, r.omega0, r.d_used)
    return table


def cmd_bound(cfg: RunConfig, args) -> OutputTable:
    ups = energy_raising_rate(cfg.body, cfg.csl)
    p_max = max_pressure(ups, cfg.body, cfg.gas)
    rate = collision_rate(cfg.body, cfg.gas)
    table = OutputTable(
        ["upsilon", "p_max", "pressure", "gamma_collision", "collision_rate", "collision_interval", "mean_speed"],
        ["W", "Pa", "Pa", "W", "1/s", "s", "m/s"],
    )
    interval = 1.0 / rate if rate > 0 else math.inf
    table.append(ups, p_max, cfg.gas.pressure, collision_heating(cfg.body, cfg.gas), rate, interval, mean_speed(cfg.gas))
    return table


def cmd_detect(cfg: RunConfig, args) -> OutputTable:
    f = cfg.get("detection.f")
    omega0 = 2 * math.pi * f
    e0 = detection_energy(cfg.detection, omega0)
    ups = energy_raising_rate(cfg.body, cfg.csl)
    table = OutputTable(
        ["nbar", "f", "omega0", "E0", "E0_over_kB", "upsilon", "detection_time"],
        ["1", "Hz", "rad/s", "J", "nK", "W", "s"],
    )
    table.append(cfg.detection.nbar, f, omega0, e0, e0 / K_B * 1e9, ups, detection_time(e0, ups))
    return table


def sim_config(cfg: RunConfig, omega0: float) -> SimulationConfig:
    period = 2 * math.pi / omega0
    s = cfg.sim
    return SimulationConfig(
        dt=s.dt if s.dt is not None else period / 100,
        duration=s.duration if s.duration is not None else 100 * period,
        ensemble_size=s.ensemble_size,
        master_seed=s.seed,
        initial_energy=s.initial_energy,
    )


def cmd_oracle(cfg: RunConfig, args) -> OutputTable:
    body, trap = cfg.body, cfg.trap
    m = body.mass
    omega0 = trap_frequency(body.charge, trap, m)
    f0 = omega0 / (2 * math.pi)
    sim = sim_config(cfg, omega0)
    threads = args.threads

    s_f = body.charge**2 * electric_psd(omega0, trap, cfg.noise.electric)
    lo, hi = synthesis_band(f0, sim.dt)
    mech = TabulatedPSD.from_function(
        lambda f: mechanical_psd(f, cfg.noise.mechanical), lo * 0.99, hi * 1.01
    )
    table = OutputTable(
        ["check", "analytic", "simulated", "ratio", "stderr", "kicks", "expected_kicks"],
        ["-", "W", "W", "1", "W", "1", "1"],
    )
    checks = [
        ("white_force", WhiteForce(s_f), 1.0),
        ("one_over_f_force", OneOverF(s_f * omega0), 1.0),
        ("position_noise", mech, m * omega0**2),
    ]
    for name, spec, coupling in checks:
        log.info("oracle: %s", name)
        r = verify_heating_formula(m, omega0, spec, sim, coupling=coupling, threads=threads)
        table.append(name, r.analytic, r.simulated, r.ratio, r.stderr, 0, 0.0)
    log.info("oracle: collisions")
    gas = cfg.gas.with_pressure(cfg.sim.collision_pressure)
    c = simulate_collision_kicks(body, gas, omega0, sim, threads=threads)
    table.append("collisions", c.analytic, c.simulated, c.ratio, c.stderr, c.kicks, c.expected_kicks)
    return table


HANDLERS = {
    "chi": cmd_chi,
    "err": cmd_err,
    "budget": cmd_budget,
    "sweep": cmd_sweep,
    "map": cmd_map,
    "bound": cmd_bound,
    "detect": cmd_detect,
    "oracle": cmd_oracle,
}


def run_command(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"csltrap: usage error: {exc}", file=sys.stderr)
        return 1
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    if args.threads < 1:
        print("csltrap: usage error: --threads must be >= 1", file=sys.stderr)
        return 1
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = cfg.with_seed(args.seed)
    except ConfigError as exc:
        print(f"csltrap: config error: {exc}", file=sys.stderr)
        return 1
    try:
        table = HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"csltrap: config error: {exc}", file=sys.stderr)
        return 1
    except (CslTrapError, ArithmeticError, ValueError) as exc:
        print(f"csltrap: numerical error: {exc}", file=sys.stderr)
        return 2
    metadata = {
        "tool": f"csltrap {__version__}",
        "command": args.command,
        "config_sha256": cfg.digest(),
        "seed": cfg.sim.seed,
    }
    text = to_json(table, metadata) if args.format == "json" else to_csv(table, metadata)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        log.info("wrote %d rows to %s", len(table.rows), args.out)
    else:
        sys.stdout.write(text)
    return 0


def main() -> None:
    try:
        code = run_command()
        sys.stdout.flush()
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        sys.stdout = open(os.devnull, "w")
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
