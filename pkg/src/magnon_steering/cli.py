"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 unstable parameters,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import yaml

from . import experiments as ex
from .model import TWO_PI, InvalidSpec, SystemSpec, frequency_from_field, spec_violations

EXIT_OK, EXIT_CONFIG, EXIT_UNSTABLE, EXIT_IO = 0, 1, 2, 3

# config key -> (unit label, factor to SI, or None for kappa_a-relative rates)
CONFIG_KEYS = {
    "omega_a": ("GHz", TWO_PI * 1e9),
    "omega_1": ("GHz", TWO_PI * 1e9),
    "omega_2": ("GHz", TWO_PI * 1e9),
    "omega_s": ("GHz", TWO_PI * 1e9),
    "field_1": ("T", None),
    "field_2": ("T", None),
    "kappa_a": ("MHz", TWO_PI * 1e6),
    "kappa_1": ("kappa_a", None),
    "kappa_2": ("kappa_a", None),
    "gamma_1": ("kappa_a", None),
    "gamma_2": ("kappa_a", None),
    "lambda_opa": ("kappa_a", None),
    "phi_opa": ("rad", 1.0),
    "squeeze_r": ("dimensionless", 1.0),
    "squeeze_theta": ("rad", 1.0),
    "temperature": ("mK", 1e-3),
}

BASELINE = {
    "omega_a": 10.0, "omega_1": 10.0, "omega_2": 10.0, "omega_s": 10.0,
    "kappa_a": 5.0, "kappa_1": 0.2, "kappa_2": 0.2,
    "gamma_1": 4.0, "gamma_2": 4.0,
    "lambda_opa": 0.0, "phi_opa": 0.0,
    "squeeze_r": 0.0, "squeeze_theta": 0.0,
    "temperature": 20.0,
}

# (r, lambda) used by each figure unless overridden
FIGURE_DEFAULTS = {
    2: {},
    3: {"squeeze_r": ex.FIG3_R, "lambda_opa": ex.FIG3_LAMBDA},
    4: {"squeeze_r": ex.FIG3_R, "lambda_opa": ex.FIG3_LAMBDA},
    5: {"squeeze_r": ex.FIG3_R, "lambda_opa": ex.FIG3_LAMBDA},
    6: {"squeeze_r": 2.0, "lambda_opa": 0.49},
}

FIG6_PAIRS = [(1.0, 0.0), (1.0, 0.49), (2.0, 0.0), (2.0, 0.49)]


class ConfigError(Exception):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _units_help() -> str:
    lines = ["config keys and units:"]
    for key, (unit, _) in CONFIG_KEYS.items():
        lines.append(f"  {key:<14} {unit}")
    lines.append("frequencies are ordinary (converted by 2*pi); field_k sets omega_k from a bias field")
    return "\n".join(lines)


def flatten(tree: dict) -> dict:
    """Collapse nested sections; leaves keep their own name."""
    out = {}
    for key, value in tree.items():
        if isinstance(value, dict):
            out.update(flatten(value))
        else:
            out[str(key)] = value
    return out


def load_config(path) -> dict:
    with open(path) as fh:
        tree = yaml.safe_load(fh) or {}
    if not isinstance(tree, dict):
        raise ConfigError([f"{path}: top level must be a mapping"])
    return flatten(tree)


def parse_set(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError([f"--set expects key=value, got {item!r}"])
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def validate(config: dict) -> list[str]:
    """All problems with a flat config (config units); empty if usable."""
    problems = []
    values = {}
    for key, raw in config.items():
        if key not in CONFIG_KEYS:
            problems.append(f"unknown config key {key!r}")
            continue
        try:
            values[key] = float(raw)
        except (TypeError, ValueError):
            problems.append(f"{key} must be a number, got {raw!r}")
    for key in ("field_1", "field_2"):
        if key in values and not values[key] > 0:
            problems.append(f"{key} must be positive")
    problems += spec_violations({k: v for k, v in values.items() if not k.startswith("field_")})
    return problems


def build_spec(config: dict) -> SystemSpec:
    """SystemSpec from a flat config in config units, over the baseline."""
    problems = validate(config)
    if problems:
        raise ConfigError(problems)
    values = {**BASELINE, **{k: float(v) for k, v in config.items()}}
    kappa_a = values["kappa_a"] * CONFIG_KEYS["kappa_a"][1]
    fields = {}
    for key, value in values.items():
        unit, factor = CONFIG_KEYS[key]
        if key.startswith("field_"):
            continue
        fields[key] = value * (kappa_a if factor is None else factor)
    for k in ("1", "2"):
        if f"field_{k}" in values:
            fields[f"omega_{k}"] = frequency_from_field(values[f"field_{k}"])
    try:
        return SystemSpec(**fields)
    except InvalidSpec as err:
        raise ConfigError(err.violations) from err


def resolve(args, extra_defaults: dict | None = None) -> dict:
    """Flat config: figure defaults < config file < --set < shortcut flags."""
    config = dict(extra_defaults or {})
    if getattr(args, "config", None):
        config.update(load_config(args.config))
    config.update(parse_set(getattr(args, "set", None)))
    for flag, key in (("r", "squeeze_r"), ("lam", "lambda_opa"), ("temp", "temperature")):
        value = getattr(args, flag, None)
        if value is not None:
            config[key] = value
    return config


# --- commands -----------------------------------------------------------------

def _print_record(rec, out=None):
    out = out or sys.stdout
    print(f"stability margin   {rec.margin: .6g} kappa_a", file=out)
    rows = [
        ("S_X1", rec.s_x1, "dB"), ("S_Y1", rec.s_y1, "dB"),
        ("S_X2", rec.s_x2, "dB"), ("S_Y2", rec.s_y2, "dB"),
        ("E12", rec.e12, ""), ("G12", rec.g12, ""), ("G21", rec.g21, ""), ("GS", rec.gs, ""),
        ("n_a", rec.pop_a, "quanta"), ("n_1", rec.pop_1, "quanta"), ("n_2", rec.pop_2, "quanta"),
    ]
    for name, value, unit in rows:
        print(f"{name:<18} {value: .10g} {unit}".rstrip(), file=out)


def cmd_point(args) -> int:
    config = resolve(args)
    spec = build_spec(config)
    rec, _ = ex.evaluate_point(spec)
    if not rec.stable:
        print(f"unstable parameters: stability margin {rec.margin:+.6g} kappa_a "
              f"(needs < -{ex.STABILITY_EPS:g})", file=sys.stderr)
        return EXIT_UNSTABLE
    _print_record(rec)
    grid = ex.SweepGrid([], [rec])
    if args.out:
        out = _outdir(args.out)
        ex.write_csv(out / "point.csv", grid, config)
    else:
        print()
        ex.write_csv(sys.stdout, grid, config)
    return EXIT_OK


def _outdir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_sweep(args) -> int:
    config = resolve(args)
    base = build_spec(config)
    key = args.param
    if key not in CONFIG_KEYS or key.startswith("field_"):
        raise ConfigError([f"cannot sweep {key!r}"])
    num = args.grid or 101
    unit, factor = CONFIG_KEYS[key]
    if factor is None:
        setter = lambda s, v: s.in_kappa_units(**{key: v})  # noqa: E731
    else:
        setter = lambda s, v: s.replace(**{key: v * factor})  # noqa: E731
    grid = ex.sweep(base, [ex.Axis(key, args.start, args.stop, num)], setter)
    out = _outdir(args.out)
    ex.write_csv(out / f"sweep_{key}.csv", grid, {**config, "sweep": key, "unit": unit})
    if args.plot:
        from . import plots
        plots.plot_lines(out / f"sweep_{key}.svg", grid, ["E12", "G12", "G21"], xlabel=f"{key} [{unit}]")
    print(f"wrote {out / f'sweep_{key}.csv'} ({num} points)")
    return EXIT_OK


def run_figure(fig: int, config: dict, out: Path, grid_n: int | None = None, plot: bool = False) -> dict:
    """Compute one figure's data, write its CSV files and return its summary."""
    n = grid_n or 101
    summary: dict = {"figure": fig}
    if fig == 2:
        n2 = grid_n or 61
        grid = ex.fig2_sweep(build_spec(config), ex.Axis("r", 0.0, 2.0, n2), ex.Axis("lambda", 0.0, 0.49, n2))
        ex.write_csv(out / "fig2.csv", grid, config)
        if plot:
            from . import plots
            plots.plot_maps(out / "fig2.svg", grid, ["SX1", "E12", "G12"])
        summary["max_E12"] = float(grid.field("E12").max())
        summary["max_G12"] = float(grid.field("G12").max())
    elif fig in (3, 4):
        panels = [("fig3", True)] if fig == 3 else [("fig4a", False), ("fig4b", True)]
        best = {}
        for name, with_opa in panels:
            grid, peaks = ex.fig3_fig4_ratio_sweep(build_spec(config), ex.Axis("ratio", 0.5, 2.0, n), with_opa)
            ex.write_csv(out / f"{name}.csv", grid, {**config, "with_opa": with_opa})
            if plot:
                from . import plots
                cols = ["E12", "G12", "G21"] if fig == 3 else ["G12", "G21", "GS"]
                plots.plot_lines(out / f"{name}.svg", grid, cols, xlabel="Gamma_2/Gamma_1")
            summary[name] = {k: {"ratio": p.location, "value": p.value} for k, p in peaks.items()}
            best[with_opa] = max(peaks["G12"].value, peaks["G21"].value)
        if fig == 4:
            summary["opa_steering_gain"] = best[True] / best[False]
    elif fig == 5:
        for name, which, g2 in (("fig5a", 1, 3.0), ("fig5b", 2, 3.0), ("fig5c", 1, 6.0), ("fig5d", 2, 6.0)):
            axis = ex.Axis(f"kappa_{which}", 0.1, 1.0, n)
            grid = ex.fig5_dissipation_sweep(build_spec(config), axis, which, g2)
            ex.write_csv(out / f"{name}.csv", grid, {**config, "gamma_2": g2})
            if plot:
                from . import plots
                plots.plot_lines(out / f"{name}.svg", grid, ["E12", "G12", "G21"], xlabel=f"kappa_{which}/kappa_a")
    elif fig == 6:
        base_cfg = {k: v for k, v in config.items() if k not in ("squeeze_r", "lambda_opa")}
        base = build_spec(base_cfg)
        for r, lam in FIG6_PAIRS:
            grid = ex.temperature_sweep(base.in_kappa_units(squeeze_r=r, lambda_opa=lam), ex.Axis("T_mK", 0.0, 1000.0, n))
            name = f"fig6_r{r:g}_lambda{lam:g}"
            ex.write_csv(out / f"{name}.csv", grid, {**base_cfg, "squeeze_r": r, "lambda_opa": lam})
            if plot:
                from . import plots
                plots.plot_lines(out / f"{name}.svg", grid, ["G12", "E12"], xlabel="T [mK]")
        r = float(config.get("squeeze_r", 2.0))
        lam = float(config.get("lambda_opa", 0.49))
        summary["critical_temperature_mK"] = {"squeeze_r": r, "lambda_opa": lam}
        for metric in ("steering", "entanglement"):
            try:
                tc = ex.fig6_temperature_threshold(base, metric, r, lam)
                summary["critical_temperature_mK"][metric] = tc * 1e3
            except ex.NoThresholdInRange as err:
                summary["critical_temperature_mK"][metric] = None
                summary.setdefault("notes", []).append(str(err))
    else:
        raise ConfigError([f"unknown figure {fig}; choose from 2, 3, 4, 5, 6"])
    ex.write_summary(out / f"fig{fig}_summary.json", summary)
    return summary


def cmd_figure(args) -> int:
    if args.id not in FIGURE_DEFAULTS:
        raise ConfigError([f"unknown figure {args.id}; choose from 2, 3, 4, 5, 6"])
    config = resolve(args, FIGURE_DEFAULTS[args.id])
    build_spec(config)
    out = _outdir(args.out)
    summary = run_figure(args.id, config, out, args.grid, args.plot)
    print(yaml.safe_dump(summary, sort_keys=True).rstrip())
    return EXIT_OK


def cmd_thresholds(args) -> int:
    config = resolve(args)
    base = build_spec({k: v for k, v in config.items() if k not in ("squeeze_r", "lambda_opa")})
    summary = {"max_stable_gain_kappa_a": ex.max_stable_gain(base)}
    _, peaks = ex.fig3_fig4_ratio_sweep(
        base.in_kappa_units(squeeze_r=ex.FIG3_R, lambda_opa=ex.FIG3_LAMBDA),
        ex.Axis("ratio", 0.5, 2.0, args.grid or 101),
    )
    summary["peak_ratio"] = {k: v.location for k, v in peaks.items()}
    r = float(config.get("squeeze_r", 2.0))
    lam = float(config.get("lambda_opa", 0.49))
    tc = {}
    for metric in ("steering", "entanglement"):
        try:
            tc[metric] = ex.fig6_temperature_threshold(base, metric, r, lam) * 1e3
        except ex.NoThresholdInRange:
            tc[metric] = None
    summary["critical_temperature_mK"] = tc
    out = _outdir(args.out)
    ex.write_summary(out / "thresholds.json", summary)
    print(yaml.safe_dump(summary, sort_keys=True).rstrip())
    return EXIT_OK


def cmd_validate(args) -> int:
    try:
        config = resolve(args)
    except ConfigError as err:
        problems = err.violations
    else:
        problems = validate(config)
    if problems:
        for p in problems:
            print(p)
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file (nested sections allowed)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config key (repeatable)")
    common.add_argument("--plot", action="store_true", help="also render SVG plots")
    common.add_argument("--grid", type=int, help="points per sweep axis")
    common.add_argument("--r", type=float, help="squeezing parameter r")
    common.add_argument("--lambda", dest="lam", type=float, help="OPA gain in units of kappa_a")
    common.add_argument("--temp", type=float, help="temperature in mK")

    parser = argparse.ArgumentParser(
        prog="magnon-steering",
        description="Steady-state squeezing, entanglement and EPR steering of two magnons in a cavity.",
        epilog=_units_help(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("point", parents=[common], help="evaluate one parameter point")
    p.set_defaults(func=cmd_point)
    p = sub.add_parser("sweep", parents=[common], help="1D sweep of one config key")
    p.add_argument("--param", required=True)
    p.add_argument("--start", type=float, required=True)
    p.add_argument("--stop", type=float, required=True)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("figure", parents=[common], help="reproduce one figure's data (2-6)")
    p.add_argument("id", type=int)
    p.set_defaults(func=cmd_figure)
    p = sub.add_parser("thresholds", parents=[common], help="max stable gain, peak ratios, critical temperatures")
    p.set_defaults(func=cmd_thresholds)
    p = sub.add_parser("validate", parents=[common], help="check a configuration")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command in ("sweep", "figure", "thresholds") and not args.out:
        args.out = "results"
    try:
        return args.func(args)
    except ConfigError as err:
        for p in err.violations:
            print(f"config error: {p}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as err:
        print(f"I/O error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
