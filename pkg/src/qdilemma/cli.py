"""Command-line surface: sweeps, figure data, equilibria, pulse runs, tomography.

Exit codes: 0 success, 1 input error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .datasets import FigureDataset, format_number, read_metadata, render
from .equilibrium import (
    StrategyGrid,
    find_nash_grid,
    landscape,
    nash_payoff_curve,
    thresholds,
)
from .game import DEFAULT_TABLE, PayoffTable, sweep_gammas, validate_gamma
from .nmr import (
    DEFAULT_SYSTEM,
    NOMINAL_PULSE_WIDTH_S,
    NoiseModel,
    SpinSystem,
    compile_disentangler,
    compile_entangler,
    compile_strategies,
    experiment_duration,
    run_experiment,
)
from .tomography import (
    payoff_from_density,
    reconstruct,
    records_to_text,
    tomography_records,
)

DURATION_BUDGET_S = 0.300

PRESETS = ("fig2", "fig3", "fig4")


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # input errors exit 1, not argparse's default 2
        self.print_usage(sys.stderr)
        raise SystemExit(self._input_error(message))

    @staticmethod
    def _input_error(message) -> int:
        print(f"error: {message}", file=sys.stderr)
        return 1


def _parse_table(raw: str) -> PayoffTable:
    parts = raw.split(",")
    if len(parts) != 4:
        raise ValueError("--table expects four numbers: reward,sucker,temptation,punishment")
    r, s, t, p = (float(x) for x in parts)
    return PayoffTable(reward=r, sucker=s, temptation=t, punishment=p)


def _parse_grid(raw: str) -> StrategyGrid:
    parts = raw.lower().split("x")
    if len(parts) != 2:
        raise ValueError("--grid expects THETAxPHI, e.g. 61x31")
    return StrategyGrid(int(parts[0]), int(parts[1]))


def _preset_gamma(name: str, table: PayoffTable) -> float:
    th = thresholds(table)
    if name == "fig2":
        return th.gamma_th1 / 2
    if name == "fig3":
        return (th.gamma_th1 + th.gamma_th2) / 2
    if name == "fig4":
        return (th.gamma_th2 + math.pi / 2) / 2
    raise ValueError(f"unknown preset {name!r} (expected one of {PRESETS})")


def _row_seeds(seed: int, index: int) -> tuple[int, int]:
    state = np.random.SeedSequence([seed, index]).generate_state(2)
    return int(state[0]), int(state[1])


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    print(f"wrote {path}")


# --- dataset builders (pure: config dict in, dataset out) ---


def build_landscape_dataset(config: dict) -> FigureDataset:
    table = PayoffTable(*config["table"])
    gamma = validate_gamma(config["gamma"])
    ts, payoff = landscape(gamma, config["steps"], table)
    t_a, t_b, values = [], [], []
    for i, ta in enumerate(ts):
        for j, tb in enumerate(ts):
            t_a.append(float(ta))
            t_b.append(float(tb))
            values.append(float(payoff[i, j]))
    return FigureDataset(
        kind="landscape",
        columns={"t_a": t_a, "t_b": t_b, "payoff_a": values},
        metadata=config,
    )


def build_sweep_dataset(config: dict) -> FigureDataset:
    table = PayoffTable(*config["table"])
    gammas = [validate_gamma(g) for g in config["gammas"]]
    noise_angle = config["noise_angle"]
    noise_readout = config["noise_readout"]
    cols = {k: [] for k in ("n", "gamma", "label", "payoff_analytic",
                            "payoff_nmr_ideal", "payoff_tomo_noisy")}
    row_index = 0
    for n, gamma in enumerate(gammas):
        for _, label, analytic in nash_payoff_curve(table, [gamma]):
            flip = label == "QD"
            strategy_seq = compile_strategies(gamma, table, flip_intermediate=flip)
            rho_ideal = run_experiment(gamma, strategy_seq, table=table)
            ideal_pa = payoff_from_density(rho_ideal, table)[0]

            noise_seed, tomo_seed = _row_seeds(config["seed"], row_index)
            noise = NoiseModel(rotation_angle_error=noise_angle, seed=noise_seed)
            rho_noisy = run_experiment(gamma, strategy_seq, noise=noise, table=table)
            records = tomography_records(rho_noisy, noise_readout, seed=tomo_seed)
            # payoffs are linear in the state: read the raw minimizer, which is
            # unbiased where the projected estimate is not
            noisy_pa = payoff_from_density(reconstruct(records).rho_raw, table)[0]

            cols["n"].append(n)
            cols["gamma"].append(gamma)
            cols["label"].append(label)
            cols["payoff_analytic"].append(analytic)
            cols["payoff_nmr_ideal"].append(ideal_pa)
            cols["payoff_tomo_noisy"].append(noisy_pa)
            row_index += 1
    return FigureDataset(kind="sweep_comparison", columns=cols, metadata=config)


def build_equilibria_dataset(config: dict) -> FigureDataset:
    table = PayoffTable(*config["table"])
    grid = StrategyGrid(*config["grid"])
    report = find_nash_grid(config["gamma"], grid, config["tol"], table)
    cols = {k: [] for k in ("theta_a", "phi_a", "theta_b", "phi_b", "payoff_a", "payoff_b")}
    for sa, sb, pa, pb in report.equilibria:
        cols["theta_a"].append(sa.theta)
        cols["phi_a"].append(sa.phi)
        cols["theta_b"].append(sb.theta)
        cols["phi_b"].append(sb.phi)
        cols["payoff_a"].append(pa)
        cols["payoff_b"].append(pb)
    meta = dict(config)
    meta["regime"] = report.regime
    meta["equilibrium_count"] = len(report.equilibria)
    return FigureDataset(kind="equilibria", columns=cols, metadata=meta)


def build_thresholds_dataset(config: dict) -> FigureDataset:
    table = PayoffTable(*config["table"])
    th = thresholds(table)
    return FigureDataset(
        kind="thresholds",
        columns={"gamma_th1": [th.gamma_th1], "gamma_th2": [th.gamma_th2]},
        metadata=config,
    )


_BUILDERS = {
    "landscape": build_landscape_dataset,
    "sweep_comparison": build_sweep_dataset,
    "equilibria": build_equilibria_dataset,
    "thresholds": build_thresholds_dataset,
}


def build_nmr_report(
    gamma: float,
    noise_angle: float = 0.0,
    seed: int = 0,
    table: PayoffTable = DEFAULT_TABLE,
    system: SpinSystem = DEFAULT_SYSTEM,
    pulse_width: float = NOMINAL_PULSE_WIDTH_S,
) -> dict:
    gamma = validate_gamma(gamma)
    strategy_seq = compile_strategies(gamma, table)
    noise = NoiseModel(rotation_angle_error=noise_angle, seed=seed)
    rho = run_experiment(gamma, strategy_seq, system, noise, table, pulse_width=pulse_width)
    pa, pb = payoff_from_density(rho, table)
    duration = experiment_duration(gamma, strategy_seq, system, table, pulse_width)
    warnings = []
    if duration >= DURATION_BUDGET_S:
        warnings.append(
            f"modeled duration {duration:.6f} s exceeds the {DURATION_BUDGET_S:.3f} s budget"
        )
    if duration >= system.t2:
        warnings.append(f"modeled duration {duration:.6f} s reaches T2 = {system.t2} s")
    sequences = {
        "entangler": compile_entangler(gamma, system).to_text(),
        "strategies": strategy_seq.to_text(),
        "disentangler": compile_disentangler(gamma, system).to_text(),
    }
    return {
        "version": __version__,
        "gamma": gamma,
        "table": list(table.as_tuple()),
        "noise_angle": noise_angle,
        "seed": seed,
        "pulse_sequences": sequences,
        "density_matrix_re": [[float(v) for v in row] for row in rho.real],
        "density_matrix_im": [[float(v) for v in row] for row in rho.imag],
        "payoff_a": pa,
        "payoff_b": pb,
        "duration_s": duration,
        "warnings": warnings,
    }


def build_tomo_report(
    gamma: float,
    noise_readout: float = 0.0,
    noise_angle: float = 0.0,
    seed: int = 0,
    table: PayoffTable = DEFAULT_TABLE,
) -> tuple[dict, str]:
    gamma = validate_gamma(gamma)
    noise_seed, tomo_seed = _row_seeds(seed, 0)
    noise = NoiseModel(rotation_angle_error=noise_angle, seed=noise_seed)
    rho_true = run_experiment(gamma, noise=noise, table=table)
    records = tomography_records(rho_true, noise_readout, seed=tomo_seed)
    result = reconstruct(records)
    pa, pb = payoff_from_density(result.rho_raw, table)
    report = {
        "version": __version__,
        "gamma": gamma,
        "table": list(table.as_tuple()),
        "noise_readout": noise_readout,
        "noise_angle": noise_angle,
        "seed": seed,
        "payoff_a": pa,
        "payoff_b": pb,
        "residual_norm": result.residual_norm,
        "projected": result.projected,
        "rho_hat_re": [[float(v) for v in row] for row in result.rho_hat.real],
        "rho_hat_im": [[float(v) for v in row] for row in result.rho_hat.imag],
    }
    return report, records_to_text(records)


# --- replay ---


def _replay(path: str, expected_kind: str) -> int:
    with open(path, "r", encoding="utf-8") as fh:
        original = fh.read()
    meta = read_metadata(original)
    kind = meta.pop("kind")
    if kind != expected_kind:
        raise ValueError(f"file {path} holds a {kind!r} dataset, not {expected_kind!r}")
    regenerated = render(_BUILDERS[kind](meta), meta["format"])
    if regenerated == original:
        print(f"replay ok: {path} regenerates byte-identically")
        return 0
    print(f"replay mismatch: {path} does not regenerate from its embedded config",
          file=sys.stderr)
    return 1


# --- command handlers ---


def _cmd_landscape(args) -> int:
    if args.replay:
        return _replay(args.replay, "landscape")
    table = _parse_table(args.table)
    gamma = _preset_gamma(args.preset, table) if args.preset else args.gamma
    if gamma is None:
        raise ValueError("landscape needs --gamma or --preset")
    config = {
        "command": "landscape",
        "version": __version__,
        "gamma": float(gamma),
        "steps": args.steps,
        "table": list(table.as_tuple()),
        "format": args.format,
    }
    if args.preset:
        config["preset"] = args.preset
    _write(args.out, render(build_landscape_dataset(config), args.format))
    return 0


def _cmd_sweep(args) -> int:
    if args.replay:
        return _replay(args.replay, "sweep_comparison")
    table = _parse_table(args.table)
    gammas = [float(g) for g in args.gamma] if args.gamma else sweep_gammas()
    config = {
        "command": "sweep",
        "version": __version__,
        "gammas": gammas,
        "table": list(table.as_tuple()),
        "noise_angle": args.noise_angle,
        "noise_readout": args.noise_readout,
        "seed": args.seed,
        "format": args.format,
    }
    _write(args.out, render(build_sweep_dataset(config), args.format))
    return 0


def _cmd_equilibria(args) -> int:
    table = _parse_table(args.table)
    grid = _parse_grid(args.grid)
    config = {
        "command": "equilibria",
        "version": __version__,
        "gamma": float(args.gamma),
        "grid": [grid.theta_steps, grid.phi_steps],
        "tol": args.tol,
        "table": list(table.as_tuple()),
        "format": args.format,
    }
    ds = build_equilibria_dataset(config)
    print(f"regime: {ds.metadata['regime']}, equilibria: {ds.metadata['equilibrium_count']}")
    _write(args.out, render(ds, args.format))
    return 0


def _cmd_thresholds(args) -> int:
    table = _parse_table(args.table)
    th = thresholds(table)
    print(f"gamma_th1 = {th.gamma_th1:.6f}")
    print(f"gamma_th2 = {th.gamma_th2:.6f}")
    if args.out:
        config = {
            "command": "thresholds",
            "version": __version__,
            "table": list(table.as_tuple()),
            "format": args.format,
        }
        _write(args.out, render(build_thresholds_dataset(config), args.format))
    return 0


def _cmd_nmr(args) -> int:
    table = _parse_table(args.table)
    report = build_nmr_report(args.gamma, args.noise_angle, args.seed, table)
    for w in report["warnings"]:
        print(f"warning: {w}", file=sys.stderr)
    print(f"payoffs: ({format_number(report['payoff_a'])}, {format_number(report['payoff_b'])}), "
          f"duration {report['duration_s']:.6f} s")
    _write(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    pulses_path = args.out + ".pulses.txt"
    listing = "".join(
        f"# {name}\n{text}" for name, text in report["pulse_sequences"].items()
    )
    _write(pulses_path, listing)
    return 0


def _cmd_tomo(args) -> int:
    table = _parse_table(args.table)
    report, records_text = build_tomo_report(
        args.gamma, args.noise_readout, args.noise_angle, args.seed, table
    )
    print(f"reconstructed payoffs: ({format_number(report['payoff_a'])}, "
          f"{format_number(report['payoff_b'])}), residual {report['residual_norm']:.3e}")
    _write(args.out, json.dumps(report, sort_keys=True, indent=2) + "\n")
    _write(args.out + ".records.txt", records_text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qdilemma",
                     description="Entanglement-tunable quantum Prisoner's Dilemma toolkit")
    parser.add_argument("--version", action="version", version=f"qdilemma {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, fmt=True):
        p.add_argument("--table", default="3,0,5,1", metavar="R,S,T,P",
                       help="payoff table: reward,sucker,temptation,punishment")
        if fmt:
            p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("landscape", help="payoff surface over the t-parametrized square")
    p.add_argument("--gamma", type=float)
    p.add_argument("--preset", choices=PRESETS,
                   help="canonical entanglement values: below, between and above the thresholds")
    p.add_argument("--steps", type=int, default=41)
    p.add_argument("--out", default="landscape.csv")
    p.add_argument("--replay", metavar="FILE",
                   help="regenerate FILE from its embedded config and verify bytes match")
    common(p)
    p.set_defaults(func=_cmd_landscape)

    p = sub.add_parser("sweep", help="payoff vs entanglement: analytic, ideal pulses, noisy tomography")
    p.add_argument("--gamma", type=float, action="append",
                   help="custom sweep value (repeatable); default n*pi/36 for n=0..18")
    p.add_argument("--noise-angle", type=float, default=0.05)
    p.add_argument("--noise-readout", type=float, default=0.03)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--replay", metavar="FILE",
                   help="regenerate FILE from its embedded config and verify bytes match")
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("equilibria", help="grid Nash equilibria at one entanglement value")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--grid", default="61x31", metavar="THETAxPHI")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out", default="equilibria.csv")
    common(p)
    p.set_defaults(func=_cmd_equilibria)

    p = sub.add_parser("thresholds", help="entanglement thresholds of a payoff table")
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=_cmd_thresholds)

    p = sub.add_parser("nmr", help="compile and execute the pulse-level experiment")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--noise-angle", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="nmr.json")
    common(p, fmt=False)
    p.set_defaults(func=_cmd_nmr)

    p = sub.add_parser("tomo", help="simulated-readout tomography round trip")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--noise-readout", type=float, default=0.0)
    p.add_argument("--noise-angle", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="tomo.json")
    common(p, fmt=False)
    p.set_defaults(func=_cmd_tomo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:  # argparse --help/--version or our input errors
        code = exc.code if isinstance(exc.code, int) else 0
        return code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
