"""
Command-line front end.

    python -m gabortorus spectrogram --config data/configs/spectrogram.json
    python -m gabortorus framecheck  --config data/configs/framecheck.json
    python -m gabortorus theta       --config data/configs/theta.json
    python -m gabortorus verify-all  --seed 0

Exit codes: 0 success (a "not a frame" verdict included), 1 residual above
tolerance, 2 configuration or I/O error, 3 invalid mathematical input,
4 truncation or convergence error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from config.settings import get_execution_config

from .errors import GaborTorusError, UnsupportedModelError
from .export import write_json, write_pgm, write_sequence_json, write_signal_csv, write_tf_csv
from .gabor import GaborSystem, dual_window, figa_residual, frame_report, wexler_raz_residual
from .phase_space import Signal
from .run_config import RunConfig, load_run_config, parse_run_config
from .theta import QuantumTheta, invertibility_sweep, quantum_theta, theta_report
from .transforms import stft

logger = logging.getLogger(__name__)

SWEEP_DENSITIES = [0.49, 0.64, 0.81, 1.0, 1.21]


def _descriptor(value) -> Dict:
    return {"delta": 0} if value == "delta" else dict(value)


def _random_signal(model, rng: np.random.Generator) -> Signal:
    values = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
    return Signal.create(model, values / np.linalg.norm(values))


# ========================================
# Reports (shared with the API)
# ========================================

def framecheck_report(config: RunConfig) -> Dict:
    """
    Frame report of the configured system plus FIGA (and, for frames,
    Wexler-Raz) residuals on seeded random signals.

    Raises:
        UnsupportedModelError: Continuum model
    """
    model = config.model_order()
    if not model.is_finite:
        raise UnsupportedModelError("framecheck runs in the finite model")
    tolerances = config.effective_tolerances()
    system = GaborSystem(config.window_signal(model), config.lattice_for(model), _descriptor(config.window))

    report = frame_report(system, tolerances).to_dict()
    rng = np.random.default_rng(config.seed)
    trials = int(config.options.get("figa_trials", 3))
    residuals = {"janssen": report["janssen_residual"]}
    residuals["figa"] = max(
        figa_residual(_random_signal(model, rng), _random_signal(model, rng), system.atom, system.atom, system.lattice)
        for _ in range(trials)
    )
    if report["is_frame"]:
        residuals["wexler_raz"] = wexler_raz_residual(system, dual_window(system, "dual", tolerances))

    report["residuals"] = residuals
    report["passed"] = all(value <= tolerances.finite_identity for value in residuals.values())
    report["seed"] = config.seed
    return report


def theta_command_report(config: RunConfig) -> Tuple[Dict, QuantumTheta]:
    """Theta report for the configured window and lattice plus the density sweep table."""
    T = config.siegel()
    tolerances = config.effective_tolerances()
    lattice = config.lattice_for()
    radius = config.options.get("radius")

    theta = quantum_theta(T, lattice, radius, tolerances)
    report = theta_report(T, lattice, radius, theta)
    report["tolerances"] = tolerances.model_dump()

    sweep = config.options.get("sweep", SWEEP_DENSITIES)
    if sweep:
        L_min = int(config.options.get("L_min", 144))
        report["invertibility"] = [r.to_dict() for r in invertibility_sweep(sweep, L_min, tolerances)]
    return report, theta


# ========================================
# Commands
# ========================================

def cmd_spectrogram(config: RunConfig) -> int:
    model = config.model_order()
    f = config.input_signal(model)
    g = config.window_signal(model)
    tf = stft(f, g)

    out = Path(config.out)
    write_pgm(tf, out / "spectrogram.pgm")
    write_tf_csv(tf, out / "stft.csv")
    if config.options.get("write_window"):
        write_signal_csv(g, out / "window.csv")
    print(f"Wrote {tf.shape[0]}x{tf.shape[1]} spectrogram to {out}")
    return 0


def cmd_framecheck(config: RunConfig) -> int:
    report = framecheck_report(config)
    path = write_json(report, Path(config.out) / "framecheck.json")

    verdict = "frame" if report["is_frame"] else "not a frame"
    print(f"A={report['A']:.6g}  B={report['B']:.6g}  redundancy={report['redundancy']:.4g}  ({verdict})")
    for name, value in report["residuals"].items():
        print(f"  {name:<12} {value:.3e}")
    print(f"Report: {path}")

    if not report["passed"]:
        logger.warning("framecheck residuals above tolerance")
        return 1
    return 0


def cmd_theta(config: RunConfig) -> int:
    report, theta = theta_command_report(config)

    out = Path(config.out)
    write_json(report, out / "theta.json")
    write_sequence_json(theta.coeffs, out / "theta_coeffs.json")

    print(f"theta: {report['coeff_count']} coefficients, c0={report['c0']:.6g}, tail={report['tail_bound']:.2e}")
    if report.get("functional_eq_residual") is not None:
        print(f"  functional equation residual {report['functional_eq_residual']:.3e}")
    for row in report.get("invertibility", []):
        print(f"  ab={row['ab']:<5} L={row['L']:<4} {row['a']}x{row['b']:<3} A/B={row['ratio']:.3e}  {row['verdict']}")
    return 0


def cmd_verify_all(config: RunConfig, identities: Optional[List[str]] = None) -> int:
    from .verification import format_matrix, get_default_runner, summarize

    results = get_default_runner().run_all(
        seed=config.seed, identities=identities, deterministic=config.deterministic
    )
    print(format_matrix(results))
    summary = summarize(results)
    write_json(summary, Path(config.out) / "verify.json")
    return 0 if summary["passed"] else 1


COMMANDS = {
    "spectrogram": cmd_spectrogram,
    "framecheck": cmd_framecheck,
    "theta": cmd_theta,
    "verify-all": cmd_verify_all,
}


# ========================================
# Entry point
# ========================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gabortorus", description="Gabor frames, noncommutative tori and quantum thetas")
    parser.add_argument("command", choices=sorted(COMMANDS), help="Subcommand to run")
    parser.add_argument("--config", help="Run configuration (.json, .yaml or .yml)")
    parser.add_argument("--out", help="Output directory (overrides the configuration)")
    parser.add_argument("--deterministic", action="store_true", help="Force sequential evaluation")
    parser.add_argument("--seed", type=int, help="Random seed (overrides the configuration)")
    parser.add_argument("--identity", action="append", help="verify-all: only run checks of this identity")
    return parser


def _load(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config) if args.config else parse_run_config({})
    overrides = {}
    if args.out is not None:
        overrides["out"] = args.out
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.deterministic:
        overrides["deterministic"] = True
    if not overrides:
        return config
    data = config.model_dump()
    base_dir = data.pop("base_dir")
    data.update(overrides)
    return parse_run_config(data, base_dir)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    execution = get_execution_config(True if args.deterministic else None)
    logging.basicConfig(
        level=getattr(logging, execution.log_level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    try:
        config = _load(args)
        os.environ["GABORTORUS_DETERMINISTIC"] = "true" if config.deterministic else "false"
        if args.command == "verify-all":
            return cmd_verify_all(config, args.identity)
        return COMMANDS[args.command](config)
    except GaborTorusError as e:
        print(f"error: {e}", file=sys.stderr)
        logger.debug(f"{type(e).__name__} -> exit {e.exit_code}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
