"""Command-line entry point: ``replisim <command> [options]``.

Every command produces a :class:`RunRecord`. ``--format json`` (default)
writes the whole record; ``--format csv`` writes only the result table.
Exit codes: 0 success, 2 validation error, 3 input-parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from ._rng import RNG_ALGORITHM, check_seed
from .classical import expected_classical_time, simulate_classical
from .core import TimingParams, ValidationError, classical_coefficient, make_alphabet, make_task
from .discrimination import RateModel, RateSample, discriminate, power_curve
from .grover import (
    ImperfectQuantumConfig,
    coherence_threshold,
    effective_success,
    iterations_required,
    quantum_assembly_time,
    simulate_imperfect_quantum,
)
from .isotope import ExchangeConfig, run_tagged_assembly
from .records import InputParseError, RunRecord, read_rate_samples, rows_to_csv

EXIT_OK, EXIT_VALIDATION, EXIT_PARSE = 0, 2, 3

SIMULATE_KINDS = ("classical", "quantum-ideal", "quantum-imperfect")

COEFFICIENT_COLUMNS = ("a", "classical_coefficient", "iterations", "quantum_coefficient")
SIMULATE_COLUMNS = (
    "kind", "a", "n", "total_time", "attempts_per_base", "expected_time", "replicates", "seed",
)
VERDICT_COLUMNS = (
    "chosen_model", "statistic", "p_value", "fitted_scale_classical", "fitted_scale_quantum",
    "bootstrap_B", "seed",
)
POWER_COLUMNS = ("sigma_rel", "fraction_correct", "standard_error", "fraction_significant", "trials")
ISOTOPE_COLUMNS = (
    "total_tagged_incorporations", "separated_count", "separation_fraction",
    "SameBase", "OtherBaseInStrand", "EnzymePool", "replicates", "seed",
)
THRESHOLD_COLUMNS = ("t_r", "t_d", "t_r_over_t_d", "threshold", "quantum_can_win")


def run_coefficients(cfg: dict) -> dict:
    a_min, a_max = cfg["a_min"], cfg["a_max"]
    if not 2 <= a_min <= a_max:
        raise ValidationError(f"need 2 <= a_min <= a_max, got {a_min}, {a_max}")
    rows = []
    for a in range(a_min, a_max + 1):
        # t_r per base scaled by chain length ln N / ln a
        q_time = quantum_assembly_time(a, 1, 1.0)
        rows.append(
            {
                "a": a,
                "classical_coefficient": classical_coefficient(a),
                "iterations": iterations_required(a),
                "quantum_coefficient": q_time / math.log(a),
            }
        )
    return {"rows": rows}


def run_simulate(cfg: dict) -> dict:
    kind = cfg["kind"]
    if kind not in SIMULATE_KINDS:
        raise ValidationError(f"kind must be one of {SIMULATE_KINDS}, got {kind!r}")
    seed = check_seed(cfg["seed"])
    alphabet = make_alphabet(cfg["a"])
    timing = TimingParams(cfg["t_d"], cfg["t_r"])
    if kind == "quantum-ideal":
        total = quantum_assembly_time(alphabet.a, cfg["n"], timing.t_r, cfg["mode"])
        return {
            "kind": kind, "a": alphabet.a, "n": cfg["n"], "total_time": total,
            "attempts_per_base": 1.0, "expected_time": total, "replicates": 1, "seed": seed,
        }
    task = make_task(alphabet, cfg["n"], seed=seed)
    if kind == "classical":
        result = simulate_classical(alphabet, task, timing, seed, cfg["replicates"])
        expected = expected_classical_time(alphabet, task, timing)
    else:
        config = ImperfectQuantumConfig(cfg["p_coherence"], timing.t_r / timing.t_d)
        result = simulate_imperfect_quantum(
            alphabet, task, timing, config, seed, cfg["replicates"], cfg["mode"]
        )
        expected = quantum_assembly_time(alphabet.a, task.n, timing.t_r) / effective_success(
            alphabet.a, config.p_coherence, cfg["mode"]
        )
    return {
        "kind": kind, "a": alphabet.a, "n": task.n, "total_time": result.total_time,
        "attempts_per_base": result.attempts_per_base, "expected_time": expected,
        "time_sem": result.time_sem, "replicates": result.replicates, "seed": seed,
    }


def run_discriminate(cfg: dict) -> dict:
    samples = [RateSample(*row) for row in cfg["samples"]]
    verdict = discriminate(samples, cfg["bootstrap_B"], cfg["seed"])
    return verdict.to_dict()


def run_power(cfg: dict) -> dict:
    rows = power_curve(
        RateModel(cfg["model"]),
        cfg["sigma_levels"],
        repeats_per_a=cfg["repeats_per_a"],
        trials=cfg["trials"],
        seed=cfg["seed"],
        bootstrap_B=cfg["bootstrap_B"],
    )
    return {"model": cfg["model"], "rows": rows}


def run_isotope(cfg: dict) -> dict:
    alphabet = make_alphabet(cfg["a"])
    task = make_task(alphabet, cfg["n"], seed=cfg["seed"])
    report = run_tagged_assembly(
        alphabet,
        task,
        cfg["tagged_fraction"],
        ExchangeConfig(cfg["exchange_prob"], cfg["enzyme_weight"]),
        cfg["seed"],
        cfg["replicates"],
        cfg["tagged_base"],
    )
    return report.to_dict()


def run_threshold(cfg: dict) -> dict:
    threshold = coherence_threshold(cfg["t_r"], cfg["t_d"])
    return {
        "t_r": cfg["t_r"],
        "t_d": cfg["t_d"],
        "t_r_over_t_d": cfg["t_r"] / cfg["t_d"],
        "threshold": threshold,
        "quantum_can_win": threshold < 1.0,
    }


RUNNERS = {
    "coefficients": run_coefficients,
    "simulate": run_simulate,
    "discriminate": run_discriminate,
    "power": run_power,
    "isotope": run_isotope,
    "threshold": run_threshold,
}


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="milliseconds")


def execute(command: str, config: dict) -> RunRecord:
    """Run ``command`` with a JSON-compatible ``config`` and wrap the result in a record."""
    if command not in RUNNERS:
        raise ValidationError(f"unknown command {command!r}")
    started = _now()
    results = RUNNERS[command](config)
    return RunRecord(
        tool_version=__version__,
        command=command,
        config_echo=config,
        rng_algorithm=RNG_ALGORITHM,
        master_seed=config.get("seed"),
        started=started,
        finished=_now(),
        results=results,
    )


def replay(record: RunRecord) -> RunRecord:
    return execute(record.command, record.config_echo)


def result_rows(command: str, results: dict) -> tuple[list[dict], tuple[str, ...]]:
    if command == "coefficients":
        return results["rows"], COEFFICIENT_COLUMNS
    if command == "power":
        return results["rows"], POWER_COLUMNS
    if command == "simulate":
        return [results], SIMULATE_COLUMNS
    if command == "discriminate":
        return [results], VERDICT_COLUMNS
    if command == "isotope":
        return [{**results, **results["destinations"]}], ISOTOPE_COLUMNS
    if command == "threshold":
        return [results], THRESHOLD_COLUMNS
    raise ValidationError(f"no table layout for {command!r}")


def _config_from_args(args: argparse.Namespace) -> dict:
    cmd = args.command
    if cmd == "coefficients":
        return {"a_min": args.a_min, "a_max": args.a_max}
    if cmd == "simulate":
        return {
            "kind": args.kind, "a": args.a, "n": args.n, "t_d": args.t_d, "t_r": args.t_r,
            "p_coherence": args.p_coherence, "replicates": args.replicates, "mode": args.mode,
            "seed": args.seed,
        }
    if cmd == "discriminate":
        samples = read_rate_samples(args.input_csv)
        return {
            "input_csv": str(args.input_csv),
            "samples": [[s.a, s.observed_rate, s.sigma_rel] for s in samples],
            "bootstrap_B": args.bootstrap,
            "seed": args.seed,
        }
    if cmd == "power":
        return {
            "model": args.model, "sigma_levels": args.sigma, "repeats_per_a": args.repeats,
            "trials": args.trials, "bootstrap_B": args.bootstrap, "seed": args.seed,
        }
    if cmd == "isotope":
        return {
            "a": args.a, "n": args.n, "tagged_fraction": args.tagged_fraction,
            "exchange_prob": args.exchange_prob, "enzyme_weight": args.enzyme_weight,
            "replicates": args.replicates, "tagged_base": args.tagged_base, "seed": args.seed,
        }
    if cmd == "threshold":
        return {"t_r": args.t_r, "t_d": args.t_d}
    raise ValidationError(f"unknown command {cmd!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (unsigned 64-bit)")
    common.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="json")

    parser = argparse.ArgumentParser(
        prog="replisim",
        description="Classical vs quantum assembly models of template-directed replication.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coefficients", parents=[common], help="time coefficients per alphabet size")
    p.add_argument("a_min", type=int)
    p.add_argument("a_max", type=int)

    p = sub.add_parser("simulate", parents=[common], help="simulate assembly of a random chain")
    p.add_argument("--kind", choices=SIMULATE_KINDS, required=True)
    p.add_argument("--a", type=int, default=4)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--t-d", type=float, default=1.0)
    p.add_argument("--t-r", type=float, default=1.0)
    p.add_argument("--p-coherence", type=float, default=1.0)
    p.add_argument("--replicates", type=int, default=100)
    p.add_argument("--mode", choices=("idealized", "physical"), default=None,
                   help="default: idealized for quantum-ideal, physical for quantum-imperfect")

    p = sub.add_parser("discriminate", parents=[common], help="classical vs quantum rate-law verdict")
    p.add_argument("input_csv", type=Path)
    p.add_argument("--bootstrap", type=int, default=1000)

    p = sub.add_parser("power", parents=[common], help="power of the rate-law test vs noise level")
    p.add_argument("--model", choices=[m.value for m in RateModel], default="Classical")
    p.add_argument("--sigma", type=float, nargs="+", default=[0.0, 0.05, 0.2])
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--bootstrap", type=int, default=200)

    p = sub.add_parser("isotope", parents=[common], help="isotope-tag separation experiment")
    p.add_argument("--a", type=int, default=4)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--tagged-fraction", type=float, default=1.0)
    p.add_argument("--exchange-prob", type=float, required=True)
    p.add_argument("--enzyme-weight", type=float, default=0.5)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--tagged-base", type=int, default=0)

    p = sub.add_parser("threshold", parents=[common], help="coherence break-even probability")
    p.add_argument("--t-r", type=float, default=1.0)
    p.add_argument("--t-d", type=float, default=1.0)

    p = sub.add_parser("replay", help="re-run a JSON run record and compare results byte for byte")
    p.add_argument("record", type=Path)
    return parser


def _fail(kind: str, message: str, code: int) -> int:
    print(json.dumps({"error": kind, "message": message}), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "replay":
            try:
                original = RunRecord.from_json(args.record.read_text(encoding="utf-8"))
            except (OSError, ValueError, TypeError) as exc:
                raise InputParseError(f"{args.record}: {exc}") from None
            again = replay(original)
            same = again.results_bytes() == original.results_bytes()
            print("identical" if same else "DIFFERENT")
            return EXIT_OK if same else 1
        if args.command == "simulate" and args.mode is None:
            args.mode = "physical" if args.kind == "quantum-imperfect" else "idealized"
        record = execute(args.command, _config_from_args(args))
    except InputParseError as exc:
        return _fail("parse", str(exc), EXIT_PARSE)
    except ValidationError as exc:
        return _fail("validation", str(exc), EXIT_VALIDATION)
    except OSError as exc:
        return _fail("parse", str(exc), EXIT_PARSE)

    if args.format == "json":
        text = record.to_json()
    else:
        text = rows_to_csv(*result_rows(record.command, record.results))
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text, encoding="utf-8")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
