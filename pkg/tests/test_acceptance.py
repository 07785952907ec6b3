"""Exit criteria. Each test prints one PASS/FAIL line (shown in the terminal summary).

Run alone with ``pytest tests/test_acceptance.py`` or ``python tests/test_acceptance.py``.
"""

import json
import math
import time

import pytest

from replisim.classical import classical_time_for_information, simulate_classical
from replisim.cli import execute, replay
from replisim.core import TimingParams, make_alphabet, make_task, optimal_alphabet_integer, optimal_alphabet_real
from replisim.discrimination import NOISELESS_SIGMA, RateModel, discriminate, generate_experiment, power_curve
from replisim.grover import (
    ImperfectQuantumConfig,
    coherence_threshold,
    grover_search,
    iteration_count_real,
    iterations_required,
    simulate_imperfect_quantum,
    success_probability_closed_form,
)
from replisim.isotope import ExchangeConfig, run_tagged_assembly, separation_fraction
from replisim.records import RunRecord


def record(log, number, title, ok, elapsed, limit, detail):
    passed = ok and elapsed < limit
    log.append(
        f"[{'PASS' if passed else 'FAIL'}] #{number:<2} {title}: {detail} "
        f"({elapsed:.2f}s, limit {limit:g}s)"
    )
    assert ok, detail
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_01_classical_coefficients(acceptance_log):
    start = time.perf_counter()
    rows = execute("coefficients", {"a_min": 2, "a_max": 4}).results["rows"]
    elapsed = time.perf_counter() - start
    printed = {2: 2.8854, 3: 2.7307, 4: 2.8854}
    errors = {r["a"]: abs(r["classical_coefficient"] - printed[r["a"]]) for r in rows}
    ok = sorted(errors) == [2, 3, 4] and max(errors.values()) < 1e-4
    detail = ", ".join(f"a={r['a']}: {r['classical_coefficient']:.6f}" for r in rows)
    record(acceptance_log, 1, "coefficients 2..4 within 1e-4", ok, elapsed, 1, detail)


def test_02_optimal_alphabet(acceptance_log):
    start = time.perf_counter()
    a_real = optimal_alphabet_real()
    a_int = optimal_alphabet_integer(100)
    elapsed = time.perf_counter() - start
    ok = abs(a_real - 2.71828) < 1e-5 and a_int == 3
    record(acceptance_log, 2, "optimal alphabet", ok, elapsed, 1, f"real={a_real:.8f}, integer={a_int}")


def test_03_iteration_bands(acceptance_log):
    start = time.perf_counter()
    low = [iterations_required(a) for a in (2, 3, 4)]
    high = [iterations_required(a) for a in range(5, 11)]
    q4 = iteration_count_real(4)
    elapsed = time.perf_counter() - start
    ok = low == [1, 1, 1] and high == [2] * 6 and abs(q4 - 1.0) < 1e-12
    record(acceptance_log, 3, "iteration bands", ok, elapsed, 1, f"a=2..4 -> {low}, a=5..10 -> {high}, Q(4)={q4!r}")


def test_04_grover_exactness(acceptance_log):
    start = time.perf_counter()
    worst_a4 = max(abs(grover_search(4, t, 1)[1] - 1.0) for t in range(4))
    worst_oracle = max(
        abs(grover_search(a, a - 1, k)[1] - success_probability_closed_form(a, k))
        for a in range(1, 65)
        for k in range(11)
    )
    elapsed = time.perf_counter() - start
    ok = worst_a4 < 1e-12 and worst_oracle < 1e-12
    record(acceptance_log, 4, "Grover exactness", ok, elapsed, 5,
           f"max |p-1| at a=4: {worst_a4:.1e}, max oracle gap: {worst_oracle:.1e}")


def test_05_coherence_threshold(acceptance_log):
    start = time.perf_counter()
    threshold = coherence_threshold(1.0, 1.0)
    elapsed = time.perf_counter() - start
    ok = abs(threshold - 0.264) < 5e-4 and abs(threshold - 0.2642) < 5e-4
    record(acceptance_log, 5, "coherence threshold", ok, elapsed, 1, f"threshold={threshold:.6f}")


def test_06_classical_monte_carlo(acceptance_log):
    start = time.perf_counter()
    details, ok = [], True
    for a in (1, 2, 3, 4):
        alphabet = make_alphabet(a)
        task = make_task(alphabet, 1000, seed=a)
        res = simulate_classical(alphabet, task, TimingParams(t_d=1.0), seed=6000 + a, replicates=10_000)
        expected = 1.0 * a * 1000
        ok &= abs(res.attempts_per_base - a) <= 0.01 * a
        ok &= abs(res.total_time - expected) <= 0.01 * expected
        details.append(f"a={a}: attempts={res.attempts_per_base:.4f}, time={res.total_time:.1f}")
    elapsed = time.perf_counter() - start
    record(acceptance_log, 6, "classical Monte Carlo vs t_d*a*n", ok, elapsed, 60, "; ".join(details))


def _batch_win_rate(p_eff, batches=100, replicates=10, n4=1000):
    alphabet = make_alphabet(4)
    task = make_task(alphabet, n4, seed=1)
    classical = classical_time_for_information(3, task.ln_information, 1.0)
    p_coherence = p_eff / success_probability_closed_form(4, iterations_required(4))
    config = ImperfectQuantumConfig(p_coherence, 1.0)
    wins = 0
    for s in range(batches):
        res = simulate_imperfect_quantum(alphabet, task, TimingParams(1.0, 1.0), config, seed=s, replicates=replicates)
        wins += res.total_time < classical
    return wins / batches


def test_07_threshold_realised(acceptance_log):
    start = time.perf_counter()
    threshold = coherence_threshold(1.0, 1.0)
    above = _batch_win_rate(1.1 * threshold)
    below = _batch_win_rate(0.9 * threshold)
    elapsed = time.perf_counter() - start
    ok = above >= 0.95 and (1 - below) >= 0.95
    record(acceptance_log, 7, "imperfect quantum vs classical a=3", ok, elapsed, 120,
           f"win rate 10% above threshold={above:.2f}, loss rate 10% below={1 - below:.2f}")


def test_08_discrimination_power(acceptance_log):
    start = time.perf_counter()
    B = 500
    noiseless_ok = True
    for model in RateModel:
        for s in range(5):
            samples = generate_experiment(model, 1.0, (1, 2, 3, 4), 10, NOISELESS_SIGMA, seed=s)
            v = discriminate(samples, B, s)
            noiseless_ok &= v.chosen_model is model and v.p_value <= 1 / B
    low, high = power_curve("Classical", [0.05, 0.20], repeats_per_a=10, trials=200, seed=8, bootstrap_B=B)
    se = math.sqrt(low["standard_error"] ** 2 + high["standard_error"] ** 2)
    elapsed = time.perf_counter() - start
    ok = (
        noiseless_ok
        and low["fraction_correct"] >= 0.95
        and low["fraction_correct"] >= high["fraction_correct"] - 2 * se
    )
    record(acceptance_log, 8, "discrimination power", ok, elapsed, 180,
           f"noiseless ok={noiseless_ok}, power@0.05={low['fraction_correct']:.3f} "
           f"(significant {low['fraction_significant']:.3f}), power@0.20={high['fraction_correct']:.3f}")


def _conserved(report):
    locs = report.tag_locations
    return sorted(locs) == list(range(2 * report.total_tagged_incorporations)) and sum(
        locs[i] != locs[i + 1] for i in range(0, len(locs), 2)
    ) == report.separated_count


def test_09_isotope_tracker(acceptance_log):
    start = time.perf_counter()
    alphabet = make_alphabet(1)
    task = make_task(alphabet, 10_000, seed=0)
    fractions, conserved = {}, True
    for p in (0.0, 1.0, 0.3):
        report = run_tagged_assembly(alphabet, task, 1.0, ExchangeConfig(p, 0.5), seed=9, keep_trace=True)
        fractions[p] = separation_fraction(report)
        conserved &= _conserved(report) and report.total_tagged_incorporations == 10_000
    elapsed = time.perf_counter() - start
    sd = math.sqrt(0.3 * 0.7 / 10_000)
    ok = fractions[0.0] == 0.0 and fractions[1.0] == 1.0 and abs(fractions[0.3] - 0.3) <= 3 * sd and conserved
    record(acceptance_log, 9, "isotope tracker", ok, elapsed, 30,
           f"fractions={fractions}, conserved={conserved}")


def test_10_reproducibility(acceptance_log, tmp_path):
    samples = generate_experiment("Quantum", 1.0, (1, 2, 3, 4), 3, 0.1, seed=4)
    configs = [
        ("simulate", {"kind": "classical", "a": 4, "n": 1000, "t_d": 1.0, "t_r": 1.0, "p_coherence": 1.0,
                      "replicates": 50, "mode": "idealized", "seed": 42}),
        ("simulate", {"kind": "quantum-imperfect", "a": 3, "n": 500, "t_d": 1.0, "t_r": 1.2,
                      "p_coherence": 0.6, "replicates": 20, "mode": "physical", "seed": 7}),
        ("discriminate", {"input_csv": "inline", "samples": [[s.a, s.observed_rate, s.sigma_rel] for s in samples],
                          "bootstrap_B": 300, "seed": 11}),
        ("isotope", {"a": 4, "n": 2000, "tagged_fraction": 0.5, "exchange_prob": 0.3, "enzyme_weight": 0.4,
                     "replicates": 2, "tagged_base": 1, "seed": 3}),
        ("power", {"model": "Classical", "sigma_levels": [0.1, 0.4], "repeats_per_a": 3, "trials": 10,
                   "bootstrap_B": 50, "seed": 5}),
    ]
    start = time.perf_counter()
    identical = []
    for i, (command, config) in enumerate(configs):
        path = tmp_path / f"record_{i}.json"
        path.write_text(execute(command, config).to_json())
        loaded = RunRecord.from_json(path.read_text())
        again = replay(loaded)
        identical.append(
            again.results_bytes() == loaded.results_bytes()
            and json.dumps(again.results, sort_keys=True) == json.dumps(loaded.results, sort_keys=True)
        )
    elapsed = time.perf_counter() - start
    record(acceptance_log, 10, "replay byte-identical", all(identical), elapsed, 10,
           f"{sum(identical)}/{len(identical)} records identical")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
