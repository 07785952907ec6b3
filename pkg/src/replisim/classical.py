"""Classical trial-and-error assembly: analytic times, rates and a Monte Carlo simulator.

Each position of the chain is filled by drawing building blocks uniformly at
random from the ensemble and discarding mismatches. The check has no memory,
so the number of draws per position is geometric with mean ``a``.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._rng import RNG_ALGORITHM, check_seed, replicate_generators
from .core import AlphabetSpec, ChainTask, TimingParams, ValidationError, classical_coefficient


class Model(str, enum.Enum):
    CLASSICAL = "Classical"
    QUANTUM_IDEAL = "QuantumIdeal"
    QUANTUM_IMPERFECT = "QuantumImperfect"


@dataclass(frozen=True)
class SimResult:
    """Replicate-averaged outcome of an assembly simulation.

    ``time_sem`` is the standard error of ``total_time`` across replicates
    (zero for a single replicate).
    """

    total_time: float
    attempts_per_base: float
    n_assembled: int
    seed: int
    replicates: int
    time_sem: float = 0.0
    rng_algorithm: str = RNG_ALGORITHM

    def to_dict(self) -> dict:
        return {
            "total_time": self.total_time,
            "attempts_per_base": self.attempts_per_base,
            "n_assembled": self.n_assembled,
            "seed": self.seed,
            "replicates": self.replicates,
            "time_sem": self.time_sem,
            "rng_algorithm": self.rng_algorithm,
        }


@dataclass(frozen=True)
class RatePrediction:
    model: Model
    a: int
    rate: float
    params_echo: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.rate > 0:
            raise ValidationError(f"rate must be positive, got {self.rate}")


def expected_classical_time(alphabet: AlphabetSpec, task: ChainTask, timing: TimingParams) -> float:
    """Expected classical assembly time ``t_d * a * n``."""
    return timing.t_d * alphabet.a * task.n


def classical_time_for_information(a: float, ln_info: float, t_d: float = 1.0) -> float:
    """Classical time to convey ``ln N = ln_info`` with alphabet ``a``, i.e. ``t_d (a / ln a) ln N``.

    Unlike :func:`expected_classical_time` the chain length ``ln N / ln a``
    need not be an integer here.
    """
    return t_d * classical_coefficient(a) * ln_info


def classical_rate(a: int, t_d: float) -> RatePrediction:
    if a < 1:
        raise ValidationError(f"a must be >= 1, got {a}")
    if not t_d > 0:
        raise ValidationError(f"t_d must be > 0, got {t_d}")
    return RatePrediction(Model.CLASSICAL, a, 1.0 / (a * t_d), {"a": a, "t_d": t_d})


def rate_ratio_table(t_d: float, a_values: Sequence[int]) -> list[tuple[tuple[int, int], float]]:
    """Ratios ``R(a_i) / R(a_j)`` for every ordered pair ``i < j``; ``t_d`` cancels."""
    if len(a_values) == 0:
        raise ValidationError("a_values must not be empty")
    rates = [classical_rate(a, t_d).rate for a in a_values]
    return [
        ((a_values[i], a_values[j]), rates[i] / rates[j])
        for i, j in itertools.combinations(range(len(a_values)), 2)
    ]


def _picks_per_position(target: np.ndarray, a: int, rng: np.random.Generator) -> np.ndarray:
    """Draw uniform picks for every unfilled position until each one matches its target."""
    attempts = np.zeros(target.size, dtype=np.int64)
    pending = np.arange(target.size)
    while pending.size:
        picks = rng.integers(0, a, size=pending.size)
        attempts[pending] += 1
        pending = pending[picks != target[pending]]
    return attempts


def simulate_classical(
    alphabet: AlphabetSpec,
    task: ChainTask,
    timing: TimingParams,
    seed: int,
    replicates: int = 1,
) -> SimResult:
    if replicates < 1:
        raise ValidationError(f"replicates must be >= 1, got {replicates}")
    if task.a != alphabet.a:
        raise ValidationError(f"task alphabet size {task.a} != alphabet size {alphabet.a}")
    seed = check_seed(seed)
    target = np.asarray(task.target, dtype=np.int64)
    picks = np.empty(replicates, dtype=np.int64)
    for r, rng in enumerate(replicate_generators(seed, replicates)):
        picks[r] = _picks_per_position(target, alphabet.a, rng).sum()

    times = timing.t_d * picks.astype(float)
    sem = float(times.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return SimResult(
        total_time=float(times.mean()),
        attempts_per_base=float(picks.mean() / task.n),
        n_assembled=task.n,
        seed=seed,
        replicates=replicates,
        time_sem=sem,
    )
