"""Exact real-amplitude Grover search over an alphabet of ``a`` building blocks.

Also holds the quantum assembly-time and rate laws, the coherence break-even
bound against the best classical alphabet, and a retry simulator for a
quantum step that only succeeds part of the time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._rng import check_seed, replicate_generators
from .classical import Model, RatePrediction, SimResult
from .core import AlphabetSpec, ChainTask, TimingParams, ValidationError

MODES = ("idealized", "physical")

# Q lands on an integer only up to rounding in arcsin; a = 4 must give exactly 1
_INTEGER_SNAP = 1e-9


@dataclass(frozen=True)
class GroverState:
    amplitudes: np.ndarray
    target: int
    iterations_applied: int = 0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=float)
        if amps.ndim != 1 or amps.size < 1:
            raise ValidationError("amplitudes must be a non-empty 1-d sequence")
        if not 0 <= self.target < amps.size:
            raise ValidationError(f"target {self.target} out of range for a={amps.size}")
        if abs(float(amps @ amps) - 1.0) > 1e-12:
            raise ValidationError("amplitudes must have unit norm")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def a(self) -> int:
        return self.amplitudes.size

    @property
    def success_probability(self) -> float:
        return float(self.amplitudes[self.target] ** 2)

    @classmethod
    def uniform(cls, a: int, target: int) -> "GroverState":
        return cls(np.full(a, 1.0 / math.sqrt(a)), target)


@dataclass(frozen=True)
class ImperfectQuantumConfig:
    """``p_coherence`` is the chance a quantum attempt runs undisturbed."""

    p_coherence: float
    t_r_over_t_d: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.p_coherence <= 1.0:
            raise ValidationError(f"p_coherence must lie in [0, 1], got {self.p_coherence}")
        if not self.t_r_over_t_d > 0:
            raise ValidationError(f"t_r_over_t_d must be > 0, got {self.t_r_over_t_d}")


def grover_angle(a: int) -> float:
    """``arcsin(1/sqrt(a))``: the initial overlap angle with the target."""
    if a < 1:
        raise ValidationError(f"a must be >= 1, got {a}")
    return math.asin(1.0 / math.sqrt(a))


def iteration_count_real(a: int) -> float:
    """Real solution ``Q`` of ``(2Q + 1) * angle = pi / 2``."""
    return (math.pi / (2.0 * grover_angle(a)) - 1.0) / 2.0


def iterations_required(a: int) -> int:
    """Smallest integer number of iterations not below the real solution."""
    q = iteration_count_real(a)
    nearest = round(q)
    if abs(q - nearest) < _INTEGER_SNAP:
        return int(nearest)
    return math.ceil(q)


def oracle_flip(state: GroverState) -> GroverState:
    amps = state.amplitudes.copy()
    amps[state.target] = -amps[state.target]
    return GroverState(amps, state.target, state.iterations_applied)


def inversion_about_mean(state: GroverState) -> GroverState:
    amps = 2.0 * state.amplitudes.mean() - state.amplitudes
    return GroverState(amps, state.target, state.iterations_applied)


def grover_search(a: int, target: int, k: int) -> tuple[GroverState, float]:
    """Run ``k`` rounds of oracle flip followed by inversion about the mean."""
    if k < 0:
        raise ValidationError(f"iteration count must be >= 0, got {k}")
    state = GroverState.uniform(a, target)
    for _ in range(k):
        state = inversion_about_mean(oracle_flip(state))
        state = GroverState(state.amplitudes, target, state.iterations_applied + 1)
    return state, state.success_probability


def success_probability_closed_form(a: int, k: int) -> float:
    return math.sin((2 * k + 1) * grover_angle(a)) ** 2


def _per_base_blocks(a: int) -> int:
    # a = 1 needs no search, but the base is still picked and attached once
    return max(iterations_required(a), 1)


def quantum_assembly_time(a: int, n: int, t_r: float, mode: str = "idealized") -> float:
    """Quantum assembly time for a chain of ``n`` bases.

    ``idealized`` charges ``t_r`` per iteration block and treats the search
    as certain. ``physical`` divides by the Grover success probability, i.e.
    the expected time when failed searches are retried.
    """
    if a < 1 or n < 1:
        raise ValidationError(f"need a >= 1 and n >= 1, got a={a}, n={n}")
    if not t_r > 0:
        raise ValidationError(f"t_r must be > 0, got {t_r}")
    base = _per_base_blocks(a) * t_r * n
    if mode == "idealized":
        return base
    if mode == "physical":
        return base / success_probability_closed_form(a, iterations_required(a))
    raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")


def quantum_rate(a: int, t_r: float, mode: str = "idealized") -> RatePrediction:
    if not 1 <= a <= 4:
        raise ValidationError(f"the constant quantum rate law holds for 1 <= a <= 4, got a={a}")
    rate = 1.0 / quantum_assembly_time(a, 1, t_r, mode)
    return RatePrediction(Model.QUANTUM_IDEAL, a, rate, {"a": a, "t_r": t_r, "mode": mode})


def imperfect_quantum_rate(a: int, t_r: float, p_coherence: float) -> RatePrediction:
    """Expected rate when each attempt succeeds with ``p_coherence`` times the Grover success probability."""
    if not 1 <= a <= 4:
        raise ValidationError(f"imperfect quantum rate is defined for 1 <= a <= 4, got a={a}")
    p_eff = effective_success(a, p_coherence)
    return RatePrediction(
        Model.QUANTUM_IMPERFECT, a, p_eff / t_r, {"a": a, "t_r": t_r, "p_coherence": p_coherence}
    )


def coherence_threshold(t_r: float, t_d: float) -> float:
    """Minimum success probability for which imperfect quantum assembly at a=4 beats classical at a=3.

    Ratio of the two assembly times for the same information content,
    ``T_q(4) / T_c(3)``, evaluated from the time laws.
    """
    if not (t_r > 0 and t_d > 0):
        raise ValidationError(f"t_r and t_d must be > 0, got {t_r}, {t_d}")
    quantum_per_ln_n = _per_base_blocks(4) * t_r / math.log(4)
    classical_per_ln_n = 3 * t_d / math.log(3)
    return quantum_per_ln_n / classical_per_ln_n


def effective_success(a: int, p_coherence: float, mode: str = "physical") -> float:
    if mode == "physical":
        return p_coherence * success_probability_closed_form(a, iterations_required(a))
    if mode == "idealized":
        return p_coherence
    raise ValidationError(f"mode must be one of {MODES}, got {mode!r}")


def simulate_imperfect_quantum(
    alphabet: AlphabetSpec,
    task: ChainTask,
    timing: TimingParams,
    config: ImperfectQuantumConfig,
    seed: int,
    replicates: int = 1,
    mode: str = "physical",
) -> SimResult:
    """Assemble with retried quantum attempts, each costing ``t_r`` per iteration block."""
    a = alphabet.a
    if not 1 <= a <= 4:
        raise ValidationError(f"imperfect quantum simulation needs 1 <= a <= 4, got a={a}")
    if replicates < 1:
        raise ValidationError(f"replicates must be >= 1, got {replicates}")
    if task.a != a:
        raise ValidationError(f"task alphabet size {task.a} != alphabet size {a}")
    p_eff = effective_success(a, config.p_coherence, mode)
    if p_eff <= 0.0:
        raise ValidationError("effective success probability is 0; assembly would never finish")
    seed = check_seed(seed)
    cost = _per_base_blocks(a) * timing.t_r

    attempts = np.empty(replicates, dtype=np.int64)
    for r, rng in enumerate(replicate_generators(seed, replicates)):
        if p_eff >= 1.0:
            attempts[r] = task.n
        else:
            attempts[r] = rng.geometric(p_eff, size=task.n).sum()

    times = cost * attempts.astype(float)
    sem = float(times.std(ddof=1) / math.sqrt(replicates)) if replicates > 1 else 0.0
    return SimResult(
        total_time=float(times.mean()),
        attempts_per_base=float(attempts.mean() / task.n),
        n_assembled=task.n,
        seed=seed,
        replicates=replicates,
        time_sem=sem,
    )
