"""Decide between the classical rate law ``R(a) = c / a`` and the quantum law ``R(a) = c``.

Synthetic rate measurements over reduced alphabets ``a`` in 1..4 are fitted
with both one-parameter laws under multiplicative Gaussian noise. The
difference of the weighted residual sums is a log-likelihood-ratio statistic,
whose significance is calibrated by parametric bootstrap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from ._rng import check_seed, generator
from .core import ValidationError

ALLOWED_A = (1, 2, 3, 4)

# Base-pair make-up of each designer strand. a=3 is an A,C,G template copied
# from a T,C,G environment; a=2 defaults to the A-T variant.
DEFAULT_COMPOSITION = {
    1: {"AT": 1.0},
    2: {"AT": 1.0},
    3: {"AT": 1.0 / 3.0, "CG": 2.0 / 3.0},
    4: {"AT": 0.5, "CG": 0.5},
}

# Stand-in noise level for "noiseless" experiments, since the likelihood needs sigma > 0
NOISELESS_SIGMA = 1e-12


class RateModel(str, enum.Enum):
    CLASSICAL = "Classical"
    QUANTUM = "Quantum"


class Regime(str, enum.Enum):
    CLASSICAL = "Classical"
    QUANTUM = "Quantum"
    INTERMEDIATE = "Intermediate"


@dataclass(frozen=True)
class RateSample:
    a: int
    observed_rate: float
    sigma_rel: float

    def __post_init__(self):
        if self.a not in ALLOWED_A:
            raise ValidationError(f"a must be one of {ALLOWED_A}, got {self.a}")
        if not self.observed_rate > 0:
            raise ValidationError(f"observed_rate must be > 0, got {self.observed_rate}")
        if not self.sigma_rel > 0:
            raise ValidationError(f"sigma_rel must be > 0, got {self.sigma_rel}")


@dataclass(frozen=True)
class Verdict:
    chosen_model: RateModel
    statistic: float
    p_value: float
    fitted_scale_classical: float
    fitted_scale_quantum: float
    bootstrap_B: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "chosen_model": self.chosen_model.value,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "fitted_scale_classical": self.fitted_scale_classical,
            "fitted_scale_quantum": self.fitted_scale_quantum,
            "bootstrap_B": self.bootstrap_B,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class RenormalizationTable:
    """Rate multipliers per base-pair type, e.g. to absorb slower C-G pairing.

    A strand's factor is the harmonic mean of its pair multipliers weighted
    by pair proportion, since the per-base times add.
    """

    multipliers: Mapping[str, float] = field(default_factory=dict)
    composition: Mapping[int, Mapping[str, float]] = field(default_factory=lambda: DEFAULT_COMPOSITION)

    def __post_init__(self):
        for pair, m in self.multipliers.items():
            if not m > 0:
                raise ValidationError(f"multiplier for {pair} must be > 0, got {m}")

    def factor(self, a: int) -> float:
        mix = self.composition[a]
        total = sum(mix.values())
        return total / sum(w / self.multipliers.get(pair, 1.0) for pair, w in mix.items())


def _shape(model: RateModel | str, a: np.ndarray) -> np.ndarray:
    model = RateModel(model)
    if model is RateModel.CLASSICAL:
        return 1.0 / a
    return np.ones_like(a, dtype=float)


def _mixture_shape(w: float, a: np.ndarray) -> np.ndarray:
    return w / a + (1.0 - w)


def _noise_factors(rng: np.random.Generator, sigma: np.ndarray, shape: tuple) -> np.ndarray:
    """Draw ``1 + eps`` with ``eps ~ N(0, sigma)``, redrawing until positive."""
    sigma = np.broadcast_to(sigma, shape)
    out = 1.0 + sigma * rng.standard_normal(shape)
    bad = out <= 0.0
    while bad.any():
        out[bad] = 1.0 + sigma[bad] * rng.standard_normal(int(bad.sum()))
        bad = out <= 0.0
    return out


def generate_experiment(
    model: RateModel | str,
    c: float,
    a_values: Sequence[int],
    repeats_per_a: int,
    sigma_rel: float,
    renorm: RenormalizationTable | None = None,
    seed: int = 0,
    mixture_weight: float | None = None,
) -> list[RateSample]:
    """Synthetic rate measurements, ``repeats_per_a`` per alphabet size, in input order.

    ``mixture_weight`` (when given) overrides ``model`` with the interpolating
    law ``c * (w / a + 1 - w)``.
    """
    if any(a not in ALLOWED_A for a in a_values):
        raise ValidationError(f"a_values must be a subset of {ALLOWED_A}, got {list(a_values)}")
    if repeats_per_a < 1:
        raise ValidationError(f"repeats_per_a must be >= 1, got {repeats_per_a}")
    if not sigma_rel > 0:
        raise ValidationError(f"sigma_rel must be > 0, got {sigma_rel}")
    if not c > 0:
        raise ValidationError(f"scale c must be > 0, got {c}")
    renorm = renorm or RenormalizationTable()
    a = np.repeat(np.asarray(a_values, dtype=float), repeats_per_a)
    if mixture_weight is not None:
        if not 0.0 <= mixture_weight <= 1.0:
            raise ValidationError(f"mixture_weight must lie in [0, 1], got {mixture_weight}")
        true_rate = c * _mixture_shape(mixture_weight, a)
    else:
        true_rate = c * _shape(model, a)
    true_rate = true_rate * np.array([renorm.factor(int(x)) for x in a])
    rates = true_rate * _noise_factors(generator(seed), np.array(sigma_rel), a.shape)
    return [RateSample(int(ai), float(r), float(sigma_rel)) for ai, r in zip(a, rates)]


def _arrays(samples: Sequence[RateSample], renorm: RenormalizationTable | None = None):
    if len(samples) == 0:
        raise ValidationError("need at least one rate sample")
    a = np.array([s.a for s in samples], dtype=float)
    y = np.array([s.observed_rate for s in samples], dtype=float)
    sigma = np.array([s.sigma_rel for s in samples], dtype=float)
    if renorm is not None:
        y = y / np.array([renorm.factor(s.a) for s in samples])
    return a, y, sigma


def _fit_shape(y: np.ndarray, shape: np.ndarray, sigma: np.ndarray):
    """Weighted fit of ``y ~ c * shape`` with relative errors; works row-wise on 2-d ``y``.

    With ``u = y / shape`` the objective ``sum(((u - c) / (sigma c))**2)`` is a
    least-squares problem in ``1/c``, so both optimum and residual are closed form.
    """
    u = y / shape
    w = 1.0 / sigma**2
    inv_c = (u * w).sum(axis=-1) / (u * u * w).sum(axis=-1)
    resid = (w * (u * inv_c[..., None] - 1.0) ** 2).sum(axis=-1)
    return 1.0 / inv_c, resid


def fit_rate_model(
    samples: Sequence[RateSample],
    model: RateModel | str,
    renorm: RenormalizationTable | None = None,
) -> tuple[float, float]:
    """Return the best scale ``c`` and the minimised weighted residual sum (``-2 log L`` up to a constant)."""
    a, y, sigma = _arrays(samples, renorm)
    c, resid = _fit_shape(y, _shape(model, a), sigma)
    return float(c), float(resid)


def _statistic(y: np.ndarray, a: np.ndarray, sigma: np.ndarray) -> np.ndarray:
    _, rss_c = _fit_shape(y, _shape(RateModel.CLASSICAL, a), sigma)
    _, rss_q = _fit_shape(y, _shape(RateModel.QUANTUM, a), sigma)
    return rss_q - rss_c


def _check_spread(a: np.ndarray) -> None:
    if np.unique(a).size < 2:
        raise ValidationError(
            "all samples share one alphabet size; the classical and quantum laws cannot be told apart"
        )


def discriminate(
    samples: Sequence[RateSample],
    bootstrap_B: int = 1000,
    seed: int = 0,
    renorm: RenormalizationTable | None = None,
) -> Verdict:
    """Pick the rate law with the lower residual and bootstrap a p-value under the other one.

    The p-value is the (add-one) fraction of datasets simulated from the
    rejected law's fit whose statistic is at least as extreme, in the
    direction of the chosen law, as the observed one.
    """
    if bootstrap_B < 1:
        raise ValidationError(f"bootstrap_B must be >= 1, got {bootstrap_B}")
    seed = check_seed(seed)
    a, y, sigma = _arrays(samples, renorm)
    _check_spread(a)

    c_cl, rss_cl = _fit_shape(y, _shape(RateModel.CLASSICAL, a), sigma)
    c_q, rss_q = _fit_shape(y, _shape(RateModel.QUANTUM, a), sigma)
    stat = float(rss_q - rss_cl)
    chosen = RateModel.CLASSICAL if stat > 0 else RateModel.QUANTUM

    if chosen is RateModel.CLASSICAL:
        null_rate = c_q * _shape(RateModel.QUANTUM, a)
    else:
        null_rate = c_cl * _shape(RateModel.CLASSICAL, a)
    boot_y = null_rate * _noise_factors(generator(seed), sigma, (bootstrap_B, a.size))
    boot_stat = _statistic(boot_y, a, sigma)
    if chosen is RateModel.CLASSICAL:
        extreme = int((boot_stat >= stat).sum())
    else:
        extreme = int((boot_stat <= stat).sum())
    p_value = (extreme + 1) / (bootstrap_B + 1)

    return Verdict(
        chosen_model=chosen,
        statistic=stat,
        p_value=p_value,
        fitted_scale_classical=float(c_cl),
        fitted_scale_quantum=float(c_q),
        bootstrap_B=bootstrap_B,
        seed=seed,
    )


def power_curve(
    model: RateModel | str,
    sigma_levels: Iterable[float],
    repeats_per_a: int = 10,
    trials: int = 200,
    seed: int = 0,
    bootstrap_B: int = 200,
    a_values: Sequence[int] = ALLOWED_A,
    alpha: float = 0.05,
) -> list[dict]:
    """Fraction of trials in which ``discriminate`` recovers the generating law, per noise level.

    Each row also reports ``fraction_significant``: the share of trials that
    are both correct and have ``p_value <= alpha``. A sigma of 0 means
    noiseless data.
    """
    if trials < 10:
        raise ValidationError(f"trials must be >= 10, got {trials}")
    model = RateModel(model)
    seed = check_seed(seed)
    sigma_levels = [float(s) for s in sigma_levels]
    if any(s < 0 for s in sigma_levels):
        raise ValidationError("sigma levels must be >= 0")
    seeds = np.random.SeedSequence(seed).generate_state(2 * trials * len(sigma_levels), dtype=np.uint64)
    rows = []
    k = 0
    for sigma in sigma_levels:
        correct = significant = 0
        for _ in range(trials):
            data_seed, boot_seed = int(seeds[k]), int(seeds[k + 1])
            k += 2
            samples = generate_experiment(
                model, 1.0, a_values, repeats_per_a, max(sigma, NOISELESS_SIGMA), seed=data_seed
            )
            verdict = discriminate(samples, bootstrap_B, boot_seed)
            hit = verdict.chosen_model is model
            correct += hit
            significant += hit and verdict.p_value <= alpha
        fraction = correct / trials
        rows.append(
            {
                "sigma_rel": sigma,
                "fraction_correct": fraction,
                "standard_error": math.sqrt(fraction * (1.0 - fraction) / trials),
                "fraction_significant": significant / trials,
                "trials": trials,
            }
        )
    return rows


@dataclass(frozen=True)
class MixtureFit:
    weight: float
    scale: float
    residual: float


def fit_mixture(samples: Sequence[RateSample], renorm: RenormalizationTable | None = None) -> MixtureFit:
    """Fit ``c * (w / a + 1 - w)`` with ``w`` in [0, 1]."""
    a, y, sigma = _arrays(samples, renorm)
    return _fit_mixture_arrays(a, y, sigma)


def _fit_mixture_arrays(a: np.ndarray, y: np.ndarray, sigma: np.ndarray) -> MixtureFit:
    def objective(w):
        return float(_fit_shape(y, _mixture_shape(w, a), sigma)[1])

    # coarse grid first, the objective is not guaranteed unimodal in w
    grid = np.linspace(0.0, 1.0, 101)
    values = _fit_shape(y, _mixture_shape(grid[:, None], a), sigma)[1]
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": 1e-10})
    w = float(res.x) if res.fun <= values[i] else float(grid[i])
    c, resid = _fit_shape(y, _mixture_shape(w, a), sigma)
    return MixtureFit(w, float(c), float(resid))


def imperfect_regime_classifier(
    samples: Sequence[RateSample],
    t_r_over_t_d: float = 1.0,
    bootstrap_B: int = 200,
    seed: int = 0,
    renorm: RenormalizationTable | None = None,
    weight_band: tuple[float, float] = (0.1, 0.9),
    alpha: float = 0.05,
) -> Regime:
    """Classify data as classical, quantum, or an imperfect-quantum mixture of the two.

    Intermediate requires the fitted mixture weight inside ``weight_band``
    and a residual improvement over the better pure law exceeding the
    ``1 - alpha`` quantile of that improvement under the better pure law's
    own fit (parametric bootstrap).
    """
    if not t_r_over_t_d > 0:
        raise ValidationError(f"t_r_over_t_d must be > 0, got {t_r_over_t_d}")
    if bootstrap_B < 1:
        raise ValidationError(f"bootstrap_B must be >= 1, got {bootstrap_B}")
    seed = check_seed(seed)
    a, y, sigma = _arrays(samples, renorm)
    _check_spread(a)

    c_cl, rss_cl = _fit_shape(y, _shape(RateModel.CLASSICAL, a), sigma)
    c_q, rss_q = _fit_shape(y, _shape(RateModel.QUANTUM, a), sigma)
    nearer = Regime.CLASSICAL if rss_cl < rss_q else Regime.QUANTUM
    mix = _fit_mixture_arrays(a, y, sigma)
    improvement = min(rss_cl, rss_q) - mix.residual
    if not weight_band[0] <= mix.weight <= weight_band[1]:
        return nearer

    if nearer is Regime.CLASSICAL:
        null_rate = c_cl * _shape(RateModel.CLASSICAL, a)
    else:
        null_rate = c_q * _shape(RateModel.QUANTUM, a)
    rng = generator(seed)
    boot = np.empty(bootstrap_B)
    for b in range(bootstrap_B):
        yb = null_rate * _noise_factors(rng, sigma, a.shape)
        _, rb_cl = _fit_shape(yb, _shape(RateModel.CLASSICAL, a), sigma)
        _, rb_q = _fit_shape(yb, _shape(RateModel.QUANTUM, a), sigma)
        boot[b] = min(rb_cl, rb_q) - _fit_mixture_arrays(a, yb, sigma).residual
    threshold = float(np.quantile(boot, 1.0 - alpha))
    return Regime.INTERMEDIATE if improvement > threshold else nearer
