"""Shared domain types, the information measure and alphabet-size optimisation.

Chain information is kept in log space throughout: a chain of length ``n``
over ``a`` symbols distinguishes ``N = a**n`` items, and only ``ln N`` is
ever stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

PRESET_LABELS = {
    1: ("A",),
    2: ("A", "T"),
    3: ("A", "C", "G"),
    4: ("A", "C", "G", "T"),
}


class ValidationError(ValueError):
    """Raised when an input violates an operation's preconditions."""


@dataclass(frozen=True)
class AlphabetSpec:
    """The repertoire of building-block types available to the assembler."""

    a: int
    labels: tuple[str, ...]

    def __post_init__(self):
        if not isinstance(self.a, (int, np.integer)) or self.a < 1:
            raise ValidationError(f"alphabet size must be a positive integer, got {self.a!r}")
        if len(self.labels) != self.a:
            raise ValidationError(f"expected {self.a} labels, got {len(self.labels)}")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"alphabet labels must be distinct: {list(self.labels)}")


@dataclass(frozen=True)
class ChainTask:
    """A target chain to assemble, as symbol indices into an alphabet of size ``a``."""

    a: int
    target: tuple[int, ...]
    ln_information: float = field(init=False)

    def __post_init__(self):
        if self.a < 1:
            raise ValidationError(f"alphabet size must be >= 1, got {self.a}")
        if len(self.target) < 1:
            raise ValidationError("chain length must be >= 1")
        if any(t < 0 or t >= self.a for t in self.target):
            raise ValidationError(f"target indices must lie in [0, {self.a})")
        object.__setattr__(self, "ln_information", ln_information(self.a, len(self.target)))

    @property
    def n(self) -> int:
        return len(self.target)


@dataclass(frozen=True)
class TimingParams:
    """Time scales in abstract units.

    ``t_d`` is one classical pick-and-check attempt, ``t_r`` one quantum
    per-base step. The classical per-base time ``a * t_d`` is derived, not
    stored.
    """

    t_d: float = 1.0
    t_r: float = 1.0
    time_unit: str = "arb"

    def __post_init__(self):
        if not self.t_d > 0:
            raise ValidationError(f"t_d must be > 0, got {self.t_d}")
        if not self.t_r > 0:
            raise ValidationError(f"t_r must be > 0, got {self.t_r}")


def make_alphabet(a: int, labels: Sequence[str] | None = None) -> AlphabetSpec:
    if not isinstance(a, (int, np.integer)) or isinstance(a, bool) or a < 1:
        raise ValidationError(f"alphabet size must be a positive integer, got {a!r}")
    if labels is None:
        labels = PRESET_LABELS.get(a) or tuple(f"B{i}" for i in range(1, a + 1))
    return AlphabetSpec(int(a), tuple(str(s) for s in labels))


def make_task(
    alphabet: AlphabetSpec,
    n: int,
    target: Sequence[int] | None = None,
    seed: int | None = None,
) -> ChainTask:
    """Build a chain task; without an explicit target one is drawn uniformly from ``seed``."""
    if n < 1:
        raise ValidationError(f"chain length must be >= 1, got {n}")
    if target is None:
        rng = np.random.default_rng(seed)
        target = rng.integers(0, alphabet.a, size=n)
    elif len(target) != n:
        raise ValidationError(f"target has length {len(target)}, expected {n}")
    return ChainTask(alphabet.a, tuple(int(t) for t in target))


def ln_information(a: int, n: int) -> float:
    """Return ``ln N = n ln a`` (zero for the single-symbol alphabet)."""
    if a < 1 or n < 1:
        raise ValidationError(f"need a >= 1 and n >= 1, got a={a}, n={n}")
    return n * math.log(a)


def classical_coefficient(a: float) -> float:
    """Coefficient of ``t_d ln N`` in the classical assembly time, ``a / ln a``."""
    if not a > 1:
        raise ValidationError(f"classical coefficient is undefined for a <= 1, got {a}")
    return a / math.log(a)


def optimal_alphabet_real(lower: float = 1.0 + 1e-6, upper: float = 10.0, tol: float = 1e-9) -> float:
    """Minimise ``a / ln a`` over real ``a`` by golden-section search."""
    res = minimize_scalar(
        classical_coefficient,
        bracket=(lower, 2.0, upper),
        method="golden",
        tol=tol,
    )
    return float(res.x)


def optimal_alphabet_integer(a_max: int) -> int:
    if a_max < 2:
        raise ValidationError(f"a_max must be >= 2, got {a_max}")
    # min() keeps the first minimiser, so ties go to the smaller a
    return min(range(2, a_max + 1), key=classical_coefficient)
