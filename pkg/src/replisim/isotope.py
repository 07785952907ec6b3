"""Isotope-tag exchange during assembly.

One base type carries two isotope tags: one on the atom group shared by all
bases (``large``) and one on the group that tells bases apart (``small``).
If incorporation never exchanges chemical groups, the two tags always end up
together. Each exchange moves the small tag either onto another base, which
is later built into the strand, or into the enzyme's pool of groups.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from ._rng import check_seed, replicate_generators
from .core import AlphabetSpec, ChainTask, ValidationError


class Partner(str, enum.Enum):
    OTHER_BASE = "OtherBase"
    ENZYME = "Enzyme"


class Destination(str, enum.Enum):
    SAME_BASE = "SameBase"
    OTHER_BASE_IN_STRAND = "OtherBaseInStrand"
    ENZYME_POOL = "EnzymePool"


@dataclass(frozen=True)
class TaggedBase:
    base_index: int
    large_tag: int | None = None
    small_tag: int | None = None


@dataclass(frozen=True)
class ExchangeConfig:
    """``enzyme_weight`` is the share of exchanges whose partner is the enzyme."""

    exchange_prob: float
    enzyme_weight: float = 0.5

    def __post_init__(self):
        if not 0.0 <= self.exchange_prob <= 1.0:
            raise ValidationError(f"exchange_prob must lie in [0, 1], got {self.exchange_prob}")
        if not 0.0 <= self.enzyme_weight <= 1.0:
            raise ValidationError(f"enzyme_weight must lie in [0, 1], got {self.enzyme_weight}")


@dataclass(frozen=True)
class TagReport:
    total_tagged_incorporations: int
    separated_count: int
    destinations: dict
    seed: int
    replicates: int = 1
    tag_locations: dict | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.separated_count > self.total_tagged_incorporations:
            raise ValidationError("separated_count cannot exceed total_tagged_incorporations")
        if sum(self.destinations.values()) != self.total_tagged_incorporations:
            raise ValidationError("destination counts must sum to total_tagged_incorporations")

    def to_dict(self) -> dict:
        return {
            "total_tagged_incorporations": self.total_tagged_incorporations,
            "separated_count": self.separated_count,
            "destinations": {d.value: self.destinations[d] for d in Destination},
            "separation_fraction": (
                separation_fraction(self) if self.total_tagged_incorporations else None
            ),
            "seed": self.seed,
            "replicates": self.replicates,
        }


def run_tagged_assembly(
    alphabet: AlphabetSpec,
    task: ChainTask,
    tagged_fraction: float,
    config: ExchangeConfig,
    seed: int,
    replicates: int = 1,
    tagged_base: int = 0,
    keep_trace: bool = False,
) -> TagReport:
    """Assemble ``task`` and follow every isotope tag to where it ends up.

    Bases of type ``tagged_base`` are tagged with probability
    ``tagged_fraction`` as they are incorporated. With ``keep_trace`` the
    report carries ``tag_locations``, mapping each tag id to
    ``(kind, replicate, position)`` with kind ``"strand"`` or ``"enzyme"``
    (position is the pool slot for the enzyme, and -1 for a partner base
    that stays in the environment because the strand has only one position).
    """
    if not 0.0 < tagged_fraction <= 1.0:
        raise ValidationError(f"tagged_fraction must lie in (0, 1], got {tagged_fraction}")
    if not 0 <= tagged_base < alphabet.a:
        raise ValidationError(f"tagged_base must lie in [0, {alphabet.a}), got {tagged_base}")
    if replicates < 1:
        raise ValidationError(f"replicates must be >= 1, got {replicates}")
    if task.a != alphabet.a:
        raise ValidationError(f"task alphabet size {task.a} != alphabet size {alphabet.a}")
    seed = check_seed(seed)

    target = np.asarray(task.target)
    candidates = np.flatnonzero(target == tagged_base)
    counts = dict.fromkeys(Destination, 0)
    locations = {} if keep_trace else None
    next_tag = 0
    enzyme_slot = 0

    for r, rng in enumerate(replicate_generators(seed, replicates)):
        tagged = candidates[rng.random(candidates.size) < tagged_fraction]
        m = tagged.size
        exchanged = rng.random(m) < config.exchange_prob
        to_enzyme = exchanged & (rng.random(m) < config.enzyme_weight)
        to_base = exchanged & ~to_enzyme
        # the receiving base lands at a uniformly chosen other strand position
        offset = rng.integers(1, task.n, size=m) if task.n > 1 else np.zeros(m, dtype=np.int64)
        partner_pos = (tagged + offset) % task.n if task.n > 1 else np.full(m, -1)

        counts[Destination.SAME_BASE] += int((~exchanged).sum())
        counts[Destination.OTHER_BASE_IN_STRAND] += int(to_base.sum())
        counts[Destination.ENZYME_POOL] += int(to_enzyme.sum())

        if keep_trace:
            for i in range(m):
                pos = int(tagged[i])
                large, small = next_tag, next_tag + 1
                next_tag += 2
                locations[large] = ("strand", r, pos)
                if to_enzyme[i]:
                    locations[small] = ("enzyme", r, enzyme_slot)
                    enzyme_slot += 1
                elif to_base[i]:
                    locations[small] = ("strand", r, int(partner_pos[i]))
                else:
                    locations[small] = ("strand", r, pos)

    total = sum(counts.values())
    separated = counts[Destination.OTHER_BASE_IN_STRAND] + counts[Destination.ENZYME_POOL]
    return TagReport(total, separated, counts, seed, replicates, locations)


def separation_fraction(report: TagReport) -> float:
    if report.total_tagged_incorporations < 1:
        raise ValidationError("no tagged incorporations; separation fraction undefined")
    return report.separated_count / report.total_tagged_incorporations
