"""Seeding helpers shared by the simulators.

Every replicate gets its own PCG64 stream spawned from the master seed, so
results do not depend on the order in which replicates are executed.
"""

import numpy as np

RNG_ALGORITHM = "numpy.random.PCG64 via SeedSequence.spawn (one child stream per replicate)"

MAX_SEED = 2**64 - 1


def check_seed(seed: int) -> int:
    from .core import ValidationError

    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise ValidationError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    return int(seed)


def replicate_generators(seed: int, replicates: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(check_seed(seed)).spawn(replicates)
    return [np.random.Generator(np.random.PCG64(child)) for child in children]


def generator(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(check_seed(seed))))
