"""Seeded random streams keyed by integer tuples.

Every random draw in the package comes from a generator built with
``substream(seed, domain, *key)``.  The domain tag keeps the member,
permutation and split streams apart even when their integer keys coincide,
so no reported number depends on the order in which work is scheduled.
"""

import numpy as np

MEMBER = 1
PERMUTATION = 2
SPLIT = 3
SIMULATION = 4


def substream(seed, domain, *key):
    """Return a fresh ``numpy.random.Generator`` for ``(seed, domain, *key)``."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(domain),) + tuple(int(k) for k in key))
    return np.random.default_rng(ss)


def as_generator(rng):
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
