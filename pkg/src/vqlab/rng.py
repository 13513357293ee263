"""Seeded random streams.

All stochastic code in the package draws from Philox, a counter-based
generator, through `stream(seed, *key)`. Distinct integer keys give
independent streams for the same user-facing seed, so e.g. the angles used
for expressibility pairs never alias the angles used for entanglement
sampling. Samplers draw their whole parameter block up front from one
stream, which makes results independent of how the per-sample work is
later scheduled.
"""

import numpy as np

from .errors import ConfigurationError

# Stream keys, one per consumer. Keep these unique.
EXPRESSIBILITY_THETA = 0
EXPRESSIBILITY_PHI = 1
ENTANGLEMENT = 2
QGAN_INIT = 16
QGAN_SAMPLING = 17
DISCRIMINATOR_INIT = 18
CLASSIFIER_INIT = 24
CLASSIFIER_SHUFFLE = 25
TARGET_DISTRIBUTION = 32


def stream(seed: int, *key: int) -> np.random.Generator:
    """Return a Generator for the (seed, key) stream.

    seed must fit in an unsigned 64-bit integer.
    """
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
