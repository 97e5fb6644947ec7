"""Deterministic derivation of independent random streams.

All randomness in this package flows through numpy's PCG64 generator
(``np.random.default_rng``), whose normal variates come from the ziggurat
method.  Reproducibility is guaranteed across runs of this package on the
same numpy for identical seeds, not across unrelated implementations.
"""

import numpy as np


def derive_seed(seed: int, *path: int) -> int:
    """Mix a base seed and an integer path into a 64-bit sub-seed.

    The mixing function is ``np.random.SeedSequence`` over the concatenated
    entropy ``[seed, *path]``; identical arguments always yield the same
    sub-seed and distinct paths yield statistically independent streams.
    """
    ss = np.random.SeedSequence([int(seed), *(int(p) for p in path)])
    return int(ss.generate_state(1, np.uint64)[0])
