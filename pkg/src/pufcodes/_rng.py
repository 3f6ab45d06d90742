import numpy as np


def as_rng(seed) -> np.random.Generator:
    """Accept an int seed, a SeedSequence, a Generator or None."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn(rng: np.random.Generator, n: int):
    """Independent child generators for parallel or per-trial streams."""
    return rng.spawn(n)
