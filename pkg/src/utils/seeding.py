"""
Seed derivation for reproducible, scheduling-independent random streams.
"""
import numpy as np


def derive_seed(master_seed: int, *keys: int) -> int:
    """
    Derive a child seed from a master seed and a tuple of integer keys.

    The same (master_seed, keys) always yields the same 63-bit seed, and distinct
    key tuples yield independent streams.
    """
    sequence = np.random.SeedSequence([int(master_seed), *(int(k) for k in keys)])
    return int(sequence.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def make_rng(master_seed: int, *keys: int) -> np.random.Generator:
    """Build a private Generator for (master_seed, keys)."""
    return np.random.default_rng(np.random.SeedSequence([int(master_seed), *(int(k) for k in keys)]))
