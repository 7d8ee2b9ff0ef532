"""Per-trial random streams derived from one 64-bit seed."""

import numpy as np

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULT_1 = 0xBF58476D1CE4E5B9
MIX_MULT_2 = 0x94D049BB133111EB
MASK64 = (1 << 64) - 1


def mix64(z: int) -> int:
    """The splitmix64 output finalizer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_MULT_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MULT_2) & MASK64
    return z ^ (z >> 31)


def trial_state(seed: int, trial: int) -> int:
    if trial < 0:
        raise ValueError("trial index must be non-negative")
    return mix64((seed & MASK64) ^ ((GOLDEN_GAMMA * (trial + 1)) & MASK64))


def derive_trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Independent-looking PCG64 stream for ``trial``, reproducible from ``(seed, trial)``."""
    return np.random.Generator(np.random.PCG64(trial_state(seed, trial)))


def derive_seed(seed: int, label: str) -> int:
    """Sub-seed for a named component, so criteria do not share streams."""
    h = 0
    for ch in label.encode():
        h = mix64(h ^ ch)
    return mix64((seed & MASK64) ^ h)
