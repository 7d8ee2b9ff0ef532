"""Cycle types (conjugacy-class labels of the symmetric group) and generators."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class CycleType:
    """Counts ``(t_1, t_2, ...)`` of ``p``-cycles; ``counts[p - 1] == t_p``.

    Trailing zeros are trimmed, so ``CycleType((2, 1, 0))`` equals
    ``CycleType((2, 1))``. The size is ``n = sum(p * t_p)``.
    """

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError(f"cycle counts must be non-negative, got {counts}")
        while counts and counts[-1] == 0:
            counts = counts[:-1]
        object.__setattr__(self, "counts", counts)

    @property
    def n(self) -> int:
        return sum(p * c for p, c in enumerate(self.counts, start=1))

    def t(self, p: int) -> int:
        """Number of ``p``-cycles."""
        if p < 1:
            raise ValueError("cycle length must be >= 1")
        return self.counts[p - 1] if p <= len(self.counts) else 0

    @property
    def fixed_points(self) -> int:
        return self.t(1)

    @property
    def num_cycles(self) -> int:
        return sum(self.counts)

    def items(self):
        """Yield ``(p, t_p)`` for every nonzero count."""
        for p, c in enumerate(self.counts, start=1):
            if c:
                yield p, c

    def class_size(self) -> int:
        """Number of permutations with this cycle type: ``n! / prod(p^t_p t_p!)``."""
        from math import factorial

        denom = 1
        for p, c in self.items():
            denom *= p**c * factorial(c)
        return factorial(self.n) // denom

    def to_json(self) -> str:
        return json.dumps(list(self.counts))

    def __str__(self):
        return ",".join(map(str, self.counts)) if self.counts else "0"


def from_counts(counts: Sequence[int]) -> CycleType:
    return CycleType(tuple(counts))


def parse_counts(text: str) -> CycleType:
    """Parse ``"1,2,1,1"`` or a JSON array such as ``"[1,2,1,1]"``."""
    text = text.strip()
    if text.startswith("["):
        return from_counts(json.loads(text))
    return from_counts([int(tok) for tok in text.split(",") if tok.strip()])


def from_cycle_lengths(lengths) -> CycleType:
    lengths = list(lengths)
    if not lengths:
        return CycleType(())
    counts = [0] * max(lengths)
    for p in lengths:
        counts[p - 1] += 1
    return CycleType(tuple(counts))


def remove_fixed_points(t: CycleType) -> CycleType:
    """The fixed-point-free part of ``t``, of size ``n - t_1``."""
    if not t.counts:
        return t
    return CycleType((0,) + t.counts[1:])


def all_p_cycles(n: int, p: int) -> CycleType:
    if p < 1:
        raise ValueError("p must be >= 1")
    if n % p:
        raise ValueError(f"{p} does not divide {n}")
    return CycleType((0,) * (p - 1) + (n // p,))


def involution_type(n: int, fixed: int) -> CycleType:
    if not 0 <= fixed <= n:
        raise ValueError(f"need 0 <= fixed <= n, got fixed={fixed}, n={n}")
    if (n - fixed) % 2:
        raise ValueError(f"n - fixed must be even, got n={n}, fixed={fixed}")
    return CycleType((fixed, (n - fixed) // 2))


def fixed_plus_cycle(n: int, fixed: int) -> CycleType:
    """``fixed`` fixed points and a single cycle on the remaining points."""
    if not 0 <= fixed <= n:
        raise ValueError(f"need 0 <= fixed <= n, got fixed={fixed}, n={n}")
    rest = n - fixed
    if rest == 0:
        return CycleType((fixed,))
    if rest == 1:
        return CycleType((fixed + 1,))
    counts = [0] * rest
    counts[0] = fixed
    counts[rest - 1] = 1
    return CycleType(tuple(counts))


def ewens_type(n: int, theta: float, rng: np.random.Generator) -> CycleType:
    """Cycle type of an Ewens(theta) permutation of ``[n]``.

    Chinese restaurant process: customer ``i + 1`` opens a new table with
    probability ``theta / (theta + i)`` and otherwise sits at the table of a
    uniformly chosen earlier customer (i.e. joins a table with probability
    proportional to its size). Table sizes are the cycle lengths.
    """
    if theta <= 0:
        raise ValueError("theta must be positive")
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return CycleType(())
    coins = rng.random(n)
    picks = rng.random(n)
    table_of = np.empty(n, dtype=np.int64)
    sizes = []
    for i in range(n):
        if coins[i] < theta / (theta + i):
            table_of[i] = len(sizes)
            sizes.append(1)
        else:
            table = table_of[int(picks[i] * i)]
            table_of[i] = table
            sizes[table] += 1
    return from_cycle_lengths(sizes)


def enumerate_cycle_types(n: int):
    """All cycle types of size ``n`` (one per integer partition), in a fixed order."""

    def parts(remaining, largest):
        if remaining == 0:
            yield []
            return
        for p in range(min(remaining, largest), 0, -1):
            for rest in parts(remaining - p, p):
                yield [p] + rest

    for partition in parts(n, n):
        yield from_cycle_lengths(partition)
