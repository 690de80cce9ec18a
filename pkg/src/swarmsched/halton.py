"""Halton low-discrepancy points for swarm initialization."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def first_primes(k: int) -> list[int]:
    """The first ``k`` primes, starting at 2."""
    if k <= 0:
        return []
    # p_k < k (ln k + ln ln k) for k >= 6
    limit = 15
    if k >= 6:
        lk = np.log(k)
        limit = int(k * (lk + np.log(lk))) + 1
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(sieve)[:k]]


def radical_inverse(index: int, base: int) -> float:
    """Reverse the base-``base`` digits of ``index`` about the radix point.

    The reversed digits are accumulated as an exact integer fraction and
    divided once, so the result is the correctly rounded float.
    """
    if index < 0 or base < 2:
        raise ValueError("need index >= 0 and base >= 2")
    numerator, denominator = 0, 1
    while index:
        index, digit = divmod(index, base)
        numerator = numerator * base + digit
        denominator *= base
    return numerator / denominator


def radical_inverse_array(indices: np.ndarray, base: int) -> np.ndarray:
    """Vectorized :func:`radical_inverse` for non-negative int64 indices."""
    rest = np.asarray(indices, dtype=np.int64).copy()
    numerator = np.zeros_like(rest)
    denominator = np.ones_like(rest)
    while rest.any():
        live = rest > 0
        digit = rest % base
        numerator = np.where(live, numerator * base + digit, numerator)
        denominator = np.where(live, denominator * base, denominator)
        rest //= base
    # both parts stay below 2**53 for any index we generate, so this is exact then rounded once
    return numerator.astype(float) / denominator.astype(float)


@dataclass(frozen=True)
class HaltonConfig:
    dims: int
    lb: float
    ub: float
    bases: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.dims < 1:
            raise ValueError("dims must be >= 1")
        if not self.lb < self.ub:
            raise ValueError("lb must be < ub")
        if not self.bases:
            object.__setattr__(self, "bases", tuple(first_primes(self.dims)))
        if len(self.bases) != self.dims:
            raise ValueError("need one base per dimension")


def halton_point(index: int, cfg: HaltonConfig) -> np.ndarray:
    span = cfg.ub - cfg.lb
    return np.array([cfg.lb + radical_inverse(index, b) * span for b in cfg.bases])


def halton_points(indices, cfg: HaltonConfig) -> np.ndarray:
    """Rows of Halton points for each index in ``indices``."""
    indices = np.asarray(indices, dtype=np.int64)
    out = np.empty((indices.size, cfg.dims))
    for d, base in enumerate(cfg.bases):
        out[:, d] = radical_inverse_array(indices, base)
    return cfg.lb + out * (cfg.ub - cfg.lb)


def init_populations(pop_size: int, cfg: HaltonConfig) -> tuple[np.ndarray, np.ndarray]:
    """Whale and seagull starting positions.

    Whales take Halton indices ``1..N`` and seagulls ``N+1..2N``; index 0 is
    skipped because it places every coordinate on the lower bound.
    """
    if pop_size < 1:
        raise ValueError("pop_size must be >= 1")
    points = halton_points(np.arange(1, 2 * pop_size + 1), cfg)
    return points[:pop_size], points[pop_size:]
