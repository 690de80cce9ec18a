"""Whale optimization position updates.

Every move function broadcasts: pass single positions with scalar
coefficients, or ``(N, n)`` position blocks with ``(N, 1)`` coefficient
columns to move a whole population at once.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPIRAL_B = 1.0


@dataclass(frozen=True)
class WoaParams:
    t: int
    max_iter: int
    b: float = SPIRAL_B

    def __post_init__(self):
        if self.max_iter < 1 or not 0 <= self.t <= self.max_iter:
            raise ValueError("need max_iter >= 1 and 0 <= t <= max_iter")

    @property
    def a_coef(self) -> float:
        """Control scalar, decreasing linearly from 2 at t=0 to 0 at t=max_iter."""
        return 2.0 * (1.0 - self.t / self.max_iter)


def coefficients_from(a_coef, r1, r2):
    return 2.0 * a_coef * r1 - a_coef, 2.0 * r2


def woa_coefficients(params: WoaParams, rng: np.random.Generator) -> tuple[float, float]:
    r1, r2 = rng.random(2)
    A, C = coefficients_from(params.a_coef, r1, r2)
    return float(A), float(C)


def _check_dims(a, b):
    if np.shape(a) != np.shape(b):
        raise ValueError(f"dimension mismatch: {np.shape(a)} vs {np.shape(b)}")


def encircle(cur, leader, A, C):
    """Shrink toward the leader: ``leader - A*|C*leader - cur|``."""
    _check_dims(cur, leader)
    return leader - A * np.abs(C * leader - cur)


def spiral(cur, leader, b, l):
    """Logarithmic spiral around the leader."""
    return np.abs(leader - cur) * np.exp(b * l) * np.cos(2 * np.pi * l) + leader


def explore(cur, rand_agent, A, C):
    _check_dims(cur, rand_agent)
    return rand_agent - A * np.abs(C * rand_agent - cur)


def woa_move(cur, leader, rand_agent, A, C, p, l, b=SPIRAL_B):
    """Apply one of the three whale moves per agent, given already drawn randoms.

    ``p < 0.5`` picks encircle when ``|A| < 1`` and explore otherwise;
    ``p >= 0.5`` picks the spiral.
    """
    shrink = np.where(np.abs(A) < 1, encircle(cur, leader, A, C), explore(cur, rand_agent, A, C))
    return np.where(p < 0.5, shrink, spiral(cur, leader, b, l))


def draw_woa(n_agents: int, a_coef: float, pop_size: int, rng: np.random.Generator) -> dict:
    """Per-agent randoms for one whale update, one row per agent."""
    r1 = rng.random(n_agents)
    r2 = rng.random(n_agents)
    A, C = coefficients_from(a_coef, r1, r2)
    return {
        "A": A,
        "C": C,
        "p": rng.random(n_agents),
        "l": rng.uniform(-1.0, 1.0, n_agents),
        "rand_idx": rng.integers(0, pop_size, n_agents),
    }


def woa_step(cur, leader, population, params: WoaParams, rng: np.random.Generator) -> np.ndarray:
    """Move one whale. ``population`` supplies the random peer for exploration."""
    population = np.asarray(population, dtype=float)
    if population.shape[0] == 0:
        raise ValueError("population must be non-empty")
    d = draw_woa(1, params.a_coef, population.shape[0], rng)
    peer = population[d["rand_idx"][0]]
    return woa_move(
        np.asarray(cur, dtype=float),
        np.asarray(leader, dtype=float),
        peer,
        d["A"][0],
        d["C"][0],
        d["p"][0],
        d["l"][0],
        params.b,
    )


def woa_update(positions: np.ndarray, leaders: np.ndarray, draws: dict, b: float = SPIRAL_B) -> np.ndarray:
    """Move every whale in ``positions`` using per-row draws from :func:`draw_woa`."""
    col = lambda key: draws[key][:, None]  # noqa: E731
    return woa_move(positions, leaders, positions[draws["rand_idx"]], col("A"), col("C"), col("p"), col("l"), b)
