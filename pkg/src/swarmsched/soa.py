"""Seagull optimization: migration followed by a spiral attack."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SoaParams:
    t: int
    max_iter: int
    fc: float = 2.0
    u: float = 1.0
    v: float = 1.0

    def __post_init__(self):
        if not self.fc > 0:
            raise ValueError("fc must be > 0")
        if self.max_iter < 1 or not 0 <= self.t <= self.max_iter:
            raise ValueError("need max_iter >= 1 and 0 <= t <= max_iter")
        if not (np.isfinite(self.u) and np.isfinite(self.v)):
            raise ValueError("spiral constants must be finite")

    @property
    def a_coef(self) -> float:
        """Migration control, decreasing linearly from fc to 0."""
        return self.fc - self.t * (self.fc / self.max_iter)


def migrate(cur, best, A, B):
    """Distance term ``|A*cur + B*(best - cur)|``."""
    if np.shape(cur) != np.shape(best):
        raise ValueError(f"dimension mismatch: {np.shape(cur)} vs {np.shape(best)}")
    return np.abs(A * cur + B * (best - cur))


def factors_from(theta, u, v):
    r = u * np.exp(theta * v)
    return r * np.cos(theta), r * np.sin(theta), r * theta


def spiral_factors(u: float, v: float, rng: np.random.Generator) -> tuple[float, float, float]:
    x, y, z = factors_from(rng.uniform(0.0, 2 * np.pi), u, v)
    return float(x), float(y), float(z)


def attack(ds, best, x, y, z):
    return ds * x * y * z + best


def soa_move(cur, best, A, B, theta, u=1.0, v=1.0):
    x, y, z = factors_from(theta, u, v)
    return attack(migrate(cur, best, A, B), best, x, y, z)


def draw_soa(n_agents: int, a_coef: float, rng: np.random.Generator) -> dict:
    """Per-agent randoms for one seagull update: B and the attack angle."""
    rd = rng.random(n_agents)
    return {
        "A": np.full(n_agents, a_coef),
        "B": 2.0 * a_coef**2 * rd,
        "theta": rng.uniform(0.0, 2 * np.pi, n_agents),
    }


def soa_step(cur, best, params: SoaParams, rng: np.random.Generator) -> np.ndarray:
    d = draw_soa(1, params.a_coef, rng)
    return soa_move(
        np.asarray(cur, dtype=float),
        np.asarray(best, dtype=float),
        d["A"][0],
        d["B"][0],
        d["theta"][0],
        params.u,
        params.v,
    )


def soa_update(positions: np.ndarray, bests: np.ndarray, draws: dict, u: float = 1.0, v: float = 1.0) -> np.ndarray:
    col = lambda key: draws[key][:, None]  # noqa: E731
    return soa_move(positions, bests, col("A"), col("B"), col("theta"), u, v)
