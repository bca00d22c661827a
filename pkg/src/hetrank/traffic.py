"""Seeded per-user traffic generation.

Every user owns an independent random stream derived from ``(seed, user id)``,
so growing the user population never perturbs the arrivals of existing users.
Stream id 0 is reserved for the scheduler's tie-breaking.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

TIE_BREAK_STREAM = 0


class TrafficKind(enum.Enum):
    UNIFORM_DOUBLE_MEAN = "uniform"


@dataclass(frozen=True)
class TrafficModel:
    """Per-slot arrivals uniform on ``[0, 2 * rate]`` bits."""

    rate: float
    kind: TrafficKind = TrafficKind.UNIFORM_DOUBLE_MEAN

    def __post_init__(self):
        if self.rate < 0:
            raise ValueError(f"traffic rate must be >= 0, got {self.rate}")

    @property
    def variance(self) -> float:
        return (2.0 * self.rate) ** 2 / 12.0


class RngStream:
    """A reproducible random stream keyed by a 64-bit seed and a 64-bit stream id."""

    def __init__(self, seed: int, stream_id: int):
        if not 0 <= seed < 2**64 or not 0 <= stream_id < 2**64:
            raise ValueError("seed and stream id must be 64-bit unsigned integers")
        self.seed = seed
        self.stream_id = stream_id
        self.generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([seed, stream_id])))

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"


def draw_arrival(model: TrafficModel, rng: RngStream) -> float:
    """Draw one slot's worth of arriving bits."""
    if model.rate == 0:
        return 0.0
    return float(rng.generator.uniform(0.0, 2.0 * model.rate))


def draw_arrivals(model: TrafficModel, rng: RngStream, size: int) -> np.ndarray:
    """Draw ``size`` consecutive arrivals; identical to ``size`` calls of :func:`draw_arrival`."""
    if model.rate == 0:
        return np.zeros(size)
    return rng.generator.uniform(0.0, 2.0 * model.rate, size=size)


def user_streams(seed: int, num_users: int) -> list[RngStream]:
    """Traffic streams for users 1..num_users."""
    return [RngStream(seed, u) for u in range(1, num_users + 1)]
