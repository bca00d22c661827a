"""Domain types and sub-band arithmetic shared by the scheduler and analytics.

Resource blocks (RBs) are indexed from 0 and normalised to 1 Hz x 1 s, so the
capacity of an RB equals the spectral efficiency of the chain serving it.
Users are indexed from 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np


class ConfigError(ValueError):
    """Raised when a configuration violates a structural invariant."""


class Mode(enum.Enum):
    HYBRID = "hybrid"
    HETEROGENEOUS = "het"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        key = text.strip().lower()
        aliases = {"hybrid": cls.HYBRID, "het": cls.HETEROGENEOUS,
                   "heterogeneous": cls.HETEROGENEOUS}
        if key not in aliases:
            raise ConfigError(f"unknown mode {text!r} (expected hybrid|het)")
        return aliases[key]


class Chain(enum.IntEnum):
    UNUSED = 0
    ANALOG = 1
    DIGITAL = 2
    HYBRID = 3


class Reason(enum.IntEnum):
    NONE = 0
    DIGITAL_PREFERRED = 1
    ANALOG_NO_DIGITAL_DATA = 2
    ANALOG_PF_WEIGHT = 3


@dataclass(frozen=True)
class SystemConfig:
    """Scenario parameters. Defaults reproduce the reference scenario
    (640 RBs, 32 antennas, C_A=1, C_H=1.5, C_D=4, 1000-bit buffers)."""

    num_rbs: int = 640
    num_antennas: int = 32
    se_analog: float = 1.0
    se_digital: float = 4.0
    se_hybrid: float = 1.5
    traffic_rate: float = 500.0
    buffer_capacity: float = 1000.0
    ewma_gamma: float = 0.9
    num_slots: int = 2000
    warmup_slots: int = 200
    seed: int = 0
    mode: Mode = Mode.HETEROGENEOUS
    subband_shift: int = 0

    def __post_init__(self):
        if isinstance(self.mode, str):
            object.__setattr__(self, "mode", Mode.parse(self.mode))
        if self.num_antennas < 1 or self.num_rbs < self.num_antennas:
            raise ConfigError(
                f"need num_rbs >= num_antennas >= 1, got R={self.num_rbs}, N={self.num_antennas}")
        if not (0 < self.se_analog <= self.se_hybrid <= self.se_digital):
            raise ConfigError(
                "spectral efficiencies must satisfy 0 < C_A <= C_H <= C_D, got "
                f"C_A={self.se_analog}, C_H={self.se_hybrid}, C_D={self.se_digital}")
        if self.traffic_rate < 0:
            raise ConfigError(f"traffic_rate must be >= 0, got {self.traffic_rate}")
        if self.buffer_capacity <= 0:
            raise ConfigError(f"buffer_capacity must be > 0, got {self.buffer_capacity}")
        if not 0.0 < self.ewma_gamma < 1.0:
            raise ConfigError(f"ewma_gamma must lie in (0, 1), got {self.ewma_gamma}")
        if self.num_slots < 1 or not 0 <= self.warmup_slots < self.num_slots:
            raise ConfigError(
                f"need 0 <= warmup_slots < num_slots, got {self.warmup_slots}/{self.num_slots}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")

    def with_(self, **changes) -> "SystemConfig":
        return replace(self, **changes)

    @classmethod
    def reference(cls, **overrides) -> "SystemConfig":
        """Reference scenario with the sub-band grid rotated so user 1 starts at RB 0.

        With the unrotated grid the first alpha RBs belong to user N, so for
        U < N they carry analog traffic only and the low-load analog share
        and unused-RB curves shift accordingly.
        """
        overrides.setdefault("subband_shift", -1)
        return cls(**overrides)


@dataclass
class UserState:
    id: int
    queue: float
    ewma_rate: float
    subband: tuple[int, ...] = ()


@dataclass
class SlotAllocation:
    """Per-RB outcome of one slot, stored column-wise.

    ``owner[r]`` is the served user id (0 when the RB is unused); ``chain``
    and ``reason`` hold :class:`Chain` / :class:`Reason` codes.
    """

    owner: np.ndarray
    chain: np.ndarray
    served: np.ndarray
    reason: np.ndarray

    @classmethod
    def empty(cls, num_rbs: int) -> "SlotAllocation":
        return cls(
            owner=np.zeros(num_rbs, dtype=np.int64),
            chain=np.zeros(num_rbs, dtype=np.int8),
            served=np.zeros(num_rbs, dtype=np.float64),
            reason=np.zeros(num_rbs, dtype=np.int8),
        )

    def __len__(self) -> int:
        return len(self.owner)

    def entry(self, r: int):
        """Return ``None`` for an unused RB, else ``(user, Chain, bits, Reason)``."""
        if self.chain[r] == Chain.UNUSED:
            return None
        return (int(self.owner[r]), Chain(int(self.chain[r])), float(self.served[r]),
                Reason(int(self.reason[r])))

    def served_per_user(self, num_users: int) -> np.ndarray:
        out = np.zeros(num_users + 1)
        np.add.at(out, self.owner, self.served)
        return out[1:]


def alpha(config: SystemConfig) -> int:
    """Width of every digital sub-band, in RBs."""
    return config.num_rbs // config.num_antennas


def canonical_sharer(u: int, num_antennas: int) -> int:
    """Index in 1..N of the sub-band user ``u`` shares."""
    return (u - 1) % num_antennas + 1


def subband(u: int, config: SystemConfig) -> tuple[int, ...]:
    """RBs on which user ``u`` runs its digital chain (ascending order of the formula)."""
    if u < 1:
        raise ValueError(f"user ids start at 1, got {u}")
    a = alpha(config)
    start = (canonical_sharer(u, config.num_antennas) + config.subband_shift) * a
    return tuple((start + i) % config.num_rbs for i in range(a))


def users_on_rb(r: int, num_users: int, config: SystemConfig) -> frozenset[int]:
    """Users among 1..num_users whose digital sub-band contains RB ``r``."""
    if not 0 <= r < config.num_rbs:
        raise ValueError(f"RB index {r} outside 0..{config.num_rbs - 1}")
    band = band_map(config)[r]
    if band == 0:
        return frozenset()
    return frozenset(range(band, num_users + 1, config.num_antennas))


def band_map(config: SystemConfig) -> np.ndarray:
    """Sub-band index (1..N) owning each RB, 0 for RBs outside every sub-band."""
    bands = np.zeros(config.num_rbs, dtype=np.int64)
    for u in range(1, config.num_antennas + 1):
        bands[list(subband(u, config))] = u
    return bands


def rb_rate(r: int, u: int, config: SystemConfig) -> float:
    """Bits carried by RB ``r`` when served to user ``u``."""
    if config.mode is Mode.HYBRID:
        return config.se_hybrid
    return config.se_digital if r in subband(u, config) else config.se_analog
