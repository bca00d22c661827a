"""Closed-form models of the heterogeneous-rank system.

* Irwin-Hall CDF and the CDF of aggregated per-sub-band traffic.
* Expected number of digitally-served RBs per sub-band and the resulting
  throughput estimate.
* The piecewise maximum spectral efficiency / rate bound and its crossover.
* The ADC sample-efficiency metric on an explicit resource grid.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import SystemConfig, alpha, canonical_sharer

IRWIN_HALL_MAX_N = 30


def irwin_hall_cdf(x: float, n: int) -> float:
    """P[U_1 + ... + U_n <= x] for i.i.d. U_i ~ Uniform(0, 1).

    Evaluates the alternating sum ``sum_k (-1)^k C(n, k) (x - k)^n / n!`` in
    exact rational arithmetic: in doubles the cancellation already breaks
    monotonicity in the upper tail for n around 25.  Capped at 30 terms.
    """
    if n < 1:
        raise ValueError(f"Irwin-Hall parameter must be >= 1, got {n}")
    if n > IRWIN_HALL_MAX_N:
        raise ValueError(f"Irwin-Hall CDF supports n <= {IRWIN_HALL_MAX_N}, got {n}")
    if x <= 0:
        return 0.0
    if x >= n:
        return 1.0
    fx = Fraction(x)
    total = sum((-1) ** k * math.comb(n, k) * (fx - k) ** n for k in range(math.floor(x) + 1))
    return min(1.0, max(0.0, float(total / math.factorial(n))))


def traffic_sum_cdf(a: float, n: int, rate: float) -> float:
    """CDF at ``a`` bits of the sum of ``n`` arrivals, each uniform on [0, 2*rate]."""
    if rate <= 0:
        raise ValueError(f"traffic rate must be > 0, got {rate}")
    if n == 0:
        return 1.0 if a >= 0 else 0.0
    return irwin_hall_cdf(a / (2.0 * rate), n)


def expected_digital_rbs(n_sharing: int, config: SystemConfig) -> float:
    """Expected count of sub-band RBs served digitally, given ``n_sharing`` users on it."""
    if n_sharing == 0:
        return 0.0
    a = alpha(config)
    c_d = config.se_digital

    def F(v):
        return traffic_sum_cdf(v, n_sharing, config.traffic_rate)

    expectation = sum(h * (F(h * c_d) - F((h - 1) * c_d)) for h in range(1, a))
    return expectation + a * (1.0 - F((a - 1) * c_d))


def sharing_counts(num_users: int, num_antennas: int) -> list[int]:
    """Users assigned to each sub-band 1..N (index 0 is sub-band 1)."""
    counts = [0] * num_antennas
    for u in range(1, num_users + 1):
        counts[canonical_sharer(u, num_antennas) - 1] += 1
    return counts


@dataclass(frozen=True)
class EstimateInputs:
    config: SystemConfig
    num_users: int


def throughput_estimate(inputs: EstimateInputs) -> float:
    """Aggregate bits per slot predicted from the per-sub-band digital RB counts,
    capped by the mean offered load."""
    cfg = inputs.config
    if inputs.num_users < 1:
        raise ValueError(f"need at least one user, got {inputs.num_users}")
    a = alpha(cfg)
    # identical sharing counts give identical terms; evaluate each once
    cache: dict[int, float] = {}
    capacity = 0.0
    for n in sharing_counts(inputs.num_users, cfg.num_antennas):
        if n not in cache:
            cache[n] = expected_digital_rbs(n, cfg)
        x = cache[n]
        capacity += x * cfg.se_digital + (a - x) * cfg.se_analog
    offered = inputs.num_users * cfg.traffic_rate
    return min(offered, capacity)


def zeta_d(num_users: int, num_antennas: int) -> float:
    """Fraction of the band covered by at least one digital sub-band."""
    if num_antennas < 1:
        raise ValueError("num_antennas must be >= 1")
    return min(1.0, num_users / num_antennas)


def hybrid_crossover(config: SystemConfig) -> float:
    """User count below which hybrid mode beats the heterogeneous bound."""
    spread = config.se_digital - config.se_analog
    if spread == 0:
        raise ValueError("crossover undefined when C_D == C_A")
    return config.num_antennas * (config.se_hybrid - config.se_analog) / spread


def max_se(num_users: float, config: SystemConfig) -> float:
    """Maximum achievable average spectral efficiency for ``num_users`` users.

    Equal to the larger of the hybrid level C_H and the heterogeneous level
    C_A + zeta_D (C_D - C_A); the branches meet at the crossover and at N, so
    boundary points are well defined.
    """
    het = config.se_analog + zeta_d(num_users, config.num_antennas) * (
        config.se_digital - config.se_analog)
    return max(config.se_hybrid, het)


def max_rate(num_users: float, config: SystemConfig) -> float:
    return config.num_rbs * max_se(num_users, config)


class Architecture(enum.Enum):
    CLASSICAL_HYBRID = "classical"
    PROPOSED = "proposed"


@dataclass
class EfficiencyGrid:
    """Slots x RBs ownership grid (0 = unallocated) seen by one target user."""

    owners: np.ndarray
    target: int
    subband: tuple[int, ...] = ()
    architecture: Architecture = Architecture.CLASSICAL_HYBRID

    def __post_init__(self):
        self.owners = np.asarray(self.owners)
        if self.owners.ndim != 2:
            raise ValueError("owners must be a slots x RBs matrix")
        num_rbs = self.owners.shape[1]
        if any(not 0 <= r < num_rbs for r in self.subband):
            raise ValueError(f"sub-band indices must lie in 0..{num_rbs - 1}")


def sample_efficiency(grid: EfficiencyGrid) -> float:
    """Percentage of digitised RB-slots that carry the target user's data.

    The proposed architecture averages the waste of its two chains: the analog
    chain digitises the whole grid, the digital chain only the sub-band.
    """
    own = grid.owners == grid.target
    total = own.size
    classical = 100.0 * own.sum() / total
    if grid.architecture is Architecture.CLASSICAL_HYBRID:
        return classical
    if not grid.subband:
        raise ValueError("proposed architecture needs a non-empty digital sub-band")
    band = list(grid.subband)
    in_band = own[:, band].sum()
    waste_analog = 100.0 - classical
    waste_digital = 100.0 * (1.0 - in_band / (len(band) * own.shape[0]))
    return 100.0 - (waste_analog + waste_digital) / 2.0


def _grid_from_cells(cells: dict[int, list[tuple[int, int]]], slots=15, rbs=10) -> np.ndarray:
    owners = np.zeros((slots, rbs), dtype=int)
    for user, coords in cells.items():
        for t, r in coords:
            owners[t, r] = user
    return owners


def _pairs(slots, rbs):
    return [(t, r) for t in slots for r in rbs]


def scattered_example_grid() -> np.ndarray:
    """15-slot x 10-RB example where every user's data wanders across the band."""
    user1 = (_pairs([0, 1, 3], [4, 5]) + [(2, 5)] + _pairs([4, 5, 6], [2, 3]) + [(7, 3)]
             + _pairs(range(8, 15), [8, 9]))
    user2 = (_pairs(range(0, 4), [0, 1]) + _pairs(range(4, 15), [6, 7]))
    user3 = (_pairs([0, 1], [8, 9]) + [(2, 8), (3, 8)] + _pairs(range(4, 8), [4, 5])
             + _pairs([8, 9, 10], [0, 1]) + _pairs(range(11, 15), [0]))
    return _grid_from_cells({2: user2, 3: user3, 1: user1})


def subband_example_grid() -> np.ndarray:
    """Same traffic as :func:`scattered_example_grid`, rescheduled so user 1 sits
    in RBs 4-5, user 2 in RBs 0-1 and user 3 in RBs 8-9."""
    user1 = [(t, r) for t in range(15) for r in (4, 5) if (t, r) not in {(2, 4), (7, 4)}]
    user2 = _pairs(range(15), [0, 1])
    user3 = (_pairs([0, 1], [8, 9]) + [(2, 8), (3, 8)] + _pairs(range(4, 11), [8, 9])
             + _pairs(range(11, 15), [9]))
    return _grid_from_cells({2: user2, 3: user3, 1: user1})
