"""Slot-by-slot proportional-fair (PF) RB allocation for both operating modes.

Within a slot the RBs are visited in ascending order and each one goes to the
backlogged user with the largest ``rb_rate / ewma_rate``.  Inside a contiguous
run of RBs belonging to the same sub-band the weights do not change until the
winning user drains, so the engine advances one *stretch* at a time instead of
one RB at a time.  Exact ties fall back to a per-RB uniform draw.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    Chain,
    Mode,
    Reason,
    SlotAllocation,
    SystemConfig,
    UserState,
    band_map,
    canonical_sharer,
    rb_rate,
    subband,
)
from .traffic import TIE_BREAK_STREAM, RngStream, TrafficModel, draw_arrivals, user_streams

EWMA_FLOOR = 1e-6

_HYBRID, _ANALOG, _DIGITAL = int(Chain.HYBRID), int(Chain.ANALOG), int(Chain.DIGITAL)
_PREFERRED = int(Reason.DIGITAL_PREFERRED)
_NO_DATA, _PF_WEIGHT = int(Reason.ANALOG_NO_DIGITAL_DATA), int(Reason.ANALOG_PF_WEIGHT)


@dataclass
class RunMetrics:
    aggregate_rate: float
    per_user_rate: list[float]
    analog_rb_fraction: float
    analog_due_to_no_data_fraction: float
    unused_rb_fraction: float
    # bit accounting over the whole run, warmup included
    arrived_bits: float = 0.0
    dropped_bits: float = 0.0
    served_bits: float = 0.0
    backlog_bits: float = 0.0

    @property
    def num_users(self) -> int:
        return len(self.per_user_rate)

    @property
    def mean_user_rate(self) -> float:
        return self.aggregate_rate / self.num_users


@dataclass
class _Block:
    start: int
    end: int
    sharers: frozenset[int]   # 0-based indices of users whose sub-band covers the block


class SimulationState:
    """Mutable state of one run: queues, EWMA rates and random streams."""

    def __init__(self, config: SystemConfig, num_users: int):
        if num_users < 1:
            raise ValueError(f"need at least one user, got {num_users}")
        self.config = config
        self.num_users = num_users
        self.slot = 0
        self.queue = np.zeros(num_users)
        self.ewma = np.full(num_users, max(config.se_analog, EWMA_FLOOR))
        self.tie_rng = RngStream(config.seed, TIE_BREAK_STREAM)
        self.traffic_rngs = user_streams(config.seed, num_users)
        self.sharer = np.array([canonical_sharer(u, config.num_antennas)
                                for u in range(1, num_users + 1)])
        self.bands = band_map(config)
        self.blocks = self._build_blocks()

    def _build_blocks(self) -> list[_Block]:
        cfg = self.config
        if cfg.mode is Mode.HYBRID:
            return [_Block(0, cfg.num_rbs, frozenset())]
        blocks = []
        start = 0
        for r in range(1, cfg.num_rbs + 1):
            if r == cfg.num_rbs or self.bands[r] != self.bands[start]:
                band = self.bands[start]
                sharers = frozenset(int(i) for i in np.flatnonzero(self.sharer == band)) \
                    if band else frozenset()
                blocks.append(_Block(start, r, sharers))
                start = r
        return blocks

    @property
    def users(self) -> list[UserState]:
        het = self.config.mode is Mode.HETEROGENEOUS
        return [
            UserState(id=u, queue=float(self.queue[u - 1]), ewma_rate=float(self.ewma[u - 1]),
                      subband=subband(u, self.config) if het else ())
            for u in range(1, self.num_users + 1)
        ]

    def add_arrivals(self, arrivals) -> float:
        """Enqueue arrivals, clipping at the buffer capacity. Returns the dropped bits."""
        arrivals = np.asarray(arrivals, dtype=float)
        if arrivals.shape != self.queue.shape or np.any(arrivals < 0):
            raise ValueError("arrivals must be one non-negative value per user")
        total = self.queue + arrivals
        cap = self.config.buffer_capacity
        self.queue = np.minimum(total, cap)
        return float(np.sum(total - self.queue))


def pf_weight(r: int, u: int, state: SimulationState) -> float:
    c_u = state.ewma[u - 1]
    if c_u <= 0:
        raise ValueError(f"EWMA rate of user {u} must be positive, got {c_u}")
    return rb_rate(r, u, state.config) / c_u


def run_slot(state: SimulationState) -> SlotAllocation:
    """Allocate every RB of the current slot; queues are decremented in place.

    Arrivals must already have been added with :meth:`SimulationState.add_arrivals`.
    """
    cfg = state.config
    hybrid = cfg.mode is Mode.HYBRID
    alloc = SlotAllocation.empty(cfg.num_rbs)
    owner, chain, served, reason = alloc.owner, alloc.chain, alloc.served, alloc.reason
    queue = state.queue.tolist()
    inv = (1.0 / state.ewma).tolist()
    gen = state.tie_rng.generator
    # backlogged users by decreasing 1/C_u: the head is the best non-sharer candidate
    alive = sorted((i for i, q in enumerate(queue) if q > 0), key=lambda i: (-inv[i], i))
    c_other = cfg.se_hybrid if hybrid else cfg.se_analog
    c_share = cfg.se_digital

    for block in state.blocks:
        sharers = block.sharers
        pos = block.start
        while pos < block.end:
            if not alive:
                state.queue = np.asarray(queue)
                return alloc
            best = -1.0
            ties: list[int] = []
            head_inv = None
            for i in alive:
                if i in sharers:
                    continue
                if head_inv is None:
                    head_inv = inv[i]
                    best = c_other * head_inv
                elif inv[i] != head_inv:
                    break
                ties.append(i)
            for i in sharers:
                if queue[i] > 0:
                    w = c_share * inv[i]
                    if w > best:
                        best, ties = w, [i]
                    elif w == best:
                        ties.append(i)
            if len(ties) > 1:
                ties.sort()
                i = ties[int(gen.integers(len(ties)))]
                span = 1
            else:
                i = ties[0]
                span = block.end - pos
            digital = i in sharers
            c = c_share if digital else c_other
            q = queue[i]
            needed = math.ceil(q / c)
            n = min(needed, span)
            seg = slice(pos, pos + n)

            owner[seg] = i + 1
            served[seg] = c
            if n >= needed:
                served[pos + n - 1] = q - (n - 1) * c
                queue[i] = 0.0
                alive.remove(i)
            else:
                queue[i] = q - n * c

            if hybrid:
                chain[seg] = _HYBRID
            elif digital:
                chain[seg] = _DIGITAL
                reason[seg] = _PREFERRED
            else:
                chain[seg] = _ANALOG
                # the winner is not a sharer, so sharer queues are fixed over the stretch
                if any(queue[s] > 0 for s in sharers):
                    reason[seg] = _PF_WEIGHT
                else:
                    reason[seg] = _NO_DATA
            pos += n
    state.queue = np.asarray(queue)
    return alloc


def update_ewma(state: SimulationState, served) -> None:
    g = state.config.ewma_gamma
    state.ewma = np.maximum(g * state.ewma + (1.0 - g) * np.asarray(served, dtype=float),
                            EWMA_FLOOR)


def check_allocation(state: SimulationState, alloc: SlotAllocation) -> None:
    """Assert the per-slot legality rules of an allocation."""
    digital = alloc.chain == Chain.DIGITAL
    if digital.any():
        owners = alloc.owner[digital]
        assert np.all(state.bands[digital] == state.sharer[owners - 1]), \
            "digital chain used outside the owner's sub-band"
    used = alloc.chain != Chain.UNUSED
    rates = np.where(alloc.chain == Chain.DIGITAL, state.config.se_digital,
                     np.where(alloc.chain == Chain.HYBRID, state.config.se_hybrid,
                              state.config.se_analog))
    assert np.all(alloc.served[used] <= rates[used] + 1e-12), "RB over-served"
    assert np.all(alloc.served[~used] == 0), "unused RB carries data"


def run_simulation(config: SystemConfig, num_users: int, *, validate: bool = True) -> RunMetrics:
    """Run ``config.num_slots`` slots and average the metrics after warmup."""
    state = SimulationState(config, num_users)
    model = TrafficModel(config.traffic_rate)
    arrivals = np.column_stack([draw_arrivals(model, rng, config.num_slots)
                                for rng in state.traffic_rngs])

    measured = config.num_slots - config.warmup_slots
    served_user = np.zeros(num_users)
    analog = no_data = unused = 0
    arrived = float(arrivals.sum())
    dropped = served_total = 0.0

    for t in range(config.num_slots):
        state.slot = t
        dropped += state.add_arrivals(arrivals[t])
        alloc = run_slot(state)
        if validate:
            check_allocation(state, alloc)
        served = alloc.served_per_user(num_users)
        served_total += served.sum()
        update_ewma(state, served)
        if t >= config.warmup_slots:
            served_user += served
            is_analog = alloc.chain == Chain.ANALOG
            analog += int(is_analog.sum())
            no_data += int(np.sum(alloc.reason == Reason.ANALOG_NO_DIGITAL_DATA))
            unused += int(np.sum(alloc.chain == Chain.UNUSED))

    total_rbs = measured * config.num_rbs
    per_user = served_user / measured
    return RunMetrics(
        aggregate_rate=float(per_user.sum()),
        per_user_rate=per_user.tolist(),
        analog_rb_fraction=analog / total_rbs,
        analog_due_to_no_data_fraction=no_data / analog if analog else 1.0,
        unused_rb_fraction=unused / total_rbs,
        arrived_bits=arrived,
        dropped_bits=dropped,
        served_bits=float(served_total),
        backlog_bits=float(state.queue.sum()),
    )
