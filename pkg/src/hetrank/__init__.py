"""PF scheduling, closed-form models, cost tables and signaling codecs for
receivers that mix a wideband analog chain with narrowband digital chains."""

from .core import (
    Chain,
    ConfigError,
    Mode,
    Reason,
    SlotAllocation,
    SystemConfig,
    UserState,
    alpha,
    band_map,
    canonical_sharer,
    rb_rate,
    subband,
    users_on_rb,
)
from .scheduler import RunMetrics, SimulationState, run_simulation, run_slot
from .traffic import RngStream, TrafficModel, draw_arrival

__all__ = [
    "Chain", "ConfigError", "Mode", "Reason", "SlotAllocation", "SystemConfig", "UserState",
    "alpha", "band_map", "canonical_sharer", "rb_rate", "subband", "users_on_rb",
    "RunMetrics", "SimulationState", "run_simulation", "run_slot",
    "RngStream", "TrafficModel", "draw_arrival",
]
