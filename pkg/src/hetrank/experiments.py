"""Parameter sweeps over (mode, traffic rate, user count, seed) and their CSV I/O."""

from __future__ import annotations

import csv
import dataclasses
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .analytics import EstimateInputs, max_rate, throughput_estimate
from .core import ConfigError, Mode, SystemConfig
from .scheduler import run_simulation

SIMULATE_COLUMNS = ("mode", "lambda", "num_users", "seed", "aggregate_rate", "mean_user_rate",
                    "analog_fraction", "analog_no_data_fraction", "unused_fraction")
ESTIMATE_COLUMNS = ("lambda", "num_users", "estimate")
BOUND_COLUMNS = ("num_users", "max_rate")

THREADS_ENV = "HETRANK_THREADS"


@dataclass
class ExperimentSpec:
    base: SystemConfig = field(default_factory=SystemConfig.reference)
    users: list[int] = field(default_factory=lambda: list(range(1, 51)))
    lambdas: list[float] = field(default_factory=lambda: [500.0])
    modes: list[Mode] = field(default_factory=lambda: [Mode.HETEROGENEOUS, Mode.HYBRID])
    repetitions: int = 1
    out: str | None = None

    def __post_init__(self):
        if not self.users or not self.lambdas or not self.modes:
            raise ConfigError("users, lambdas and modes must all be non-empty")
        if min(self.users) < 1:
            raise ConfigError("user counts must be >= 1")
        if self.repetitions < 1:
            raise ConfigError("repetitions must be >= 1")


# ---------------------------------------------------------------- parsing

def parse_users(text: str) -> list[int]:
    """``"1..50"``, ``"1,2,8"`` or a mix such as ``"1..5,10"``."""
    users: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = part.split("..")
                users.extend(range(int(lo), int(hi) + 1))
            elif part:
                users.append(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse user list {text!r}") from None
    if not users:
        raise ConfigError(f"empty user list {text!r}")
    return users


def parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


def parse_modes(text: str) -> list[Mode]:
    if text.strip().lower() == "both":
        return [Mode.HETEROGENEOUS, Mode.HYBRID]
    return [Mode.parse(t) for t in text.split(",") if t.strip()]


_CONFIG_FIELDS = {f.name: f.type for f in dataclasses.fields(SystemConfig)}
_SPEC_PARSERS = {"users": parse_users, "lambdas": parse_floats, "modes": parse_modes,
                 "repetitions": int, "out": str}


def _convert(key: str, raw: str):
    kind = _CONFIG_FIELDS[key]
    if key == "mode":
        return Mode.parse(raw)
    if kind in ("int", int):
        return int(raw, 0)
    return float(raw)


def read_config_file(path: str | Path) -> tuple[dict, dict]:
    """Parse ``key = value`` lines into (SystemConfig kwargs, ExperimentSpec kwargs)."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    system, spec = {}, {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        if not sep or not value:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        try:
            if key in _CONFIG_FIELDS:
                system[key] = _convert(key, value)
            elif key in _SPEC_PARSERS:
                spec[key] = _SPEC_PARSERS[key](value)
            else:
                raise ConfigError(f"unknown key {key!r}")
        except (ValueError, ConfigError) as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from None
    return system, spec


# ---------------------------------------------------------------- sweeps

def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    cap = os.cpu_count() or 1
    if raw:
        try:
            cap = max(1, min(cap, int(raw)))
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return cap


def _simulate_point(args) -> dict:
    config, num_users = args
    m = run_simulation(config, num_users)
    return {
        "mode": config.mode.value,
        "lambda": config.traffic_rate,
        "num_users": num_users,
        "seed": config.seed,
        "aggregate_rate": m.aggregate_rate,
        "mean_user_rate": m.mean_user_rate,
        "analog_fraction": m.analog_rb_fraction,
        "analog_no_data_fraction": m.analog_due_to_no_data_fraction,
        "unused_fraction": m.unused_rb_fraction,
    }


def simulate_rows(spec: ExperimentSpec) -> list[dict]:
    points = [
        (spec.base.with_(mode=mode, traffic_rate=lam, seed=spec.base.seed + rep), u)
        for mode in spec.modes for lam in spec.lambdas
        for u in spec.users for rep in range(spec.repetitions)
    ]
    workers = min(_threads(), len(points))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_simulate_point, points))
    else:
        rows = [_simulate_point(p) for p in points]
    return sorted(rows, key=lambda r: (r["mode"], r["lambda"], r["num_users"], r["seed"]))


def estimate_rows(spec: ExperimentSpec) -> list[dict]:
    rows = []
    for lam in sorted(spec.lambdas):
        config = spec.base.with_(traffic_rate=lam)
        for u in sorted(spec.users):
            rows.append({"lambda": lam, "num_users": u,
                         "estimate": throughput_estimate(EstimateInputs(config, u))})
    return rows


def bound_rows(spec: ExperimentSpec) -> list[dict]:
    return [{"num_users": u, "max_rate": max_rate(u, spec.base)} for u in sorted(spec.users)]


# ---------------------------------------------------------------- CSV

def format_value(value) -> str:
    """Shortest text that parses back to the same value."""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: list[dict], columns, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row[c]) for c in columns])


_INT_COLUMNS = {"num_users", "seed"}
_TEXT_COLUMNS = {"mode"}


def read_csv(stream) -> list[dict]:
    rows = []
    for raw in csv.DictReader(stream):
        row = {}
        for key, value in raw.items():
            if key in _TEXT_COLUMNS:
                row[key] = value
            elif key in _INT_COLUMNS:
                row[key] = int(value)
            else:
                row[key] = float(value)
        rows.append(row)
    return rows
