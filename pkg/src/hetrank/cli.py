"""Command-line entry point: ``hetrank simulate|estimate|bound|cost|codec``.

Exit codes: 0 on success, 2 for invalid configuration or arguments,
3 for failures while running.
"""

from __future__ import annotations

import argparse
import contextlib
import sys

from . import costmodel, signaling
from .core import ConfigError, SystemConfig
from .experiments import (
    BOUND_COLUMNS,
    ESTIMATE_COLUMNS,
    SIMULATE_COLUMNS,
    ExperimentSpec,
    bound_rows,
    estimate_rows,
    parse_floats,
    parse_modes,
    parse_users,
    read_config_file,
    simulate_rows,
    write_csv,
)

EXIT_OK, EXIT_CONFIG, EXIT_RUNTIME = 0, 2, 3


def build_spec(args) -> ExperimentSpec:
    system, spec = read_config_file(args.config) if args.config else ({}, {})
    if args.seed is not None:
        system["seed"] = args.seed
    base = SystemConfig.reference(**system)
    if args.users:
        spec["users"] = parse_users(args.users)
    if args.lambdas:
        spec["lambdas"] = parse_floats(args.lambdas)
    if getattr(args, "mode", None):
        spec["modes"] = parse_modes(args.mode)
    if getattr(args, "reps", None) is not None:
        spec["repetitions"] = args.reps
    if args.out:
        spec["out"] = args.out
    if "lambdas" not in spec:
        spec["lambdas"] = [base.traffic_rate]
    return ExperimentSpec(base=base, **spec)


@contextlib.contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_simulate(args) -> int:
    spec = build_spec(args)
    rows = simulate_rows(spec)
    with _output(spec.out) as fh:
        write_csv(rows, SIMULATE_COLUMNS, fh)
    return EXIT_OK


def cmd_estimate(args) -> int:
    spec = build_spec(args)
    with _output(spec.out) as fh:
        write_csv(estimate_rows(spec), ESTIMATE_COLUMNS, fh)
    return EXIT_OK


def cmd_bound(args) -> int:
    spec = build_spec(args)
    with _output(spec.out) as fh:
        write_csv(bound_rows(spec), BOUND_COLUMNS, fh)
    return EXIT_OK


def cmd_cost(args) -> int:
    try:
        catalog = costmodel.load_catalog(args.catalog)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    text = costmodel.report(args.antennas, args.chains, catalog,
                            sample_rate=args.sample_rate, resolution=args.resolution)
    with _output(args.out) as fh:
        print(text, file=fh)
    return EXIT_OK


# ---------------------------------------------------------------- codec

def _int(text: str) -> int:
    return int(text, 0)


def _fields(tokens: list[str]) -> dict[str, int]:
    out = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep:
            raise ConfigError(f"expected key=value, got {tok!r}")
        out[key.strip()] = _int(value)
    return out


def _encode(kind: str, tokens: list[str]) -> bytes:
    if kind == "abcap":
        caps = []
        for tok in tokens:
            parts = tok.split(":")
            if len(parts) != 3:
                raise ConfigError(f"ABCap entry must be fix:tradable:mask, got {tok!r}")
            caps.append(signaling.ABCap(*(_int(p) for p in parts)))
        return signaling.encode_abcap_list(caps)
    f = _fields(tokens)
    if kind == "bwp":
        return signaling.encode_bwp_tradchain(signaling.BwpTradchain(**f))
    if "port_width" in f:
        f["dmrs_config"] = signaling.DmrsConfig.for_width(f.pop("port_width"))
    return signaling.encode_dci_ext(signaling.DciHetExt(**f))


def _describe(kind: str, data: bytes) -> list[str]:
    if kind == "abcap":
        caps = signaling.decode_abcap_list(data)
        lines = [f"count={len(caps)}"]
        for cap in caps:
            opts = " ".join(f"{a}ant/{d}bw" for a, d in signaling.tradcap_options(cap.tradcapab))
            lines.append(f"num_fix_analog_chains={cap.num_fix_analog_chains} "
                         f"num_tradable_chains={cap.num_tradable_chains} "
                         f"tradcapab={cap.tradcapab:#04x} options=[{opts}]")
        return lines
    if kind == "bwp":
        m = signaling.decode_bwp_tradchain(data)
        return [f"start_rb={m.start_rb} num_rb={m.num_rb} tradcapuse={m.tradcapuse:#04x} "
                f"num_trade_chains={m.num_trade_chains}"]
    m = signaling.decode_dci_ext(data)
    return [f"mcs_digital={m.mcs_digital} port_width={m.dmrs_config.width} "
            f"antenna_ports_digital={m.antenna_ports_digital}"]


def cmd_codec(args) -> int:
    try:
        if args.action == "encode":
            print(_encode(args.message, args.values).hex())
        else:
            try:
                data = bytes.fromhex("".join(args.values))
            except ValueError:
                raise ConfigError("decode expects hexadecimal bytes") from None
            print("\n".join(_describe(args.message, data)))
    except (signaling.CodecError, TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    return EXIT_OK


# ---------------------------------------------------------------- parser

def _sweep_args(p: argparse.ArgumentParser, *, modes: bool) -> None:
    p.add_argument("--config", help="file of 'key = value' lines")
    p.add_argument("--out", help="output CSV path (default: stdout)")
    p.add_argument("--users", help="user counts, e.g. 1..50 or 1,2,8")
    p.add_argument("--lambda", dest="lambdas", help="traffic rates, e.g. 50,100,500")
    p.add_argument("--seed", type=int, help="base seed; repetition k uses seed+k")
    if modes:
        p.add_argument("--mode", help="hybrid, het or both")
        p.add_argument("--reps", type=int, help="independent seeds per point")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hetrank", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run the PF scheduler over a parameter sweep")
    _sweep_args(p, modes=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", help="closed-form throughput estimate")
    _sweep_args(p, modes=False)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("bound", help="maximum achievable aggregate rate")
    _sweep_args(p, modes=False)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("cost", help="component count, power and cost tables")
    p.add_argument("--catalog", help="component catalog CSV (default: bundled)")
    p.add_argument("--antennas", type=int, default=32)
    p.add_argument("--chains", type=int, default=2)
    p.add_argument("--sample-rate", type=float, default=500e6)
    p.add_argument("--resolution", type=int, default=12)
    p.add_argument("--out")
    p.set_defaults(func=cmd_cost)

    p = sub.add_parser("codec", help="encode or decode signaling messages")
    p.add_argument("action", choices=("encode", "decode"))
    p.add_argument("message", choices=("abcap", "bwp", "dci"))
    p.add_argument("values", nargs="+",
                   help="encode: abcap fix:tradable:mask ..., bwp/dci key=value ...; "
                        "decode: hex bytes")
    p.set_defaults(func=cmd_codec)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"hetrank: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # noqa: BLE001 - report and map to the runtime exit code
        print(f"hetrank: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
