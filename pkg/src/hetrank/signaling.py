"""Canonical binary encoding of the rank/bandwidth trade-off signaling.

Three messages are covered:

``ABCap`` list (capability report)
    1 count byte, then per entry one byte packing ``num_fix_analog_chains``
    (high nibble) and ``num_tradable_chains`` (low nibble), then the 8-bit
    ``tradcapab`` mask.
``BWP-Tradchain`` (configuration)
    ``start_rb`` and ``num_rb`` as big-endian uint16, then ``tradcapuse`` and
    ``num_trade_chains`` as one byte each.
DCI extension
    MSB-first bit string: 5-bit digital MCS, 2-bit DMRS configuration code
    (00 -> 4, 01 -> 5, 10 -> 6 port bits), the antenna-port field, zero padding
    to a byte boundary.

Bit ``b`` of a trade-off mask means "acquire 2**(b+1) antennas over
1/2**(b+1) of the analog bandwidth".  Decoders accept only canonical input:
anything whose re-encoding would differ is rejected with :class:`CodecError`.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

MAX_ABCAP_ENTRIES = 255


class CodecError(ValueError):
    pass


def _check_range(name: str, value: int, lo: int, hi: int) -> None:
    if not isinstance(value, int) or not lo <= value <= hi:
        raise CodecError(f"{name}={value!r} outside {lo}..{hi}")


@dataclass(frozen=True)
class ABCap:
    num_fix_analog_chains: int
    num_tradable_chains: int
    tradcapab: int

    def __post_init__(self):
        _check_range("num_fix_analog_chains", self.num_fix_analog_chains, 0, 15)
        _check_range("num_tradable_chains", self.num_tradable_chains, 0, 15)
        _check_range("tradcapab", self.tradcapab, 0, 0xFF)


@dataclass(frozen=True)
class BwpTradchain:
    start_rb: int
    num_rb: int
    tradcapuse: int
    num_trade_chains: int

    def __post_init__(self):
        _check_range("start_rb", self.start_rb, 0, 0xFFFF)
        _check_range("num_rb", self.num_rb, 1, 0xFFFF)
        _check_range("tradcapuse", self.tradcapuse, 0, 0xFF)
        _check_range("num_trade_chains", self.num_trade_chains, 1, 0xFF)
        if bin(self.tradcapuse).count("1") != 1:
            raise CodecError(f"tradcapuse must select exactly one trade-off, got {self.tradcapuse:#010b}")


class DmrsConfig(enum.IntEnum):
    PORTS_4 = 0
    PORTS_5 = 1
    PORTS_6 = 2

    @property
    def width(self) -> int:
        return 4 + int(self)

    @classmethod
    def for_width(cls, width: int) -> "DmrsConfig":
        try:
            return cls(width - 4)
        except ValueError:
            raise CodecError(f"antenna-port field width must be 4, 5 or 6, got {width}") from None


@dataclass(frozen=True)
class DciHetExt:
    mcs_digital: int
    dmrs_config: DmrsConfig
    antenna_ports_digital: int

    def __post_init__(self):
        _check_range("mcs_digital", self.mcs_digital, 0, 31)
        object.__setattr__(self, "dmrs_config", DmrsConfig(self.dmrs_config))
        _check_range("antenna_ports_digital", self.antenna_ports_digital, 0,
                     (1 << self.dmrs_config.width) - 1)


def tradcap_options(mask: int) -> list[tuple[int, int]]:
    """``(antennas, bandwidth divisor)`` for every trade-off enabled in ``mask``."""
    _check_range("mask", mask, 0, 0xFF)
    return [(2 ** (b + 1), 2 ** (b + 1)) for b in range(8) if mask >> b & 1]


def encode_abcap_list(caps: list[ABCap]) -> bytes:
    if len(caps) > MAX_ABCAP_ENTRIES:
        raise CodecError(f"at most {MAX_ABCAP_ENTRIES} ABCap entries, got {len(caps)}")
    out = bytearray([len(caps)])
    for cap in caps:
        out.append(cap.num_fix_analog_chains << 4 | cap.num_tradable_chains)
        out.append(cap.tradcapab)
    return bytes(out)


def decode_abcap_list(data: bytes) -> list[ABCap]:
    if not data:
        raise CodecError("truncated ABCap list: missing count byte")
    count = data[0]
    expected = 1 + 2 * count
    if len(data) < expected:
        raise CodecError(f"truncated ABCap list: need {expected} bytes, got {len(data)}")
    if len(data) > expected:
        raise CodecError(f"{len(data) - expected} trailing bytes after ABCap list")
    return [ABCap(data[i] >> 4, data[i] & 0x0F, data[i + 1]) for i in range(1, expected, 2)]


_BWP = struct.Struct(">HHBB")


def encode_bwp_tradchain(msg: BwpTradchain) -> bytes:
    return _BWP.pack(msg.start_rb, msg.num_rb, msg.tradcapuse, msg.num_trade_chains)


def decode_bwp_tradchain(data: bytes) -> BwpTradchain:
    if len(data) != _BWP.size:
        raise CodecError(f"BWP-Tradchain is {_BWP.size} bytes, got {len(data)}")
    return BwpTradchain(*_BWP.unpack(data))


def encode_dci_ext(msg: DciHetExt) -> bytes:
    width = msg.dmrs_config.width
    nbits = 5 + 2 + width
    value = (msg.mcs_digital << (2 + width)) | (int(msg.dmrs_config) << width) | msg.antenna_ports_digital
    nbytes = (nbits + 7) // 8
    return (value << (8 * nbytes - nbits)).to_bytes(nbytes, "big")


def decode_dci_ext(data: bytes) -> DciHetExt:
    # every legal width gives 11..13 bits, i.e. two bytes
    if len(data) != 2:
        raise CodecError(f"DCI extension is 2 bytes, got {len(data)}")
    value = int.from_bytes(data, "big")
    mcs = value >> 11
    code = (value >> 9) & 0b11
    if code == 0b11:
        raise CodecError("DMRS configuration code 0b11 is reserved")
    width = DmrsConfig(code).width
    pad = 16 - 7 - width
    if value & ((1 << pad) - 1):
        raise CodecError("non-zero padding bits in DCI extension")
    ports = (value >> pad) & ((1 << width) - 1)
    return DciHetExt(mcs, DmrsConfig(code), ports)
