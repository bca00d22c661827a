import random

import pytest
from hypothesis import given, settings, strategies as st

from hetrank.signaling import (
    ABCap,
    BwpTradchain,
    CodecError,
    DciHetExt,
    DmrsConfig,
    decode_abcap_list,
    decode_bwp_tradchain,
    decode_dci_ext,
    encode_abcap_list,
    encode_bwp_tradchain,
    encode_dci_ext,
    tradcap_options,
)

ROUND_TRIPS = 10_000


def test_abcap_examples():
    assert encode_abcap_list([ABCap(2, 1, 0b00010000)]) == bytes([0x01, 0x21, 0x10])
    assert encode_abcap_list([]) == bytes([0x00])
    with pytest.raises(CodecError):
        decode_abcap_list(bytes([0x01, 0x21]))
    with pytest.raises(CodecError):
        decode_abcap_list(bytes([0x01, 0x21, 0x10, 0x00]))
    with pytest.raises(CodecError):
        decode_abcap_list(b"")
    with pytest.raises(CodecError):
        ABCap(16, 0, 0)


def test_tradcap_options():
    assert tradcap_options(0b00010000) == [(32, 32)]
    assert tradcap_options(0) == []
    assert tradcap_options(0b11) == [(2, 2), (4, 4)]
    ants = [a for a, _ in tradcap_options(0xFF)]
    assert ants == sorted(set(ants))


def test_bwp_examples():
    msg = BwpTradchain(start_rb=20, num_rb=20, tradcapuse=0x10, num_trade_chains=1)
    assert encode_bwp_tradchain(msg) == bytes([0x00, 0x14, 0x00, 0x14, 0x10, 0x01])
    for bad in ([0, 20, 0, 20, 0x00, 1], [0, 20, 0, 0, 0x10, 1], [0, 20, 0, 20, 0x11, 1],
                [0, 20, 0, 20, 0x10, 0], [0, 20, 0, 20, 0x10]):
        with pytest.raises(CodecError):
            decode_bwp_tradchain(bytes(bad))


def test_dci_examples():
    assert encode_dci_ext(DciHetExt(0, DmrsConfig.PORTS_4, 0)) == bytes([0x00, 0x00])
    # 11111 10 111111 000
    assert encode_dci_ext(DciHetExt(31, DmrsConfig.PORTS_6, 63)) == bytes([0xFD, 0xF8])
    with pytest.raises(CodecError):
        decode_dci_ext(bytes([0xFF, 0xFF]))
    with pytest.raises(CodecError):
        decode_dci_ext(bytes([0xFD, 0xF9]))   # padding bit set
    with pytest.raises(CodecError):
        decode_dci_ext(bytes([0xFD]))
    with pytest.raises(CodecError):
        DciHetExt(0, DmrsConfig.PORTS_4, 16)
    assert DmrsConfig.for_width(5) is DmrsConfig.PORTS_5


def _random_abcap(rng):
    return [ABCap(rng.randrange(16), rng.randrange(16), rng.randrange(256))
            for _ in range(rng.randrange(8))]


def _random_bwp(rng):
    return BwpTradchain(rng.randrange(65536), rng.randrange(1, 65536), 1 << rng.randrange(8),
                        rng.randrange(1, 256))


def _random_dci(rng):
    cfg = DmrsConfig(rng.randrange(3))
    return DciHetExt(rng.randrange(32), cfg, rng.randrange(1 << cfg.width))


@pytest.mark.parametrize("gen,enc,dec", [
    (_random_abcap, encode_abcap_list, decode_abcap_list),
    (_random_bwp, encode_bwp_tradchain, decode_bwp_tradchain),
    (_random_dci, encode_dci_ext, decode_dci_ext),
])
def test_round_trip_randomized(gen, enc, dec):
    rng = random.Random(12345)
    for _ in range(ROUND_TRIPS):
        msg = gen(rng)
        assert dec(enc(msg)) == msg


def _canonical_or_rejected(decode, encode, data):
    try:
        msg = decode(data)
    except CodecError:
        return
    assert encode(msg) == data


@settings(max_examples=3000)
@given(st.binary(max_size=12))
def test_abcap_decoder_is_canonical(data):
    _canonical_or_rejected(decode_abcap_list, encode_abcap_list, data)


@settings(max_examples=3000)
@given(st.binary(min_size=5, max_size=7))
def test_bwp_decoder_is_canonical(data):
    _canonical_or_rejected(decode_bwp_tradchain, encode_bwp_tradchain, data)


def test_dci_decoder_is_canonical_exhaustive():
    accepted = 0
    for v in range(1 << 16):
        data = v.to_bytes(2, "big")
        try:
            msg = decode_dci_ext(data)
        except CodecError:
            continue
        accepted += 1
        assert encode_dci_ext(msg) == data
    # every valid message has exactly one encoding
    assert accepted == 32 * (16 + 32 + 64)
