import pytest

from rfnode.env.channel import RfChannel
from rfnode.env.clock import VirtualClock
from rfnode.env.emission import Emission
from rfnode.hal import (
    MODE_IDLE,
    MODE_JAM,
    MODE_PROMISCUOUS,
    MODE_RX,
    MODE_TX,
    ConfigError,
    OversizePayloadError,
    RadioProxy,
    RegisterRangeError,
    UnknownRadioError,
)


@pytest.fixture
def rig():
    channel = RfChannel(VirtualClock(), seed=1, noise_floor_dbm=-100.0,
                        rssi_noise_sigma_db=0.0)
    proxy = RadioProxy()
    a = proxy.attach("A", "vc1101", channel)
    b = proxy.attach("B", "vc1101", channel)
    c = proxy.attach("C", "vnrf24", channel)
    return channel, proxy, a, b, c


def test_proxy_dispatch_isolation(rig):
    channel, proxy, a, b, c = rig
    proxy.get("A").set_modem_config(carrier_hz=433_920_000)
    proxy.get("B").set_modem_config(carrier_hz=868_000_000)
    assert a.config.carrier_hz == 433_920_000
    assert b.config.carrier_hz == 868_000_000
    assert c.config.carrier_hz == 2_400_000_000
    with pytest.raises(UnknownRadioError):
        proxy.get("Z")


def test_set_modem_config_applied_list(rig):
    _, _, a, _, c = rig
    applied = a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=3400)
    assert sorted(applied) == ["bitrate_bps", "carrier_hz"]
    assert a.set_modem_config() == []
    with pytest.raises(ConfigError):
        a.set_modem_config(carrier_hz=100_000_000)     # out of band
    with pytest.raises(ConfigError):
        c.set_modem_config(bitrate_bps=5000)           # VNRF24 rate set
    assert c.set_modem_config(bitrate_bps=250_000) == ["bitrate_bps"]


def test_retune_charges_timing_and_caches_calibration(rig):
    channel, _, a, _, _ = rig
    t0 = channel.clock.now
    a.set_modem_config(carrier_hz=433_000_000)
    # hop + driver + calibration on first visit
    assert channel.clock.now - t0 == 75 + 320 + 712
    t1 = channel.clock.now
    a.set_modem_config(carrier_hz=434_000_000)
    assert channel.clock.now - t1 == 75 + 320 + 712
    t2 = channel.clock.now
    a.set_modem_config(carrier_hz=433_000_000)   # cached now
    assert channel.clock.now - t2 == 75 + 320
    t3 = channel.clock.now
    a.set_modem_config(bitrate_bps=9600)         # no retune
    assert channel.clock.now - t3 == 320


def test_warm_calibration(rig):
    channel, _, a, _, _ = rig
    t0 = channel.clock.now
    misses = a.warm_calibration([432_000_000 + i * 304_500 for i in range(17)])
    assert misses == 17
    assert channel.clock.now - t0 == 17 * 712
    t1 = channel.clock.now
    a.set_modem_config(carrier_hz=432_304_500)
    assert channel.clock.now - t1 == 75 + 320


def test_register_read_after_write(rig):
    _, _, a, _, _ = rig
    a.set_register(0x0D, 0x10)
    assert a.get_register(0x0D) == 0x10
    with pytest.raises(RegisterRangeError):
        a.get_register(0xFF)
    with pytest.raises(RegisterRangeError):
        a.set_register(0x41, 1)


def test_register_config_bijection(rig):
    _, _, a, b, _ = rig
    # config -> registers
    a.set_modem_config(carrier_hz=433_920_000)
    units = 433_920_000 // 100
    assert a.get_register(0x0D) == (units >> 16) & 0xFF
    assert a.get_register(0x0E) == (units >> 8) & 0xFF
    assert a.get_register(0x0F) == units & 0xFF
    # registers -> config on the twin radio
    b.set_register(0x0D, (units >> 16) & 0xFF)
    b.set_register(0x0E, (units >> 8) & 0xFF)
    b.set_register(0x0F, units & 0xFF)
    assert b.config.carrier_hz == 433_920_000
    # bitrate path both ways
    a.set_modem_config(bitrate_bps=9600)
    assert (a.get_register(0x11) << 8 | a.get_register(0x12)) == 96
    b.set_register(0x11, 0)
    b.set_register(0x12, 96)
    assert b.config.bitrate_bps == 9600
    # sync word
    a.set_modem_config(sync_word=b"\xaa\x55")
    assert a.get_register(0x04) == 0xAA and a.get_register(0x05) == 0x55


def test_set_mode_and_jam_emission(rig):
    channel, _, a, b, _ = rig
    b.set_modem_config(carrier_hz=433_970_000, tx_power_dbm=-30)
    b.set_mode(MODE_JAM)
    assert any(e.continuous for e in channel.emissions)
    obs = channel.observe_rssi(433_970_000, 812_000)
    assert obs.value == -30.0
    b.set_mode(MODE_IDLE)
    assert not any(e.continuous for e in channel.emissions)


def test_transmit_duration_arithmetic(rig):
    channel, _, a, _, _ = rig
    a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=3400,
                       preamble_len=32, sync_word=b"\xd3\x91",
                       crc_enabled=True)
    e = a.transmit(b"\x01\x02\x03\x04")
    # variable mode adds a length byte; CRC adds two
    bits = 32 + 16 + 8 * (1 + 4 + 2)
    assert e.bits_per_repeat == bits
    assert e.duration_us == -(-bits * 1_000_000 // 3400)
    assert a.mode == MODE_TX


def test_transmit_repeat_and_oversize(rig):
    channel, _, a, _, _ = rig
    e = a.transmit(b"\x00" * 4, repeat=3, gap_us=500)
    assert e.repeat_count == 3
    assert len(list(e.windows())) == 3
    a.set_modem_config(packet_len_mode="fixed", packet_len=32)
    with pytest.raises(OversizePayloadError):
        a.transmit(b"\x00" * 300)
    # repeat=0 acks without scheduling
    before = len(channel.emissions)
    a.set_modem_config(packet_len_mode="variable", packet_len=64)
    a.transmit(b"\x01", repeat=0)
    assert len(channel.emissions) == before


def spin(channel, frontends, until_us):
    """Poll-loop helper: advance in 1 ms slices, collecting packets."""
    got = []
    while channel.clock.now < until_us:
        channel.advance(1000)
        for fe in frontends:
            got.extend(fe.poll_reception())
    return got


def test_round_trip_same_config(rig):
    channel, _, a, b, _ = rig
    for fe in (a, b):
        fe.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600,
                            sync_word=b"\xd3\x91", crc_enabled=True)
    a.set_mode(MODE_RX)
    payload = b"\xca\xfe\x12\x34\x56"
    b.transmit(payload)
    pkts = spin(channel, [a], channel.clock.now + 100_000)
    assert len(pkts) == 1
    assert pkts[0].data == payload
    assert pkts[0].rx_radio == "A"
    assert pkts[0].carrier_freq == 433_920_000


def test_rx_crc_mismatch_drops(rig):
    channel, _, a, b, _ = rig
    a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600, crc_enabled=True)
    a.set_mode(MODE_RX)
    # hand-build an emission with a corrupted CRC trailer
    bad = Emission(carrier_hz=433_920_000, bitrate_bps=9600, power_dbm=-20.0,
                   payload=bytes([3]) + b"abc" + b"\x00\x00",
                   sync_word=a.config.sync_word, preamble_len=32,
                   start_us=channel.clock.now + 10)
    channel.add_emission(bad)
    assert spin(channel, [a], channel.clock.now + 50_000) == []
    assert a.counters["crc_failures"] == 1


def test_rx_requires_sync_match(rig):
    channel, _, a, b, _ = rig
    a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600,
                       sync_word=b"\xd3\x91")
    b.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600,
                       sync_word=b"\x2d\xd4")
    a.set_mode(MODE_RX)
    b.transmit(b"hello")
    assert spin(channel, [a], channel.clock.now + 50_000) == []


def test_rx_bitrate_tolerance(rig):
    channel, _, a, b, _ = rig
    a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600)
    b.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9900)
    a.set_mode(MODE_RX)
    b.transmit(b"ok")       # 300 bps off: still tracked
    pkts = spin(channel, [a], channel.clock.now + 50_000)
    assert len(pkts) == 1
    b.set_modem_config(bitrate_bps=10_400)
    b.transmit(b"no")       # 800 bps off: lost
    assert spin(channel, [a], channel.clock.now + 50_000) == []


def test_promiscuous_chunks_fixed_32(rig):
    channel, _, _, _, c = rig
    mouse_addr = bytes.fromhex("a5c3e81720")
    c.set_modem_config(carrier_hz=2_437_000_000, bitrate_bps=2_000_000,
                       is_promiscuous=True, packet_len_mode="fixed",
                       packet_len=32)
    c.set_mode(MODE_PROMISCUOUS)
    channel.add_emission(Emission(
        carrier_hz=2_437_000_000, bitrate_bps=2_000_000, power_dbm=-30.0,
        payload=b"\x11" * 14, sync_word=mouse_addr, preamble_len=16,
        start_us=channel.clock.now + 5))
    pkts = spin(channel, [c], channel.clock.now + 5000)
    assert len(pkts) == 1
    assert len(pkts[0].data) == 32
    assert pkts[0].data[:5] == mouse_addr


def test_promiscuous_ignores_sync_value(rig):
    channel, _, a, b, _ = rig
    a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600,
                       is_promiscuous=True)
    b.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600,
                       sync_word=b"\x99\x88")
    a.set_mode(MODE_PROMISCUOUS)
    b.transmit(b"zz")
    pkts = spin(channel, [a], channel.clock.now + 50_000)
    assert len(pkts) == 1
    assert pkts[0].data.startswith(b"\x99\x88")


def test_rx_not_armed_before_sync_misses(rig):
    channel, _, a, b, _ = rig
    for fe in (a, b):
        fe.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600)
    e = b.transmit(b"late")
    # arm RX only after the sync word has passed
    channel.advance(e.sync_start_us + 1000)
    a.set_mode(MODE_RX)
    assert spin(channel, [a], e.last_end_us() + 10_000) == []


def test_capture_margin_blocks_cochannel_interference(rig):
    channel, _, a, b, _ = rig
    a.set_modem_config(carrier_hz=433_920_000, bitrate_bps=9600)
    a.set_mode(MODE_RX)
    b.set_modem_config(carrier_hz=433_920_000, tx_power_dbm=-18)
    b.set_mode(MODE_JAM)   # stronger co-channel carrier
    wanted = Emission(carrier_hz=433_920_000, bitrate_bps=9600, power_dbm=-20.0,
                      payload=bytes([2]) + b"hi", sync_word=a.config.sync_word,
                      preamble_len=32, start_us=channel.clock.now + 10)
    channel.add_emission(wanted)
    assert spin(channel, [a], channel.clock.now + 50_000) == []


def test_status_reports_mode_and_config(rig):
    _, _, a, _, _ = rig
    a.set_mode(MODE_RX)
    st = a.status()
    assert st["mode"] == MODE_RX
    assert st["carrierFreq"] == a.config.carrier_hz
