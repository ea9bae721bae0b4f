"""Tunable physical-layer state of one virtual frontend."""

from dataclasses import dataclass, field

from rfnode.hal.errors import ConfigError
from rfnode.hal.profiles import FrontendProfile

PACKET_FIXED = "fixed"
PACKET_VARIABLE = "variable"


@dataclass
class ModemConfig:
    carrier_hz: int
    bitrate_bps: int
    rx_bandwidth_hz: int
    freq_dev_hz: int = 0            # stored only; unused under OOK
    modulation: str = "OOK"
    tx_power_dbm: int = -20
    is_promiscuous: bool = False
    sync_word: bytes = b"\xd3\x91"
    preamble_len: int = 32          # bits
    packet_len_mode: str = PACKET_VARIABLE
    packet_len: int = 64            # fixed size, or variable max
    crc_enabled: bool = False

    FIELDS = (
        "carrier_hz", "bitrate_bps", "rx_bandwidth_hz", "freq_dev_hz",
        "modulation", "tx_power_dbm", "is_promiscuous", "sync_word",
        "preamble_len", "packet_len_mode", "packet_len", "crc_enabled",
    )


def default_config(profile: FrontendProfile) -> ModemConfig:
    if profile.name == "VNRF24":
        return ModemConfig(
            carrier_hz=2_400_000_000,
            bitrate_bps=2_000_000,
            rx_bandwidth_hz=profile.widest_filter,
            sync_word=b"\xe7" * 5,
            preamble_len=16,
            packet_len_mode=PACKET_FIXED,
            packet_len=32,
        )
    return ModemConfig(
        carrier_hz=433_920_000,
        bitrate_bps=4_800,
        rx_bandwidth_hz=profile.widest_filter,
    )


def validate_and_quantize(profile: FrontendProfile, fields: dict) -> dict:
    """Check a partial config against the profile; return quantized values."""
    out = {}
    for name, value in fields.items():
        if name not in ModemConfig.FIELDS:
            raise ConfigError(f"unknown config field {name!r}")
        if name == "carrier_hz":
            hz = int(round(value / profile.carrier_step_hz)) * profile.carrier_step_hz
            if not profile.in_band(hz):
                raise ConfigError(
                    f"carrier {value} Hz outside band {profile.band} of {profile.name}")
            out[name] = hz
        elif name == "bitrate_bps":
            if profile.allowed_bitrates:
                if int(value) not in profile.allowed_bitrates:
                    raise ConfigError(
                        f"bitrate {value} unsupported on {profile.name}; "
                        f"allowed: {profile.allowed_bitrates}")
                out[name] = int(value)
            else:
                bps = int(round(value / profile.bitrate_step)) * profile.bitrate_step
                if not (0 < bps <= profile.max_bitrate):
                    raise ConfigError(f"bitrate {value} out of range for {profile.name}")
                out[name] = bps
        elif name == "rx_bandwidth_hz":
            if int(value) not in profile.filter_widths:
                raise ConfigError(
                    f"bandwidth {value} not in {profile.name} filter set")
            out[name] = int(value)
        elif name == "modulation":
            if value != "OOK":
                raise ConfigError(f"unsupported modulation {value!r}")
            out[name] = value
        elif name == "sync_word":
            if not isinstance(value, (bytes, bytearray)) or not 0 < len(value) <= 5:
                raise ConfigError("sync word must be 1..5 bytes")
            out[name] = bytes(value)
        elif name == "preamble_len":
            bits = max(8, int(value)) // 8 * 8
            out[name] = bits
        elif name == "packet_len_mode":
            if value not in (PACKET_FIXED, PACKET_VARIABLE):
                raise ConfigError(f"bad packet length mode {value!r}")
            out[name] = value
        elif name == "packet_len":
            n = int(value)
            if not 0 < n <= profile.fifo_bytes:
                raise ConfigError(
                    f"packet length {n} outside 1..{profile.fifo_bytes}")
            out[name] = n
        elif name == "freq_dev_hz":
            out[name] = int(value)
        elif name == "tx_power_dbm":
            out[name] = int(value)
        else:  # booleans
            out[name] = bool(value)
    return out
