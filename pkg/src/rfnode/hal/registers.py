"""Register files and their documented mapping onto the modem config.

The maps are fixed constants of this codebase.  Mapped fields: carrier,
bitrate, bandwidth and sync word (plus packet framing and power, which ride
along for free).  Reads always return the raw byte last written; writes to
mapped addresses update the config deterministically and vice versa.

VC1101 (64 registers)
  0x04,0x05      sync word (2 bytes, big-endian)
  0x0D,0x0E,0x0F carrier, 24-bit big-endian, units of 100 Hz
  0x10           receive filter index into the profile ladder
  0x11,0x12      bitrate, 16-bit big-endian, units of 100 bps
  0x13           preamble length in bytes
  0x14           flags: bit0 fixed-length, bit1 crc, bit2 promiscuous
  0x15           packet length (fixed size or variable max)
  0x16           tx power, dBm + 128

VNRF24 (32 registers)
  0x05           channel: carrier = 2400 MHz + ch * 1 MHz
  0x06           bitrate code: 0=250k, 1=1M, 2=2M
  0x0A..0x0E     sync/address (5 bytes)
  0x11           packet length
  0x12           flags: bit0 fixed-length, bit1 crc, bit2 promiscuous
  0x13           preamble length in bytes
  0x14           tx power, dBm + 128

The register path intentionally skips band validation: raw writes behave
like poking a real chip.
"""

from rfnode.hal.config import PACKET_FIXED, PACKET_VARIABLE, ModemConfig
from rfnode.hal.errors import RegisterRangeError
from rfnode.hal.profiles import FrontendProfile

NRF_RATE_CODES = {0: 250_000, 1: 1_000_000, 2: 2_000_000}
NRF_RATE_OF = {v: k for k, v in NRF_RATE_CODES.items()}


class RegisterFile:
    def __init__(self, profile: FrontendProfile):
        self.profile = profile
        self.raw = bytearray(profile.register_count)

    def check(self, addr: int):
        if not 0 <= addr < len(self.raw):
            raise RegisterRangeError(
                f"address {addr:#04x} out of range for {self.profile.name}")

    def read(self, addr: int) -> int:
        self.check(addr)
        return self.raw[addr]

    def write(self, addr: int, value: int):
        self.check(addr)
        if not 0 <= value <= 0xFF:
            raise RegisterRangeError(f"value {value} is not a byte")
        self.raw[addr] = value

    # -- config <-> registers ----------------------------------------------

    def sync_config(self, cfg: ModemConfig):
        """Rewrite every mapped register from the config."""
        raw = self.raw
        flags = ((cfg.packet_len_mode == PACKET_FIXED)
                 | (cfg.crc_enabled << 1)
                 | (cfg.is_promiscuous << 2))
        if self.profile.name == "VNRF24":
            raw[0x05] = max(0, min(255, (cfg.carrier_hz - 2_400_000_000) // 1_000_000))
            raw[0x06] = NRF_RATE_OF.get(cfg.bitrate_bps, 2)
            addr = cfg.sync_word[:5].ljust(5, b"\x00")
            raw[0x0A:0x0F] = addr
            raw[0x11] = cfg.packet_len
            raw[0x12] = flags
            raw[0x13] = max(1, cfg.preamble_len // 8)
            raw[0x14] = (cfg.tx_power_dbm + 128) & 0xFF
        else:
            sync = cfg.sync_word[:2].rjust(2, b"\x00")
            raw[0x04], raw[0x05] = sync[0], sync[1]
            units = cfg.carrier_hz // 100
            raw[0x0D] = (units >> 16) & 0xFF
            raw[0x0E] = (units >> 8) & 0xFF
            raw[0x0F] = units & 0xFF
            raw[0x10] = self.profile.filter_widths.index(cfg.rx_bandwidth_hz)
            rate_units = min(0xFFFF, cfg.bitrate_bps // 100)
            raw[0x11] = (rate_units >> 8) & 0xFF
            raw[0x12] = rate_units & 0xFF
            raw[0x13] = max(1, cfg.preamble_len // 8)
            raw[0x14] = flags
            raw[0x15] = cfg.packet_len
            raw[0x16] = (cfg.tx_power_dbm + 128) & 0xFF

    def apply_write(self, addr: int, cfg: ModemConfig):
        """Propagate a raw register write into the config (mapped addresses)."""
        raw = self.raw
        if self.profile.name == "VNRF24":
            if addr == 0x05:
                cfg.carrier_hz = 2_400_000_000 + raw[0x05] * 1_000_000
            elif addr == 0x06:
                cfg.bitrate_bps = NRF_RATE_CODES.get(raw[0x06] & 0x03, 2_000_000)
            elif 0x0A <= addr <= 0x0E:
                cfg.sync_word = bytes(raw[0x0A:0x0F])
            elif addr == 0x11:
                cfg.packet_len = raw[0x11] or 1
            elif addr == 0x12:
                self._apply_flags(raw[0x12], cfg)
            elif addr == 0x13:
                cfg.preamble_len = raw[0x13] * 8
            elif addr == 0x14:
                cfg.tx_power_dbm = raw[0x14] - 128
        else:
            if addr in (0x04, 0x05):
                cfg.sync_word = bytes(raw[0x04:0x06])
            elif addr in (0x0D, 0x0E, 0x0F):
                cfg.carrier_hz = ((raw[0x0D] << 16) | (raw[0x0E] << 8) | raw[0x0F]) * 100
            elif addr == 0x10:
                widths = self.profile.filter_widths
                cfg.rx_bandwidth_hz = widths[min(raw[0x10], len(widths) - 1)]
            elif addr in (0x11, 0x12):
                cfg.bitrate_bps = ((raw[0x11] << 8) | raw[0x12]) * 100 or 100
            elif addr == 0x13:
                cfg.preamble_len = raw[0x13] * 8
            elif addr == 0x14:
                self._apply_flags(raw[0x14], cfg)
            elif addr == 0x15:
                cfg.packet_len = raw[0x15] or 1
            elif addr == 0x16:
                cfg.tx_power_dbm = raw[0x16] - 128

    @staticmethod
    def _apply_flags(flags: int, cfg: ModemConfig):
        cfg.packet_len_mode = PACKET_FIXED if flags & 1 else PACKET_VARIABLE
        cfg.crc_enabled = bool(flags & 2)
        cfg.is_promiscuous = bool(flags & 4)
