"""On-air transmissions.

An emission is one OOK frame (alternating preamble, sync word, payload
bytes, MSB first) repeated `repeat_count` times with `gap_us` of silence in
between.  A continuous emission (jamming) stays keyed until cancelled.
"""

from dataclasses import dataclass
from functools import cached_property

US = 1_000_000


def bytes_to_bits(data: bytes) -> bytes:
    out = bytearray()
    for b in data:
        for k in range(7, -1, -1):
            out.append((b >> k) & 1)
    return bytes(out)


def preamble_bits(n: int) -> bytes:
    # 101010... starting with 1
    return bytes((i + 1) & 1 for i in range(n))


@dataclass
class Emission:
    carrier_hz: int
    bitrate_bps: int
    power_dbm: float
    payload: bytes
    sync_word: bytes = b""
    preamble_len: int = 32          # bits
    start_us: int = 0
    repeat_count: int = 1
    gap_us: int = 0
    continuous: bool = False        # carrier permanently keyed (jam)
    source: str = ""                # actor or radio id, for self-exclusion
    modulation: str = "OOK"

    def __post_init__(self):
        if self.bitrate_bps <= 0:
            raise ValueError("bitrate must be positive")
        if self.modulation != "OOK":
            raise ValueError(f"unsupported modulation {self.modulation!r}")

    @cached_property
    def frame_bits(self) -> bytes:
        return (
            preamble_bits(self.preamble_len)
            + bytes_to_bits(self.sync_word)
            + bytes_to_bits(self.payload)
        )

    @property
    def bits_per_repeat(self) -> int:
        return self.preamble_len + 8 * (len(self.sync_word) + len(self.payload))

    @cached_property
    def duration_us(self) -> int:
        # ceil so the last bit is fully inside the window
        return -(-self.bits_per_repeat * US // self.bitrate_bps)

    @property
    def sync_start_us(self) -> int:
        """Offset of the sync word within a repeat (end of preamble)."""
        return self.preamble_len * US // self.bitrate_bps

    def windows(self):
        """Yield (start, end) of each repeat; continuous yields one open end."""
        if self.continuous:
            yield (self.start_us, None)
            return
        period = self.duration_us + self.gap_us
        for k in range(self.repeat_count):
            ws = self.start_us + k * period
            yield (ws, ws + self.duration_us)

    def active_at(self, t_us: int) -> bool:
        if self.continuous:
            return t_us >= self.start_us
        if t_us < self.start_us:
            return False
        period = self.duration_us + self.gap_us
        k = (t_us - self.start_us) // period if period else 0
        if k >= self.repeat_count:
            return False
        off = (t_us - self.start_us) - k * period
        return off < self.duration_us

    def last_end_us(self):
        if self.continuous:
            return None
        period = self.duration_us + self.gap_us
        return self.start_us + (self.repeat_count - 1) * period + self.duration_us
