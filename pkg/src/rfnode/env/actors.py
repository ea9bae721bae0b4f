"""Actor devices that live on the simulated channel.

Transmitter kinds (keyfob, mouse, beacon) pre-schedule their emissions when
the scenario is built.  Receiver kinds (car_receiver) get completed frames
delivered by the channel and keep rolling-code state.
"""

from dataclasses import dataclass, field

from rfnode.crc import crc16_bytes
from rfnode.env.emission import Emission


@dataclass
class RollingCodeReceiver:
    actor_id: str
    carrier_hz: int
    bandwidth_hz: int
    squelch_dbm: float
    code_offset: int = 4
    code_len: int = 4
    window: int = 16
    next_code: int = 0
    consumed: set = field(default_factory=set)

    def extract_code(self, payload: bytes):
        end = self.code_offset + self.code_len
        if len(payload) < end:
            return None
        return int.from_bytes(payload[self.code_offset:end], "big")

    def process(self, payload: bytes, at_us: int):
        """Rolling window acceptance: forward, unused codes only."""
        code = self.extract_code(payload)
        if code is None:
            return False, "malformed", None
        if code in self.consumed:
            return False, "replayed", code
        if not (self.next_code <= code < self.next_code + self.window):
            return False, "out_of_window", code
        self.consumed.add(code)
        self.next_code = code + 1
        return True, "accepted", code


def keyfob_payload(device_id: bytes, code: int, button: int, length: int) -> bytes:
    body = device_id + code.to_bytes(4, "big") + bytes([button])
    if length < len(body):
        raise ValueError("payload length shorter than fob fields")
    pad = bytes((0x5A + i) & 0xFF for i in range(length - len(body)))
    return body + pad


@dataclass
class KeyfobActor:
    actor_id: str
    carrier_hz: int
    bitrate_bps: int
    power_dbm: float
    sync_word: bytes
    preamble_len: int
    device_id: bytes
    code_start: int
    payload_len: int
    press_times_us: list
    button: int = 0x01

    def emissions(self):
        out = []
        for i, t in enumerate(self.press_times_us):
            payload = keyfob_payload(
                self.device_id, self.code_start + i, self.button, self.payload_len)
            out.append(Emission(
                carrier_hz=self.carrier_hz,
                bitrate_bps=self.bitrate_bps,
                power_dbm=self.power_dbm,
                payload=payload,
                sync_word=self.sync_word,
                preamble_len=self.preamble_len,
                start_us=t,
                source=self.actor_id,
            ))
        return out

    def expected_capture(self, press_index: int) -> bytes:
        """Raw bytes a sync-aligned capture of press i should produce."""
        payload = keyfob_payload(
            self.device_id, self.code_start + press_index, self.button,
            self.payload_len)
        return self.sync_word + payload


@dataclass
class MouseActor:
    actor_id: str
    carrier_hz: int
    address: bytes                  # 5-byte sync/address
    hid_template: bytes
    power_dbm: float = -30.0
    bitrate_bps: int = 2_000_000
    preamble_len: int = 16
    start_us: int = 1000
    count: int = 50
    interval_us: int = 4000

    def emissions(self):
        out = []
        for i in range(self.count):
            hid = bytes((b + i) & 0xFF for b in self.hid_template)
            payload = hid + crc16_bytes(hid)
            out.append(Emission(
                carrier_hz=self.carrier_hz,
                bitrate_bps=self.bitrate_bps,
                power_dbm=self.power_dbm,
                payload=payload,
                sync_word=self.address,
                preamble_len=self.preamble_len,
                start_us=self.start_us + i * self.interval_us,
                source=self.actor_id,
            ))
        return out


@dataclass
class BeaconActor:
    actor_id: str
    carrier_hz: int
    bitrate_bps: int
    power_dbm: float
    payload: bytes
    sync_word: bytes = b"\xd3\x91"
    preamble_len: int = 32
    start_us: int = 0
    count: int = 1
    interval_us: int = 0
    continuous: bool = False

    def emissions(self):
        if self.continuous:
            return [Emission(
                carrier_hz=self.carrier_hz, bitrate_bps=self.bitrate_bps,
                power_dbm=self.power_dbm, payload=self.payload,
                sync_word=self.sync_word, preamble_len=self.preamble_len,
                start_us=self.start_us, continuous=True, source=self.actor_id)]
        return [Emission(
            carrier_hz=self.carrier_hz, bitrate_bps=self.bitrate_bps,
            power_dbm=self.power_dbm, payload=self.payload,
            sync_word=self.sync_word, preamble_len=self.preamble_len,
            start_us=self.start_us + i * self.interval_us, source=self.actor_id)
            for i in range(self.count)]
