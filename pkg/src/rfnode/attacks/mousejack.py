"""2.4 GHz HID scanner (disarmed).

Sweeps the 2405-2474 MHz channels in promiscuous mode, validates captured
chunks by address plausibility and CRC, counts sync-word (address) prefixes
and labels devices from a bundled fingerprint table.  Payload injection is
intentionally not implemented; the inject verb answers with a structured
not-implemented reply.
"""

from collections import Counter
from importlib import resources

import yaml

from rfnode.core.module import NodeModule, UnknownCommandError
from rfnode.crc import crc16_bytes
from rfnode.rpc.schema import field

CHANNEL_START_HZ = 2_405_000_000
CHANNEL_END_HZ = 2_474_000_000
CHANNEL_STEP_HZ = 1_000_000
DWELL_US = 5_000

ADDRESS_LEN = 5


def load_fingerprints() -> dict:
    text = resources.files("rfnode.attacks").joinpath("fingerprints.yaml") \
        .read_text(encoding="utf-8")
    return {str(k).lower(): v for k, v in (yaml.safe_load(text) or {}).items()}


def classify(address: bytes, table: dict) -> str:
    hexaddr = address.hex()
    for length in range(len(hexaddr), 1, -1):
        label = table.get(hexaddr[:length])
        if label:
            return label
    return "unknown"


def valid_capture(data: bytes, hid_len: int) -> bool:
    """Plausible address plus a passing CRC over the HID body."""
    if len(data) < ADDRESS_LEN + hid_len + 2:
        return False
    address = data[:ADDRESS_LEN]
    if len(set(address)) == 1 and address[0] in (0x00, 0xAA, 0x55):
        return False
    body = data[ADDRESS_LEN:ADDRESS_LEN + hid_len]
    crc = data[ADDRESS_LEN + hid_len:ADDRESS_LEN + hid_len + 2]
    return crc16_bytes(body) == crc


class MouseJackModule(NodeModule):
    name = "mousejack"
    priority_order = 70

    def __init__(self, radio_id: str = "radioC", hid_len: int = 12):
        super().__init__()
        self.radio_id = radio_id
        self.hid_len = hid_len
        self.running = False
        self.channel_hz = CHANNEL_START_HZ
        self._dwell_started = None
        self.sync_counts = Counter()
        self.table = load_fingerprints()

    def _frontend(self, node):
        fe = node.radios.get(self.radio_id)
        if fe.profile.name != "VNRF24":
            raise ValueError(f"{self.radio_id} is not a 2.4 GHz frontend")
        return fe

    def on_user_command(self, node, verb, fields):
        if verb == "start":
            if "radio" in fields:
                self.radio_id = fields["radio"]
            fe = self._frontend(node)
            fe.set_modem_config(carrier_hz=CHANNEL_START_HZ,
                                bitrate_bps=2_000_000,
                                is_promiscuous=True,
                                packet_len_mode="fixed", packet_len=32)
            fe.set_mode("PROMISCUOUS")
            self.channel_hz = CHANNEL_START_HZ
            self._dwell_started = node.clock.now
            self.sync_counts.clear()
            self.running = True
            return {"running": True, "channel": self.channel_hz}
        if verb == "stop":
            if self.running:
                self._frontend(node).set_mode("IDLE")
            self.running = False
            return {"running": False}
        if verb == "report":
            return {"devices": self.report()}
        if verb == "inject":
            return {"implemented": False,
                    "detail": "payload injection is not implemented"}
        raise UnknownCommandError(verb)

    def on_loop(self, node):
        if not self.running:
            return
        fe = self._frontend(node)
        if node.clock.now - self._dwell_started >= DWELL_US:
            nxt = self.channel_hz + CHANNEL_STEP_HZ
            self.channel_hz = CHANNEL_START_HZ if nxt > CHANNEL_END_HZ else nxt
            fe.set_modem_config(carrier_hz=self.channel_hz)
            self._dwell_started = node.clock.now

    def on_packet_received(self, node, pkt):
        if self.running and pkt.rx_radio == self.radio_id:
            if valid_capture(pkt.data, self.hid_len):
                self.sync_counts[pkt.data[:ADDRESS_LEN].hex()] += 1
        return pkt

    def report(self) -> list:
        out = []
        for sync, count in self.sync_counts.most_common():
            out.append({"sync": sync, "count": count,
                        "label": classify(bytes.fromhex(sync), self.table)})
        return out

    def commands(self):
        return {
            "start": {"radio": field("str")},
            "stop": {},
            "report": {},
            "inject": {"payload": field("bytes")},
        }

    def events(self):
        return {"report": {"devices": field("str")}}
