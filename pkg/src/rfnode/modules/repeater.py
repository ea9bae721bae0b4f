"""Repeater: retransmits surviving packets on a target radio.

Host serialization always happens; repeating is additional.  The node
copies survivors into the repeater queue only while the repeater is armed.
"""

from rfnode.core.module import NodeModule, UnknownCommandError
from rfnode.rpc.schema import field


def repeat_packet(node, pkt, target_radio: str, count: int = 1):
    """Transmit a packet's bytes `count` times on the target radio."""
    if count <= 0:
        return None
    fe = node.radios.get(target_radio)
    return fe.transmit(pkt.data, repeat=count)


class RepeaterModule(NodeModule):
    name = "repeater"
    priority_order = 40

    def __init__(self, target_radio: str = None):
        super().__init__()
        self.armed = False
        self.target_radio = target_radio
        self.repeat_count = 1

    def on_loop(self, node):
        if not self.armed or self.target_radio is None:
            return
        for pkt in node.repeater_queue.drain():
            try:
                repeat_packet(node, pkt, self.target_radio, self.repeat_count)
            except Exception as exc:
                node.emit("rfquack/out/repeater/error",
                          {"ok": False, "error": str(exc)})

    def on_user_command(self, node, verb, fields):
        if verb == "enable":
            if "target_radio" in fields:
                node.radios.get(fields["target_radio"])
                self.target_radio = fields["target_radio"]
            if self.target_radio is None:
                raise ValueError("no target radio configured")
            self.armed = True
            node.forward_to_repeater = True
            return {"armed": True, "target_radio": self.target_radio}
        if verb == "disable":
            self.armed = False
            node.forward_to_repeater = False
            return {"armed": False}
        if verb == "configure":
            if "target_radio" in fields:
                node.radios.get(fields["target_radio"])
                self.target_radio = fields["target_radio"]
            if "repeat_count" in fields:
                self.repeat_count = max(0, int(fields["repeat_count"]))
            return {"target_radio": self.target_radio,
                    "repeat_count": self.repeat_count}
        raise UnknownCommandError(verb)

    def commands(self):
        return {
            "enable": {"target_radio": field("str")},
            "disable": {},
            "configure": {"target_radio": field("str"),
                          "repeat_count": field("int")},
        }
