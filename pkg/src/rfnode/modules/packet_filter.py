"""Regex packet filter.

Rules match against the lowercase hex text of the payload (two characters
per byte); ^ and $ anchor on that text.  A packet is accepted only if every
rule is satisfied, where satisfied means matched XOR negated.  No rules
means accept everything.
"""

import re
from dataclasses import dataclass

from rfnode.core.module import DROP, NodeModule, UnknownCommandError
from rfnode.rpc.schema import field


@dataclass
class PacketFilterRule:
    pattern: str
    negate: bool = False

    def __post_init__(self):
        self.compiled = re.compile(self.pattern)

    def satisfied(self, hex_text: str) -> bool:
        return bool(self.compiled.search(hex_text)) != self.negate


def filter_packet(data: bytes, rules) -> bool:
    text = data.hex()
    return all(rule.satisfied(text) for rule in rules)


class PacketFilterModule(NodeModule):
    name = "packet_filter"
    priority_order = 20

    def __init__(self):
        super().__init__()
        self.rules: list[PacketFilterRule] = []

    def on_packet_received(self, node, pkt):
        if not filter_packet(pkt.data, self.rules):
            return DROP
        return pkt

    def on_user_command(self, node, verb, fields):
        if verb == "add":
            try:
                rule = PacketFilterRule(fields["pattern"],
                                        bool(fields.get("negate", False)))
            except re.error as exc:
                raise ValueError(f"bad pattern: {exc}") from None
            self.rules.append(rule)
            return {"rules": len(self.rules)}
        if verb == "clear":
            self.rules.clear()
            return {"rules": 0}
        if verb == "list":
            return {"rules": [{"pattern": r.pattern, "negate": r.negate}
                              for r in self.rules]}
        raise UnknownCommandError(verb)

    def commands(self):
        return {
            "add": {"pattern": field("str", required=True),
                    "negate": field("bool")},
            "clear": {},
            "list": {},
        }
