"""In-flight packet rewrite engine.

A rule addresses bytes either by position or by content (every index
holding that byte), applies one of AND/OR/XOR/NOT/SLEFT/SRIGHT with an
operand where applicable, or splices payload bytes with PREPEND/APPEND/
INSERT.  An optional regex gate (on hex text, like the filter) restricts
which packets a rule touches.  Rules are applied strictly in list order.
"""

import re
from dataclasses import dataclass

from rfnode.core.module import NodeModule, UnknownCommandError
from rfnode.rpc.schema import OPS, field

BYTE_OPS = ("AND", "OR", "XOR", "NOT", "SLEFT", "SRIGHT")
OPERAND_OPS = ("AND", "OR", "XOR", "SLEFT", "SRIGHT")
SPLICE_OPS = ("PREPEND", "APPEND", "INSERT")


@dataclass
class PacketModification:
    operation: str
    position: int = None
    content: int = None
    operand: int = None
    pattern: str = None
    payload: bytes = None

    def __post_init__(self):
        op = self.operation
        if op not in OPS:
            raise ValueError(f"unknown operation {op!r}")
        if self.position is not None and self.content is not None:
            raise ValueError("position and content are mutually exclusive")
        if op in BYTE_OPS:
            if self.position is None and self.content is None:
                raise ValueError(f"{op} needs position or content")
            if self.payload is not None:
                raise ValueError(f"{op} takes no payload")
        if op in OPERAND_OPS:
            if self.operand is None:
                raise ValueError(f"{op} needs an operand")
            if not 0 <= self.operand <= 0xFF:
                raise ValueError("operand must be a byte")
        elif self.operand is not None:
            raise ValueError(f"{op} takes no operand")
        if op in SPLICE_OPS:
            if self.payload is None:
                raise ValueError(f"{op} needs payload bytes")
            if op == "INSERT":
                if self.position is None:
                    raise ValueError("INSERT needs a position")
            elif self.position is not None:
                raise ValueError(f"{op} takes no position")
            if self.content is not None:
                raise ValueError(f"{op} addresses no content byte")
        if self.content is not None and not 0 <= self.content <= 0xFF:
            raise ValueError("content must be a byte")
        self.compiled = re.compile(self.pattern) if self.pattern else None


def _byte_op(op: str, value: int, operand) -> int:
    if op == "AND":
        return value & operand
    if op == "OR":
        return value | operand
    if op == "XOR":
        return value ^ operand
    if op == "NOT":
        return ~value & 0xFF
    if op == "SLEFT":
        return (value << operand) & 0xFF
    if op == "SRIGHT":
        return (value & 0xFF) >> operand
    raise ValueError(op)


def apply_modification(data: bytes, mod: PacketModification):
    """Apply one rule; returns (new_data, warning-or-None)."""
    if mod.compiled and not mod.compiled.search(data.hex()):
        return data, None
    op = mod.operation
    if op == "PREPEND":
        return mod.payload + data, None
    if op == "APPEND":
        return data + mod.payload, None
    if op == "INSERT":
        if mod.position > len(data):
            return data, f"INSERT position {mod.position} beyond packet end"
        return data[:mod.position] + mod.payload + data[mod.position:], None
    if mod.position is not None:
        if mod.position >= len(data):
            return data, f"{op} position {mod.position} out of range"
        indices = [mod.position]
    else:
        indices = [i for i, b in enumerate(data) if b == mod.content]
    out = bytearray(data)
    for i in indices:
        out[i] = _byte_op(op, out[i], mod.operand)
    return bytes(out), None


def apply_rules(data: bytes, rules):
    """Left-fold of the rule list; collects skip warnings."""
    warnings = []
    for mod in rules:
        data, warn = apply_modification(data, mod)
        if warn:
            warnings.append(warn)
    return data, warnings


class PacketModModule(NodeModule):
    name = "packet_mod"
    priority_order = 30

    def __init__(self):
        super().__init__()
        self.rules: list[PacketModification] = []

    def add_rule(self, fields: dict) -> PacketModification:
        payload = fields.get("payload")
        mod = PacketModification(
            operation=fields["operation"],
            position=fields.get("position"),
            content=fields.get("content"),
            operand=fields.get("operand"),
            pattern=fields.get("pattern"),
            payload=bytes.fromhex(payload) if payload is not None else None,
        )
        self.rules.append(mod)
        return mod

    def on_packet_received(self, node, pkt):
        if not self.rules:
            return pkt
        data, warnings = apply_rules(pkt.data, self.rules)
        for warn in warnings:
            node.emit("rfquack/out/packet_mod/warning", {"warning": warn})
        pkt.data = data
        return pkt

    def on_user_command(self, node, verb, fields):
        if verb == "add":
            self.add_rule(fields)
            return {"rules": len(self.rules)}
        if verb == "reset":
            self.rules.clear()
            return {"rules": 0}
        if verb == "list":
            return {"rules": [self._describe(m) for m in self.rules]}
        raise UnknownCommandError(verb)

    @staticmethod
    def _describe(mod: PacketModification) -> dict:
        out = {"operation": mod.operation}
        if mod.position is not None:
            out["position"] = mod.position
        if mod.content is not None:
            out["content"] = mod.content
        if mod.operand is not None:
            out["operand"] = mod.operand
        if mod.pattern:
            out["pattern"] = mod.pattern
        if mod.payload is not None:
            out["payload"] = mod.payload.hex()
        return out

    def commands(self):
        rule_fields = {
            "operation": field("enum", required=True, enum="Op"),
            "position": field("int"),
            "content": field("int"),
            "operand": field("int"),
            "pattern": field("str"),
            "payload": field("bytes"),
        }
        return {"add": rule_fields, "reset": {}, "list": {}}
