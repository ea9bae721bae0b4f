from rfnode.modules.packet_filter import PacketFilterModule, PacketFilterRule, filter_packet
from rfnode.modules.packet_mod import PacketModification, PacketModModule, apply_modification
from rfnode.modules.radio_commands import RadioCommandModule
from rfnode.modules.repeater import RepeaterModule

__all__ = [
    "PacketFilterModule", "PacketFilterRule", "filter_packet",
    "PacketModification", "PacketModModule", "apply_modification",
    "RadioCommandModule", "RepeaterModule",
]
