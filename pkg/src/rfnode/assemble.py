"""Standard node assembly: radios plus the nine built-in modules."""

from rfnode.attacks import MouseJackModule, RollJamModule
from rfnode.clamping import GuessingModule
from rfnode.core import Node
from rfnode.env.channel import RfChannel
from rfnode.env.clock import VirtualClock
from rfnode.env.scenario import build_channel
from rfnode.hal import RadioProxy
from rfnode.modules import (
    PacketFilterModule,
    PacketModModule,
    RadioCommandModule,
    RepeaterModule,
)

DEFAULT_RADIOS = (("radioA", "vc1101"), ("radioB", "vc1101"), ("radioC", "vnrf24"))


def build_node(scenario: dict = None, radios=DEFAULT_RADIOS,
               enable=None, loop_step_us: int = 100, debug_hooks=False):
    """Node with the standard module set; returns (node, actors-by-id)."""
    if scenario:
        channel, actors = build_channel(scenario)
    else:
        channel = RfChannel(VirtualClock(), seed=0)
        actors = {}
    proxy = RadioProxy()
    for radio_id, profile in radios:
        proxy.attach(radio_id, profile, channel)
    node = Node(channel, proxy, loop_step_us=loop_step_us,
                debug_hooks=debug_hooks)

    modules = [RadioCommandModule(radio_id) for radio_id, _ in radios]
    modules += [
        PacketFilterModule(),
        PacketModModule(),
        RepeaterModule(),
        GuessingModule(),
        RollJamModule(),
        MouseJackModule(),
    ]
    for module in modules:
        if enable is not None and module.name not in enable \
                and not isinstance(module, RadioCommandModule):
            continue
        node.register_module(module)
    return node, actors
