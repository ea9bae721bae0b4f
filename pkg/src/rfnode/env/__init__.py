from rfnode.env.clock import VirtualClock
from rfnode.env.emission import Emission
from rfnode.env.channel import RfChannel, RssiObservation
from rfnode.env.scenario import load_scenario, build_channel

__all__ = [
    "VirtualClock",
    "Emission",
    "RfChannel",
    "RssiObservation",
    "load_scenario",
    "build_channel",
]
