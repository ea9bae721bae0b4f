from rfnode.hal.errors import (
    ConfigError,
    OversizePayloadError,
    RadioError,
    RegisterRangeError,
    UnknownRadioError,
)
from rfnode.hal.packet import Packet
from rfnode.hal.profiles import VC1101_PROFILE, VNRF24_PROFILE, FrontendProfile, TimingModel
from rfnode.hal.frontend import (
    MODE_IDLE,
    MODE_JAM,
    MODE_PROMISCUOUS,
    MODE_RX,
    MODE_TX,
    VirtualFrontend,
)
from rfnode.hal.proxy import RadioProxy

__all__ = [
    "ConfigError", "OversizePayloadError", "RadioError", "RegisterRangeError",
    "UnknownRadioError", "Packet", "FrontendProfile", "TimingModel",
    "VC1101_PROFILE", "VNRF24_PROFILE", "VirtualFrontend", "RadioProxy",
    "MODE_IDLE", "MODE_RX", "MODE_TX", "MODE_PROMISCUOUS", "MODE_JAM",
]
