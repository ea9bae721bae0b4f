"""Multi-radio dispatch: every call routed by radio id reaches exactly the
addressed frontend."""

from rfnode.env.channel import RfChannel
from rfnode.hal.errors import UnknownRadioError
from rfnode.hal.frontend import VirtualFrontend
from rfnode.hal.profiles import PROFILES


class RadioProxy:
    def __init__(self):
        self._radios: dict[str, VirtualFrontend] = {}

    def attach(self, radio_id: str, profile_name: str, channel: RfChannel) -> VirtualFrontend:
        if radio_id in self._radios:
            raise ValueError(f"radio id {radio_id!r} already attached")
        profile = PROFILES[profile_name.lower()]
        fe = VirtualFrontend(radio_id, profile, channel)
        self._radios[radio_id] = fe
        return fe

    def get(self, radio_id: str) -> VirtualFrontend:
        try:
            return self._radios[radio_id]
        except KeyError:
            raise UnknownRadioError(f"unknown radio {radio_id!r}") from None

    def ids(self):
        return list(self._radios)

    def all(self):
        return list(self._radios.values())

    def __contains__(self, radio_id):
        return radio_id in self._radios

    def __len__(self):
        return len(self._radios)
