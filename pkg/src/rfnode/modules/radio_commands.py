"""Per-radio command surface: config, registers, modes, TX, status.

One module instance is registered per attached radio, under the radio's
own name, so topics look like radioA/set_modem_config.  Wire field names
are camelCase; they map 1:1 onto the frontend's config fields.  The rewrite
engine is also reachable through a radio (add_packet_mod and
reset_packet_mods) as a script-friendly alias for packet_mod/add|reset.
"""

from rfnode.core.module import NodeModule, UnknownCommandError
from rfnode.hal.config import PACKET_FIXED, PACKET_VARIABLE
from rfnode.rpc.schema import field

WIRE_TO_CFG = {
    "carrierFreq": "carrier_hz",
    "bitRate": "bitrate_bps",
    "freqDev": "freq_dev_hz",
    "rxBandwidth": "rx_bandwidth_hz",
    "modulation": "modulation",
    "txPower": "tx_power_dbm",
    "isPromiscuous": "is_promiscuous",
    "syncWord": "sync_word",
    "preambleLen": "preamble_len",
    "packetLen": "packet_len",
    "crcEnabled": "crc_enabled",
}
CFG_TO_WIRE = {v: k for k, v in WIRE_TO_CFG.items()}
CFG_TO_WIRE["packet_len_mode"] = "isFixedPacketLen"

CONFIG_FIELDS = {
    "carrierFreq": field("float"),
    "bitRate": field("float"),
    "freqDev": field("float"),
    "rxBandwidth": field("int"),
    "modulation": field("str"),
    "txPower": field("int"),
    "isPromiscuous": field("bool"),
    "syncWord": field("bytes"),
    "preambleLen": field("int"),
    "isFixedPacketLen": field("bool"),
    "packetLen": field("int"),
    "crcEnabled": field("bool"),
}


class RadioCommandModule(NodeModule):
    priority_order = 10

    def __init__(self, radio_id: str):
        super().__init__()
        self.name = radio_id
        self.radio_id = radio_id

    def _frontend(self, node):
        return node.radios.get(self.radio_id)

    def _config_kwargs(self, fields: dict) -> dict:
        kwargs = {}
        for wire, value in fields.items():
            if wire == "isFixedPacketLen":
                kwargs["packet_len_mode"] = PACKET_FIXED if value else PACKET_VARIABLE
            elif wire == "syncWord":
                kwargs["sync_word"] = bytes.fromhex(value)
            else:
                kwargs[WIRE_TO_CFG[wire]] = value
        return kwargs

    def on_user_command(self, node, verb, fields):
        fe = self._frontend(node)
        if verb in ("set_modem_config", "set_packet_len"):
            applied = fe.set_modem_config(**self._config_kwargs(fields))
            return {"applied": sorted(CFG_TO_WIRE[name] for name in applied)}
        if verb == "get_modem_config":
            return self._wire_config(fe)
        if verb == "set_mode":
            fe.set_mode(fields["mode"])
            return {"mode": fe.mode}
        if verb in ("rx", "tx", "idle", "jam"):
            mode = {"rx": "RX", "tx": "TX", "idle": "IDLE", "jam": "JAM"}[verb]
            # promiscuity is a receive-path property: rx() on a radio with
            # isPromiscuous set arms sync-less capture
            if verb == "rx" and fe.config.is_promiscuous:
                mode = "PROMISCUOUS"
            fe.set_mode(mode)
            return {"mode": fe.mode}
        if verb == "send":
            data = bytes.fromhex(fields["data"])
            emission = fe.transmit(data, repeat=int(fields.get("repeat", 1)),
                                   gap_us=int(fields.get("gapUs", 2000)))
            return {"bytes": len(data), "repeat": emission.repeat_count,
                    "durationUs": emission.duration_us}
        if verb == "set_register":
            fe.set_register(int(fields["address"]), int(fields["value"]))
            return {"address": int(fields["address"]), "value": int(fields["value"])}
        if verb == "get_register":
            addr = int(fields["address"])
            return {"address": addr, "value": fe.get_register(addr)}
        if verb == "status":
            return fe.status()
        if verb == "add_packet_mod":
            engine = node.modules["packet_mod"]
            mapped = {
                "operation": fields.get("op", fields.get("operation")),
                "position": fields.get("i", fields.get("position")),
                "operand": fields.get("val", fields.get("operand")),
                "content": fields.get("content"),
                "pattern": fields.get("pattern"),
                "payload": fields.get("payload"),
            }
            mapped = {k: v for k, v in mapped.items() if v is not None}
            engine.add_rule(mapped)
            return {"rules": len(engine.rules)}
        if verb == "reset_packet_mods":
            node.modules["packet_mod"].rules.clear()
            return {"rules": 0}
        raise UnknownCommandError(verb)

    @staticmethod
    def _wire_config(fe) -> dict:
        cfg = fe.config
        return {
            "carrierFreq": cfg.carrier_hz,
            "bitRate": cfg.bitrate_bps,
            "freqDev": cfg.freq_dev_hz,
            "rxBandwidth": cfg.rx_bandwidth_hz,
            "modulation": cfg.modulation,
            "txPower": cfg.tx_power_dbm,
            "isPromiscuous": cfg.is_promiscuous,
            "syncWord": cfg.sync_word.hex(),
            "preambleLen": cfg.preamble_len,
            "isFixedPacketLen": cfg.packet_len_mode == PACKET_FIXED,
            "packetLen": cfg.packet_len,
            "crcEnabled": cfg.crc_enabled,
        }

    def commands(self):
        mod_alias = {
            "i": field("int"), "val": field("int"),
            "op": field("enum", enum="Op"),
            "position": field("int"), "content": field("int"),
            "operand": field("int"), "operation": field("enum", enum="Op"),
            "pattern": field("str"), "payload": field("bytes"),
        }
        return {
            "set_modem_config": dict(CONFIG_FIELDS),
            "get_modem_config": {},
            "set_packet_len": {"isFixedPacketLen": field("bool"),
                               "packetLen": field("int")},
            "set_mode": {"mode": field("enum", required=True, enum="Mode")},
            "rx": {}, "tx": {}, "idle": {}, "jam": {},
            "send": {"data": field("bytes", required=True),
                     "repeat": field("int"), "gapUs": field("int")},
            "set_register": {"address": field("int", required=True),
                             "value": field("int", required=True)},
            "get_register": {"address": field("int", required=True)},
            "status": {},
            "add_packet_mod": mod_alias,
            "reset_packet_mods": {},
        }

    def events(self):
        return {
            "packet": {
                "data": field("bytes"), "rxRadio": field("str"),
                "carrierFreq": field("int"), "bitRate": field("int"),
                "rssi": field("float"), "millis": field("int"),
            },
        }
