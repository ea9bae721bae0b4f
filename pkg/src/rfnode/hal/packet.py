from dataclasses import dataclass


@dataclass
class Packet:
    """A received payload plus the capture metadata scripts consume."""

    data: bytes
    rx_radio: str
    carrier_freq: int   # Hz, config at reception time
    bit_rate: int       # bps, config at reception time
    rssi: float         # dBm
    millis: int         # virtual ms at reception

    def to_wire(self) -> dict:
        return {
            "data": self.data.hex(),
            "rxRadio": self.rx_radio,
            "carrierFreq": self.carrier_freq,
            "bitRate": self.bit_rate,
            "rssi": round(self.rssi, 3),
            "millis": self.millis,
        }

    @classmethod
    def from_wire(cls, fields: dict) -> "Packet":
        return cls(
            data=bytes.fromhex(fields["data"]),
            rx_radio=fields["rxRadio"],
            carrier_freq=int(fields["carrierFreq"]),
            bit_rate=int(fields["bitRate"]),
            rssi=float(fields["rssi"]),
            millis=int(fields["millis"]),
        )
