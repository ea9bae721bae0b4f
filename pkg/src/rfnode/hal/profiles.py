"""Virtual frontend profiles.

Two frontends are modelled: a sub-GHz transceiver (VC1101) with a ladder of
16 receive filter widths, and a 2.4 GHz transceiver (VNRF24) that only does
three fixed bitrates.  Timing figures for the sub-GHz part: hop 75 us,
calibration 712 us, driver transaction 320 us, stable RSSI read 600 us.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class TimingModel:
    t_hop_us: int
    t_cal_us: int
    t_driver_us: int
    t_rssi_us: int

    def __post_init__(self):
        for v in (self.t_hop_us, self.t_cal_us, self.t_driver_us, self.t_rssi_us):
            if v < 0:
                raise ValueError("timing values must be >= 0")


@dataclass(frozen=True)
class FrontendProfile:
    name: str
    band: tuple             # (lo_hz, hi_hz)
    filter_widths: tuple    # Hz, sorted descending
    max_bitrate: int        # bps
    fifo_bytes: int
    register_count: int
    timing: TimingModel
    allowed_bitrates: tuple = ()   # empty: anything up to max_bitrate
    carrier_step_hz: int = 100
    bitrate_step: int = 100

    def __post_init__(self):
        if list(self.filter_widths) != sorted(self.filter_widths, reverse=True):
            raise ValueError("filter_widths must be sorted descending")

    @property
    def widest_filter(self) -> int:
        return self.filter_widths[0]

    @property
    def narrowest_filter(self) -> int:
        return self.filter_widths[-1]

    def in_band(self, hz) -> bool:
        return self.band[0] <= hz <= self.band[1]

    def halve_bandwidth(self, bw: int):
        """Next ladder step for an iterative bandwidth-halving search.

        The filter closest to half the current width wins (narrower on a
        tie).  That keeps the side sub-regions of the refinement search
        within the new half-passband, so no carrier position falls between
        the flat zones of adjacent probes.
        """
        half = bw / 2
        candidates = [w for w in self.filter_widths if w < bw]
        if not candidates:
            return None
        return min(candidates, key=lambda w: (abs(w - half), w))


VC1101_PROFILE = FrontendProfile(
    name="VC1101",
    band=(300_000_000, 928_000_000),
    filter_widths=(
        812_000, 650_000, 541_000, 464_000,
        406_000, 325_000, 270_000, 232_000,
        203_000, 162_000, 135_000, 116_000,
        102_000, 81_000, 68_000, 58_000,
    ),
    max_bitrate=500_000,
    fifo_bytes=64,
    register_count=0x40,
    timing=TimingModel(t_hop_us=75, t_cal_us=712, t_driver_us=320, t_rssi_us=600),
)

VNRF24_PROFILE = FrontendProfile(
    name="VNRF24",
    band=(2_400_000_000, 2_525_000_000),
    filter_widths=(2_000_000, 1_000_000),
    max_bitrate=2_000_000,
    fifo_bytes=32,
    register_count=0x20,
    timing=TimingModel(t_hop_us=130, t_cal_us=0, t_driver_us=200, t_rssi_us=250),
    allowed_bitrates=(250_000, 1_000_000, 2_000_000),
    carrier_step_hz=1_000_000,
)

PROFILES = {"vc1101": VC1101_PROFILE, "vnrf24": VNRF24_PROFILE}
