"""Signal-clamping coordinator.

Chains the stages live, on the node loop, one radio action per iteration:
scan the configured range (early-stop), refine to the carrier, switch the
radio to oversampled promiscuous capture, estimate the bitrate from the
preamble runs and retune before the preamble ends, then let the normal
reception path decode packets at the recovered parameters.  Per-stage
failures (signal gone, too few runs) restart the hunt.  The search range
is known up front, so calibrations for every reachable probe frequency are
pre-computed when the module starts.
"""

from dataclasses import dataclass, replace

from rfnode.clamping.bitrate import BitrateEstimatorConfig, SymbolAccumulator
from rfnode.clamping.scan import (
    NOTHING_FOUND,
    RegionScanState,
    ScanConfig,
    TrichotomicRefineState,
    calibration_plan,
)
from rfnode.core.module import NodeModule, UnknownCommandError
from rfnode.rpc.schema import field

IDLE, SCANNING, REFINING, SAMPLING, TRACKING = \
    "idle", "scanning", "refining", "sampling", "tracking"

ACTIVITY_TIMEOUT_US = 20_000
TRACK_TIMEOUT_US = 250_000


@dataclass
class ClampResult:
    freq_hat_hz: int
    bitrate_hat_bps: float
    t_freq_us: int
    t_br_us: int
    tunings: int
    done_at_us: int

    def to_wire(self):
        return {
            "freqHat": self.freq_hat_hz,
            "bitrateHat": round(self.bitrate_hat_bps, 1),
            "tFreqUs": self.t_freq_us,
            "tBrUs": self.t_br_us,
            "tunings": self.tunings,
            "doneAtUs": self.done_at_us,
        }


class GuessingModule(NodeModule):
    name = "guessing"
    priority_order = 50
    loop_stage = "high"

    def __init__(self, radio_id: str = "radioA"):
        super().__init__()
        self.radio_id = radio_id
        self.start_hz = 432_000_000
        self.end_hz = 437_000_000
        self.sampling_bitrate = 60_000
        self.estimator_cfg = BitrateEstimatorConfig()
        self.state = IDLE
        self.results: list[ClampResult] = []
        self.searches: list[dict] = []
        self._scan = None
        self._refine = None
        self._acc = None
        self._search_t0 = None
        self._refine_done_at = None
        self._freq_hat = None
        self._scan_probes = 0
        self._sample_started = None
        self._track_started = None

    # -- control ------------------------------------------------------------

    def _frontend(self, node):
        return node.radios.get(self.radio_id)

    def start(self, node):
        fe = self._frontend(node)
        cfg = self._scan_config(fe)
        fe.set_modem_config(
            is_promiscuous=True,
            bitrate_bps=self._quantized_rate(fe, self.sampling_bitrate),
            packet_len_mode="variable",
            packet_len=fe.profile.fifo_bytes,
            crc_enabled=False,
        )
        fe.set_mode("PROMISCUOUS")
        fe.warm_calibration(calibration_plan(cfg, fe.profile))
        self.state = SCANNING
        self._scan = RegionScanState(cfg, early_stop=True)
        return cfg

    def stop(self, node):
        fe = self._frontend(node)
        fe.set_mode("IDLE")
        self.state = IDLE
        self._scan = self._refine = self._acc = None

    def _scan_config(self, fe) -> ScanConfig:
        return ScanConfig(
            start_hz=int(self.start_hz),
            end_hz=int(self.end_hz),
            widest_filter_hz=fe.profile.widest_filter,
        )

    @staticmethod
    def _quantized_rate(fe, rate) -> int:
        step = fe.profile.bitrate_step
        if fe.profile.allowed_bitrates:
            return min(fe.profile.allowed_bitrates,
                       key=lambda r: abs(r - rate))
        return max(step, int(round(rate / step)) * step)

    # -- loop ------------------------------------------------------------------

    def on_loop(self, node):
        if self.state == IDLE:
            return
        fe = self._frontend(node)
        if self.state == SCANNING:
            self._step_scan(fe)
        elif self.state == REFINING:
            self._step_refine(node, fe)
        elif self.state == SAMPLING:
            self._step_sample(node, fe)
        elif self.state == TRACKING:
            if fe.clock.now - self._track_started > TRACK_TIMEOUT_US:
                self._restart(fe)

    def _restart(self, fe):
        self.state = SCANNING
        self._scan = RegionScanState(self._scan_config(fe), early_stop=True)

    def _step_scan(self, fe):
        outcome = self._scan.step(fe)
        if outcome is None:
            return
        if outcome is NOTHING_FOUND:
            self._restart(fe)
            return
        self._search_t0 = self._scan.started_at
        self._scan_probes = self._scan.probes
        self._refine = TrichotomicRefineState(
            self._scan.cfg, outcome.center_hz, fe.profile, outcome.rssi_dbm)
        self.state = REFINING

    def _step_refine(self, node, fe):
        outcome = self._refine.step(fe)
        if outcome is None:
            return
        if outcome is NOTHING_FOUND:
            self._restart(fe)
            return
        self._freq_hat = outcome
        self._refine_done_at = fe.clock.now
        tunings = self._scan_probes + self._refine.probes
        self.searches.append({
            "freq_hat_hz": outcome,
            "tunings": tunings,
            "t_freq_us": self._refine_done_at - self._search_t0,
        })
        # oversampled capture at the found carrier
        applied_rate = self._quantized_rate(fe, self.sampling_bitrate)
        fe.set_modem_config(carrier_hz=outcome, bitrate_bps=applied_rate)
        fe.reset_sampling()
        self._acc = SymbolAccumulator(
            replace(self.estimator_cfg, oversample_rate=applied_rate))
        self._sample_started = fe.clock.now
        self.state = SAMPLING

    def _step_sample(self, node, fe):
        self._acc.extend(fe.read_symbols())
        if not self._acc.ready():
            quiet = fe.clock.now - self._sample_started > ACTIVITY_TIMEOUT_US
            if quiet and not self._acc.saw_activity():
                self._restart(fe)
            return
        r_hat = self._acc.conclude()
        if r_hat is None:
            self._restart(fe)
            return
        applied_rate = self._quantized_rate(fe, r_hat)
        fe.set_modem_config(bitrate_bps=applied_rate)
        now = fe.clock.now
        result = ClampResult(
            freq_hat_hz=self._freq_hat,
            bitrate_hat_bps=r_hat,
            t_freq_us=self.searches[-1]["t_freq_us"],
            t_br_us=now - self._refine_done_at,
            tunings=self.searches[-1]["tunings"],
            done_at_us=now,
        )
        self.results.append(result)
        node.emit("rfquack/out/guessing/result", result.to_wire())
        self._track_started = now
        self.state = TRACKING

    def on_packet_received(self, node, pkt):
        if self.state == TRACKING and pkt.rx_radio == self.radio_id:
            fe = self._frontend(node)
            self._restart(fe)
        return pkt

    # -- commands ----------------------------------------------------------------

    def on_user_command(self, node, verb, fields):
        if verb == "start":
            if "radio" in fields:
                self.radio_id = fields["radio"]
            cfg = self.start(node)
            return {"state": self.state, "regions": len(cfg.region_centers())}
        if verb == "stop":
            self.stop(node)
            return {"state": self.state}
        if verb == "status":
            last = self.results[-1].to_wire() if self.results else None
            return {"state": self.state, "results": len(self.results),
                    "last": last,
                    "startFreq": self.start_hz, "endFreq": self.end_hz,
                    "samplingBitrate": self.sampling_bitrate}
        if verb == "set":
            if "start_freq" in fields:
                self.start_hz = int(fields["start_freq"])
            if "end_freq" in fields:
                self.end_hz = int(fields["end_freq"])
            if "sampling_bitrate" in fields:
                self.sampling_bitrate = int(fields["sampling_bitrate"])
            if "radio" in fields:
                self.radio_id = fields["radio"]
            return {"startFreq": self.start_hz, "endFreq": self.end_hz,
                    "samplingBitrate": self.sampling_bitrate,
                    "radio": self.radio_id}
        raise UnknownCommandError(verb)

    def commands(self):
        return {
            "start": {"radio": field("str")},
            "stop": {},
            "status": {},
            "set": {"start_freq": field("float"), "end_freq": field("float"),
                    "sampling_bitrate": field("float"), "radio": field("str")},
        }

    def events(self):
        return {"result": {
            "freqHat": field("int"), "bitrateHat": field("float"),
            "tFreqUs": field("int"), "tBrUs": field("int"),
            "tunings": field("int"), "doneAtUs": field("int"),
        }}
