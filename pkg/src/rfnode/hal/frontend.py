"""One virtual transceiver attached to the simulated channel.

Reception model (packet level): a completed on-air frame turns into a
Packet when the radio was in a receive mode before the frame's sync word
started, the emission sits inside the passband above squelch, no other
overlapping emission comes within 6 dB of it in-band (capture margin), and
the configured bitrate is within 300 bps of the emission's.  RX mode
additionally requires a sync-word match, unframes fixed/variable packet
formats and verifies the CRC when enabled.  Promiscuous mode returns the
raw bytes from the sync word on, chunked to the packet length.

Within the 300 bps window the demodulator is assumed to track the sender's
clock, so payload bytes come back exactly; beyond it the frame is lost.
Symbol-level sampling (read_symbols) never assumes tracking: it returns the
raw hard decisions the bitrate estimator feeds on.

Tuning charges the timing model to the virtual clock: hop + driver
transaction, plus one calibration per new frequency (calibrations are
cached, and can be pre-warmed for a planned scan range).
"""

from rfnode.crc import crc16_bytes
from rfnode.env.channel import RfChannel
from rfnode.env.emission import US, Emission
from rfnode.hal.config import (
    PACKET_FIXED,
    PACKET_VARIABLE,
    default_config,
    validate_and_quantize,
)
from rfnode.hal.errors import OversizePayloadError, RadioError
from rfnode.hal.packet import Packet
from rfnode.hal.profiles import FrontendProfile
from rfnode.hal.registers import RegisterFile

MODE_IDLE = "IDLE"
MODE_RX = "RX"
MODE_TX = "TX"
MODE_PROMISCUOUS = "PROMISCUOUS"
MODE_JAM = "JAM"
MODES = (MODE_IDLE, MODE_RX, MODE_TX, MODE_PROMISCUOUS, MODE_JAM)

BITRATE_TOLERANCE_BPS = 300
CAPTURE_MARGIN_DB = 6.0


class VirtualFrontend:
    def __init__(self, radio_id: str, profile: FrontendProfile, channel: RfChannel):
        self.radio_id = radio_id
        self.profile = profile
        self.channel = channel
        self.config = default_config(profile)
        self.registers = RegisterFile(profile)
        self.registers.sync_config(self.config)
        self.mode = MODE_IDLE
        self.mode_entered_at = channel.clock.now
        self._last_poll = channel.clock.now
        self._cal_cache: set[int] = set()
        self._sample_anchor = channel.clock.now
        self._samples_consumed = 0
        self.counters = {"rx_packets": 0, "tx_frames": 0, "crc_failures": 0}

    @property
    def clock(self):
        return self.channel.clock

    def _charge(self, dt_us: int):
        if dt_us:
            self.channel.advance(dt_us)

    # -- mode ---------------------------------------------------------------

    def set_mode(self, mode: str):
        if mode not in MODES:
            raise RadioError(f"unknown mode {mode!r}")
        if mode == self.mode:
            return self.mode
        if self.mode == MODE_JAM:
            self.channel.cancel_source(self._source_tag())
        self._charge(self.profile.timing.t_driver_us)
        self.mode = mode
        self.mode_entered_at = self.clock.now
        if mode in (MODE_RX, MODE_PROMISCUOUS):
            self._last_poll = self.clock.now
            self.reset_sampling()
        if mode == MODE_JAM:
            self.channel.add_emission(Emission(
                carrier_hz=self.config.carrier_hz,
                bitrate_bps=self.config.bitrate_bps,
                power_dbm=self.config.tx_power_dbm,
                payload=b"", sync_word=b"", preamble_len=0,
                start_us=self.clock.now, continuous=True,
                source=self._source_tag(),
            ))
        return self.mode

    def _source_tag(self) -> str:
        return f"radio:{self.radio_id}"

    # -- config and registers -------------------------------------------------

    def set_modem_config(self, **fields) -> list:
        """Apply a partial config; returns the names actually applied."""
        quantized = validate_and_quantize(self.profile, fields)
        applied = []
        retune = False
        for name, value in quantized.items():
            if getattr(self.config, name) != value:
                setattr(self.config, name, value)
            applied.append(name)
            if name == "carrier_hz":
                retune = True
        if not applied:
            return applied
        self.registers.sync_config(self.config)
        t = self.profile.timing
        if retune:
            cost = t.t_hop_us + t.t_driver_us
            if self.config.carrier_hz not in self._cal_cache:
                self._cal_cache.add(self.config.carrier_hz)
                cost += t.t_cal_us
            self._charge(cost)
        else:
            self._charge(t.t_driver_us)
        return applied

    def warm_calibration(self, freqs) -> int:
        """Pre-compute calibrations for a known frequency plan."""
        step = self.profile.carrier_step_hz
        misses = 0
        for f in freqs:
            hz = int(round(f / step)) * step
            if hz not in self._cal_cache:
                self._cal_cache.add(hz)
                misses += 1
        self._charge(misses * self.profile.timing.t_cal_us)
        return misses

    def get_register(self, addr: int) -> int:
        return self.registers.read(addr)

    def set_register(self, addr: int, value: int):
        self.registers.write(addr, value)
        self.registers.apply_write(addr, self.config)

    # -- RSSI -----------------------------------------------------------------

    def read_rssi(self) -> float:
        self._charge(self.profile.timing.t_rssi_us)
        obs = self.channel.observe_rssi(
            self.config.carrier_hz, self.config.rx_bandwidth_hz)
        return obs.value

    # -- TX ---------------------------------------------------------------------

    def transmit(self, data: bytes, repeat: int = 1, gap_us: int = 2000):
        cfg = self.config
        if cfg.packet_len_mode == PACKET_FIXED:
            if len(data) != cfg.packet_len:
                raise OversizePayloadError(
                    f"fixed packet length is {cfg.packet_len}, got {len(data)}")
            onair = bytes(data)
        else:
            if len(data) > cfg.packet_len:
                raise OversizePayloadError(
                    f"payload {len(data)} exceeds max {cfg.packet_len}")
            onair = bytes([len(data)]) + bytes(data)
        if len(data) > self.profile.fifo_bytes:
            raise OversizePayloadError("payload exceeds FIFO size")
        if cfg.crc_enabled:
            onair += crc16_bytes(onair)
        if self.mode != MODE_TX:
            self.set_mode(MODE_TX)
        self._charge(self.profile.timing.t_driver_us)
        emission = Emission(
            carrier_hz=cfg.carrier_hz,
            bitrate_bps=cfg.bitrate_bps,
            power_dbm=cfg.tx_power_dbm,
            payload=onair,
            sync_word=cfg.sync_word,
            preamble_len=cfg.preamble_len,
            start_us=self.clock.now,
            repeat_count=max(0, int(repeat)),
            gap_us=gap_us,
            source=self._source_tag(),
        )
        if emission.repeat_count > 0:
            self.channel.add_emission(emission)
            self.counters["tx_frames"] += emission.repeat_count
        return emission

    # -- RX ---------------------------------------------------------------------

    def poll_reception(self) -> list:
        """Completed frames since the last poll, as Packets."""
        now = self.clock.now
        if self.mode not in (MODE_RX, MODE_PROMISCUOUS):
            self._last_poll = now
            return []
        out = []
        since = self._last_poll
        for e in self.channel.emissions:
            if e.continuous or e.source == self._source_tag():
                continue
            for (ws, we) in e.windows():
                if we is None or we <= since or we > now:
                    continue
                pkts = self._receive_window(e, ws, we)
                if pkts:
                    out.extend(pkts)
        self._last_poll = now
        self.counters["rx_packets"] += len(out)
        return out

    def _receive_window(self, e: Emission, ws: int, we: int):
        cfg = self.config
        if self.mode_entered_at > ws + e.sync_start_us:
            return []
        offset = abs(e.carrier_hz - cfg.carrier_hz)
        if offset > cfg.rx_bandwidth_hz / 2:
            return []
        power = self.channel.inband_power_dbm(
            e, cfg.carrier_hz, cfg.rx_bandwidth_hz)
        if power is None or power < self.channel.squelch_dbm:
            return []
        for other in self.channel._overlapping(ws, we, exclude=e):
            if other.source == self._source_tag():
                continue
            p = self.channel.inband_power_dbm(
                other, cfg.carrier_hz, cfg.rx_bandwidth_hz)
            if p is not None and p >= power - CAPTURE_MARGIN_DB:
                return []
        if abs(e.bitrate_bps - cfg.bitrate_bps) > BITRATE_TOLERANCE_BPS:
            return []
        rssi = power + self.channel._noise_db(we, cfg.carrier_hz)
        if self.mode == MODE_RX:
            data = self._unframe(e)
            if data is None:
                return []
            return [self._packet(data, rssi, we)]
        raw = e.sync_word + e.payload
        return [self._packet(chunk, rssi, we) for chunk in self._chunk(raw)]

    def _unframe(self, e: Emission):
        cfg = self.config
        if e.sync_word != cfg.sync_word:
            return None
        payload = e.payload
        if cfg.crc_enabled:
            if len(payload) < 2 or crc16_bytes(payload[:-2]) != payload[-2:]:
                self.counters["crc_failures"] += 1
                return None
            payload = payload[:-2]
        if cfg.packet_len_mode == PACKET_VARIABLE:
            if not payload:
                return None
            n = payload[0]
            body = payload[1:]
            if n > cfg.packet_len or n > len(body):
                return None
            return body[:n]
        if len(payload) != cfg.packet_len:
            return None
        return payload

    def _chunk(self, raw: bytes):
        size = self.config.packet_len
        chunks = []
        for i in range(0, len(raw), size):
            piece = raw[i:i + size]
            if self.config.packet_len_mode == PACKET_FIXED and len(piece) < size:
                piece = piece.ljust(size, b"\x00")
            chunks.append(piece)
        return chunks

    def _packet(self, data: bytes, rssi: float, at_us: int) -> Packet:
        return Packet(
            data=data, rx_radio=self.radio_id,
            carrier_freq=self.config.carrier_hz,
            bit_rate=self.config.bitrate_bps,
            rssi=rssi, millis=at_us // 1000,
        )

    # -- raw symbols -------------------------------------------------------------

    def reset_sampling(self):
        self._sample_anchor = self.clock.now
        self._samples_consumed = 0

    def read_symbols(self, limit: int = 4096) -> bytes:
        """New hard-decision samples at the configured bitrate since the anchor."""
        if self.mode != MODE_PROMISCUOUS:
            return b""
        rate = self.config.bitrate_bps
        total = (self.clock.now - self._sample_anchor) * rate // US
        total = min(total, self._samples_consumed + limit)
        if total <= self._samples_consumed:
            return b""
        stream = self.channel.observe_symbols(
            self.config.carrier_hz, self.config.rx_bandwidth_hz, rate,
            self._sample_anchor, total)
        chunk = stream[self._samples_consumed:]
        self._samples_consumed = total
        return chunk

    # -- status --------------------------------------------------------------------

    def status(self) -> dict:
        cfg = self.config
        return {
            "mode": self.mode,
            "carrierFreq": cfg.carrier_hz,
            "bitRate": cfg.bitrate_bps,
            "rxBandwidth": cfg.rx_bandwidth_hz,
            "txPower": cfg.tx_power_dbm,
            "syncWord": cfg.sync_word.hex(),
            "preambleLen": cfg.preamble_len,
            "isFixedPacketLen": cfg.packet_len_mode == PACKET_FIXED,
            "packetLen": cfg.packet_len,
            "crcEnabled": cfg.crc_enabled,
            "isPromiscuous": cfg.is_promiscuous,
            "counters": dict(self.counters),
        }
