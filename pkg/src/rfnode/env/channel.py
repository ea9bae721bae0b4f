"""Deterministic simulated RF channel.

Model, in short:

* Receiver filter: ideal flat passband of the configured width, then a
  linear 60 dB rolloff over one extra half-bandwidth, then nothing.  An
  emission offset beyond a full bandwidth from the tuned frequency
  contributes no energy at all.
* RSSI: peak envelope power over the frame-active window of the strongest
  in-band emission, combined with the noise floor, plus seeded Gaussian
  noise in dB (truncated at 3 sigma) keyed by (seed, instant, tuned).
* Symbols: hard OOK decisions on a sampling grid; 1 iff some in-band
  emission is keying a 1 bit at that instant with power above squelch.
  Symbol sampling is exact integer arithmetic and carries no RSSI noise.
* Receivers: actor devices attached to the channel get completed frames
  delivered as virtual time advances, unless an interfering emission sat
  above their squelch during the frame (jamming).

Everything is driven by one caller on one strand; two runs with the same
scenario and seed replay identical observations byte for byte.
"""

import random
from dataclasses import dataclass

from rfnode import kernels
from rfnode.env.clock import VirtualClock
from rfnode.env.emission import Emission, US

ROLLOFF_DB = 60.0

# Emissions whose last repeat ended this far in the past are dropped.
RETENTION_US = 2_000_000


@dataclass
class RssiObservation:
    value: float        # dBm
    at: int             # us
    tuned: int          # Hz
    bandwidth: int      # Hz


def filter_attenuation_db(offset_hz: float, bandwidth_hz: float):
    """Piecewise passband model; None means fully rejected."""
    offset = abs(offset_hz)
    half = bandwidth_hz / 2.0
    if offset <= half:
        return 0.0
    if offset < bandwidth_hz:
        return ROLLOFF_DB * (offset - half) / half
    return None


class UnknownActorError(KeyError):
    pass


class RfChannel:
    def __init__(self, clock: VirtualClock, seed: int = 0,
                 noise_floor_dbm: float = -100.0,
                 rssi_noise_sigma_db: float = 1.0,
                 squelch_margin_db: float = 10.0):
        self.clock = clock
        self.seed = seed
        self.noise_floor_dbm = noise_floor_dbm
        self.rssi_noise_sigma_db = rssi_noise_sigma_db
        self.squelch_margin_db = squelch_margin_db
        self.emissions: list[Emission] = []
        self.receivers: dict[str, object] = {}
        self.reception_log: list[dict] = []
        self._delivered_until = clock.now
        # emissions scheduled in the future, activated as time reaches them,
        # so long actor schedules do not burden every observation
        self._future: list[Emission] = []
        self._future_pos = 0
        self._future_dirty = False

    # -- configuration ----------------------------------------------------

    @property
    def squelch_dbm(self) -> float:
        return self.noise_floor_dbm + self.squelch_margin_db

    def add_emission(self, emission: Emission) -> Emission:
        if emission.start_us > self.clock.now:
            self._future.append(emission)
            self._future_dirty = True
        else:
            self.emissions.append(emission)
        return emission

    def _activate(self, now: int):
        if self._future_dirty:
            del self._future[: self._future_pos]
            self._future_pos = 0
            self._future.sort(key=lambda e: e.start_us)
            self._future_dirty = False
        fut = self._future
        pos = self._future_pos
        while pos < len(fut) and fut[pos].start_us <= now:
            self.emissions.append(fut[pos])
            pos += 1
        self._future_pos = pos
        if pos > 4096:
            del fut[:pos]
            self._future_pos = 0

    def cancel_source(self, source: str):
        """Stop continuous emissions from a source (jam off)."""
        self.emissions = [
            e for e in self.emissions if not (e.continuous and e.source == source)
        ]

    def attach_receiver(self, actor):
        if actor.actor_id in self.receivers:
            raise ValueError(f"duplicate actor id {actor.actor_id!r}")
        self.receivers[actor.actor_id] = actor

    # -- power ------------------------------------------------------------

    def inband_power_dbm(self, emission: Emission, tuned_hz: float, bandwidth_hz: float):
        att = filter_attenuation_db(emission.carrier_hz - tuned_hz, bandwidth_hz)
        if att is None:
            return None
        return emission.power_dbm - att

    def _noise_db(self, at_us: int, tuned_hz: int) -> float:
        sigma = self.rssi_noise_sigma_db
        if sigma <= 0:
            return 0.0
        key = (self.seed * 1_000_003 + at_us) * 1_000_003 + int(tuned_hz)
        draw = random.Random(key).gauss(0.0, sigma)
        return max(-3.0 * sigma, min(3.0 * sigma, draw))

    def observe_rssi(self, tuned_hz: int, bandwidth_hz: int, at_us=None) -> RssiObservation:
        at = self.clock.now if at_us is None else at_us
        self._activate(at)
        value = self.noise_floor_dbm
        for e in self.emissions:
            if not e.active_at(at):
                continue
            p = self.inband_power_dbm(e, tuned_hz, bandwidth_hz)
            if p is not None and p > value:
                value = p
        value += self._noise_db(at, tuned_hz)
        return RssiObservation(value=value, at=at, tuned=tuned_hz, bandwidth=bandwidth_hz)

    # -- symbols ----------------------------------------------------------

    def observe_symbols(self, tuned_hz: int, bandwidth_hz: int, sample_rate: int,
                        from_us: int, n: int) -> bytes:
        """n hard OOK decisions sampled at sample_rate starting at from_us."""
        if sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        out = bytearray(n)
        self._activate(from_us + -(-n * US // sample_rate))
        span_end_num = from_us * sample_rate + n * US  # in 1/sample_rate us units
        for e in self.emissions:
            p = self.inband_power_dbm(e, tuned_hz, bandwidth_hz)
            if p is None or p < self.squelch_dbm:
                continue
            for (ws, we) in e.windows():
                if we is not None and we * sample_rate <= from_us * sample_rate:
                    continue
                if ws * sample_rate >= span_end_num:
                    break
                j_lo = max(0, -((ws - from_us) * sample_rate // -US))
                if we is None:
                    j_hi = n
                else:
                    j_hi = min(n, -((we - from_us) * sample_rate // -US))
                if j_hi <= j_lo:
                    continue
                if e.continuous:
                    for j in range(j_lo, j_hi):
                        out[j] = 1
                    continue
                chunk = kernels.sample_emission(
                    e.frame_bits, e.bitrate_bps, sample_rate,
                    from_us - ws, j_lo, j_hi - j_lo,
                )
                for j, bit in enumerate(chunk, start=j_lo):
                    if bit:
                        out[j] = 1
        return bytes(out)

    # -- time and receiver delivery ---------------------------------------

    def advance(self, dt_us: int) -> int:
        now = self.clock.advance(dt_us)
        self._activate(now)
        self._deliver_frames(self._delivered_until, now)
        self._delivered_until = now
        self._prune(now)
        return now

    def _overlapping(self, a: int, b: int, exclude: Emission):
        """Emissions with any on-air window intersecting [a, b)."""
        for e in self.emissions:
            if e is exclude:
                continue
            for (ws, we) in e.windows():
                if ws >= b:
                    break
                if we is None or we > a:
                    yield e
                    break

    def _deliver_frames(self, t0: int, t1: int):
        if not self.receivers:
            return
        for e in self.emissions:
            if e.continuous:
                continue
            for (ws, we) in e.windows():
                if we is None or we <= t0 or we > t1:
                    continue
                for rx in self.receivers.values():
                    p = self.inband_power_dbm(e, rx.carrier_hz, rx.bandwidth_hz)
                    if p is None or p < rx.squelch_dbm:
                        continue
                    jammed = any(
                        (ip := self.inband_power_dbm(o, rx.carrier_hz, rx.bandwidth_hz))
                        is not None and ip >= rx.squelch_dbm
                        for o in self._overlapping(ws, we, exclude=e)
                    )
                    self._log_delivery(rx, e.payload, we, jammed)

    def _log_delivery(self, rx, payload: bytes, at: int, jammed: bool):
        if jammed:
            entry = {"actor": rx.actor_id, "at": at, "accepted": False,
                     "reason": "jammed"}
        else:
            accepted, reason, code = rx.process(payload, at)
            entry = {"actor": rx.actor_id, "at": at, "accepted": accepted,
                     "reason": reason, "code": code}
        self.reception_log.append(entry)

    def receiver_accepts(self, actor_id: str, payload: bytes, at_us=None) -> bool:
        """Direct delivery query against one receiver actor."""
        if actor_id not in self.receivers:
            raise UnknownActorError(actor_id)
        rx = self.receivers[actor_id]
        at = self.clock.now if at_us is None else at_us
        self._activate(at)
        jammed = any(
            e.active_at(at)
            and (p := self.inband_power_dbm(e, rx.carrier_hz, rx.bandwidth_hz)) is not None
            and p >= rx.squelch_dbm
            for e in self.emissions
        )
        if jammed:
            self.reception_log.append(
                {"actor": actor_id, "at": at, "accepted": False, "reason": "jammed"})
            return False
        accepted, reason, code = rx.process(payload, at)
        self.reception_log.append(
            {"actor": actor_id, "at": at, "accepted": accepted,
             "reason": reason, "code": code})
        return accepted

    def accepted_events(self, actor_id: str):
        return [r for r in self.reception_log
                if r["actor"] == actor_id and r["accepted"]]

    def _prune(self, now: int):
        horizon = now - RETENTION_US
        if horizon <= 0:
            return
        keep = []
        for e in self.emissions:
            end = e.last_end_us()
            if end is None or end >= horizon:
                keep.append(e)
        if len(keep) != len(self.emissions):
            self.emissions = keep
