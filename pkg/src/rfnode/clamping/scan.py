"""Carrier search: coarse region scan, then bandwidth-halving refinement.

Region scan: with the widest filter B, region centers sit at
f_i = f_start + i * ((1 - c) / 2) * B for i = 0..N, where c is the
region-overlap ratio; N is minimal such that the last passband reaches
f_end.  One RSSI sample per region, most active region wins, ties go to
the lower frequency.  In early-stop mode (the live coordinator) the scan
reacts as soon as a region exceeds the activity threshold and hill-climbs
to the local RSSI peak instead of finishing the pass, which keeps the
reaction latency inside one pass period.

Refinement: starting from the winning region (domain = B around its
center), each level halves the receive bandwidth down the profile's filter
ladder and considers three overlapping sub-regions: left and right centers
at +-(D - W)/2 (their passbands tile the domain exactly) and the middle at
the current center.  Two RSSI probes (the sides) decide against the
reference power the carrier showed at the previous level: a side wins only
when it sees the carrier at full passband power and clearly beats the
other side; both sides attenuated (or a near-tie) means the carrier sits
by the center, so the middle sub-region wins without its own probe.  The
decision margins scale with the channel's RSSI noise sigma, which keeps
noiseless decisions exact and the carrier inside the active passband at
every level.  Two probes per level keep a full search within 25
region-probe budgets over a 5 MHz range.
"""

from dataclasses import dataclass

from rfnode.hal.frontend import VirtualFrontend

NOTHING_FOUND = "nothing"

# Decision margin per unit of RSSI noise sigma.  Noise draws are truncated
# at 3 sigma, so a 6-sigma margin can never reject a genuinely flat reading
# against a flat reference; with sigma 0 all decisions are exact.
MARGIN_SIGMAS = 6.0

# A climb that never advanced past its first active region may sit on the
# far rolloff of a peak the pass already walked over; a reading this far
# above its upper neighbour marks that case, and a weak band-edge peak is
# treated the same way.
SUSPICION_GAP_DB = 12.0
WEAK_PEAK_MARGIN_DB = 25.0


@dataclass
class ScanConfig:
    start_hz: int
    end_hz: int
    widest_filter_hz: int
    overlap_ratio: float = 0.25
    min_rssi_delta_db: float = 10.0

    def __post_init__(self):
        if not self.start_hz < self.end_hz:
            raise ValueError("start_hz must be below end_hz")
        if not 0.0 < self.overlap_ratio < 1.0:
            raise ValueError("overlap ratio must be in (0, 1)")

    @property
    def region_step_hz(self) -> float:
        return (1.0 - self.overlap_ratio) / 2.0 * self.widest_filter_hz

    def region_centers(self) -> list:
        step = self.region_step_hz
        half = self.widest_filter_hz / 2.0
        span = self.end_hz - self.start_hz
        n = 0
        while self.start_hz + n * step + half < self.end_hz:
            n += 1
        return [int(round(self.start_hz + i * step)) for i in range(n + 1)]

    def threshold_dbm(self, noise_floor_dbm: float) -> float:
        return noise_floor_dbm + self.min_rssi_delta_db


@dataclass
class RegionResult:
    center_hz: int
    rssi_dbm: float


class RegionScanState:
    """One RSSI probe per step; drives either a full pass or early-stop.

    Early-stop mode reacts at the first region above threshold and climbs
    to the local peak.  A transmission that starts while the pass is
    already beyond its plateau is first seen on the peak's far rolloff;
    when the climb stalls on its very first active region with a large gap
    to its upper neighbour, the scan re-probes downward (those regions were
    only seen before the signal existed) until the readings fall again.
    """

    def __init__(self, cfg: ScanConfig, early_stop: bool = False):
        self.cfg = cfg
        self.centers = cfg.region_centers()
        self.early_stop = early_stop
        self.idx = 0
        self.best = None            # RegionResult
        self.first_active_idx = None
        self.peak_idx = None
        self.descending = False
        self.probes = 0
        self.started_at = None

    def step(self, fe: VirtualFrontend):
        """Returns None while scanning, NOTHING_FOUND, or a RegionResult."""
        if self.started_at is None:
            self.started_at = fe.clock.now
        if self.descending:
            return self._step_down(fe)
        if self.idx >= len(self.centers):
            return self._finish(fe)
        rssi = self._probe(fe, self.idx)
        threshold = self.cfg.threshold_dbm(fe.channel.noise_floor_dbm)
        if self.best is None or rssi > self.best.rssi_dbm:
            new_peak = True
            self.best = RegionResult(self.centers[self.idx], rssi)
            self.peak_idx = self.idx
        else:
            new_peak = False
        if self.early_stop and rssi >= threshold and self.first_active_idx is None:
            self.first_active_idx = self.idx
        self.idx += 1
        if self.early_stop and self.first_active_idx is not None:
            boundary = self.idx >= len(self.centers)
            if not new_peak or boundary:
                gap = self.best.rssi_dbm - rssi if not new_peak else None
                return self._settle(fe, gap, threshold)
        if self.idx >= len(self.centers):
            return self._finish(fe)
        return None

    def _probe(self, fe: VirtualFrontend, idx: int) -> float:
        fe.set_modem_config(carrier_hz=self.centers[idx],
                            rx_bandwidth_hz=self.cfg.widest_filter_hz)
        self.probes += 1
        return fe.read_rssi()

    def _settle(self, fe, gap, threshold):
        """Climb stalled (or hit the band edge): peak found, unless the
        climb never advanced and looks like a far-rolloff artifact."""
        suspicious = self.peak_idx == self.first_active_idx and (
            gap > SUSPICION_GAP_DB if gap is not None
            else self.best.rssi_dbm < threshold + WEAK_PEAK_MARGIN_DB)
        if suspicious and self.peak_idx > 0:
            self.descending = True
            self.idx = self.peak_idx - 1
            return None
        return self.best

    def _step_down(self, fe: VirtualFrontend):
        rssi = self._probe(fe, self.idx)
        if rssi > self.best.rssi_dbm:
            self.best = RegionResult(self.centers[self.idx], rssi)
            self.peak_idx = self.idx
            if self.idx > 0:
                self.idx -= 1
                return None
        return self.best

    def _finish(self, fe: VirtualFrontend):
        threshold = self.cfg.threshold_dbm(fe.channel.noise_floor_dbm)
        if self.best is not None and self.best.rssi_dbm >= threshold:
            return self.best
        return NOTHING_FOUND


class TrichotomicRefineState:
    """Two side probes per level, decided against the parent's reading."""

    def __init__(self, cfg: ScanConfig, center_hz: int, profile,
                 ref_rssi_dbm: float = None):
        self.cfg = cfg
        self.profile = profile
        self.center = int(center_hz)
        self.domain = cfg.widest_filter_hz
        self.width = profile.halve_bandwidth(self.domain)
        self.ref = ref_rssi_dbm
        self.left_rssi = None
        self.probes = 0

    def _side_offset(self) -> int:
        return int(round((self.domain - self.width) / 2))

    def step(self, fe: VirtualFrontend):
        """None while refining, NOTHING_FOUND if the signal vanished,
        otherwise the final frequency estimate in Hz."""
        if self.width is None:
            return self.center
        s = self._side_offset()
        if self.left_rssi is None:
            fe.set_modem_config(carrier_hz=self.center - s,
                                rx_bandwidth_hz=self.width)
            self.left_rssi = fe.read_rssi()
            self.probes += 1
            return None
        fe.set_modem_config(carrier_hz=self.center + s,
                            rx_bandwidth_hz=self.width)
        right = fe.read_rssi()
        self.probes += 1
        left = self.left_rssi
        self.left_rssi = None
        margin = MARGIN_SIGMAS * fe.channel.rssi_noise_sigma_db
        if self.ref is None:
            self.ref = max(left, right)
        strongest = max(left, right)
        if strongest >= self.ref - margin and abs(left - right) > margin:
            # one side sees the carrier flat: recurse into it
            self.center += s if right > left else -s
            self.ref = strongest
        else:
            # both sides attenuated or tied: the middle holds the carrier,
            # unless the signal is gone entirely.  Deep two-sided rolloff and
            # silence look alike, so spend one middle probe to tell them apart.
            threshold = self.cfg.threshold_dbm(fe.channel.noise_floor_dbm)
            if strongest < threshold:
                fe.set_modem_config(carrier_hz=self.center,
                                    rx_bandwidth_hz=self.width)
                self.probes += 1
                if fe.read_rssi() < threshold:
                    return NOTHING_FOUND
        self.domain = self.width
        self.width = self.profile.halve_bandwidth(self.domain)
        if self.width is None:
            return self.center
        return None


@dataclass
class SearchResult:
    freq_hat_hz: int
    tunings: int
    t_freq_us: int
    scan_rssi_dbm: float


def region_scan(fe: VirtualFrontend, cfg: ScanConfig, early_stop: bool = False):
    """Blocking region scan; RegionResult or NOTHING_FOUND."""
    state = RegionScanState(cfg, early_stop=early_stop)
    while True:
        outcome = state.step(fe)
        if outcome is not None:
            return outcome, state.probes


def trichotomic_refine(fe: VirtualFrontend, cfg: ScanConfig, center_hz: int,
                       ref_rssi_dbm: float = None):
    """Blocking refinement; final Hz estimate or NOTHING_FOUND."""
    state = TrichotomicRefineState(cfg, center_hz, fe.profile, ref_rssi_dbm)
    while True:
        outcome = state.step(fe)
        if outcome is not None:
            return outcome, state.probes


def calibration_plan(cfg: ScanConfig, profile) -> list:
    """All frequencies a search may visit, for calibration pre-warming."""
    freqs = set()

    def walk(center: int, domain: int):
        width = profile.halve_bandwidth(domain)
        if width is None:
            return
        s = int(round((domain - width) / 2))
        for c in (center - s, center, center + s):
            freqs.add(c)
            walk(c, width)

    for center in cfg.region_centers():
        freqs.add(center)
        walk(center, cfg.widest_filter_hz)
    return sorted(freqs)


def run_search(fe: VirtualFrontend, cfg: ScanConfig, early_stop: bool = True):
    """One scan + refine pass; SearchResult, or None when the band is quiet."""
    t0 = fe.clock.now
    region, scan_probes = region_scan(fe, cfg, early_stop=early_stop)
    if region is NOTHING_FOUND:
        return None
    freq, refine_probes = trichotomic_refine(fe, cfg, region.center_hz,
                                             region.rssi_dbm)
    if freq is NOTHING_FOUND:
        return None
    return SearchResult(
        freq_hat_hz=freq,
        tunings=scan_probes + refine_probes,
        t_freq_us=fe.clock.now - t0,
        scan_rssi_dbm=region.rssi_dbm,
    )
