import random
from itertools import groupby

import pytest

from rfnode.clamping import (
    COUNT_ALL_ONES,
    BitrateEstimatorConfig,
    NOTHING_FOUND,
    ScanConfig,
    SymbolAccumulator,
    TrichotomicRefineState,
    estimate_bitrate,
    region_scan,
    run_search,
    trichotomic_refine,
)
from rfnode.clamping.scan import calibration_plan
from rfnode.env.channel import RfChannel
from rfnode.env.clock import VirtualClock
from rfnode.env.emission import Emission
from rfnode.hal import RadioProxy


def make_rig(sigma=0.0, seed=0):
    channel = RfChannel(VirtualClock(), seed=seed, noise_floor_dbm=-100.0,
                        rssi_noise_sigma_db=sigma)
    proxy = RadioProxy()
    fe = proxy.attach("radioA", "vc1101", channel)
    return channel, fe


def beacon(carrier, power=-45.0):
    return Emission(carrier_hz=carrier, bitrate_bps=3400, power_dbm=power,
                    payload=b"", preamble_len=8, start_us=0, continuous=True,
                    source="beacon")


def default_cfg():
    return ScanConfig(start_hz=432_000_000, end_hz=437_000_000,
                      widest_filter_hz=812_000)


# -- region scan --------------------------------------------------------------

def test_region_center_formula():
    cfg = default_cfg()
    centers = cfg.region_centers()
    # f_i = f_o + i * ((1 - c) / 2) * B_max, c = 0.25, B_max = 812 kHz
    assert centers[0] == 432_000_000
    assert centers[1] == 432_000_000 + 304_500
    for i, c in enumerate(centers):
        assert c == 432_000_000 + i * 304_500
    # 17 regions cover 5 MHz
    assert len(centers) == 17
    assert centers[-1] + 406_000 >= 437_000_000
    assert centers[-2] + 406_000 < 437_000_000


def test_region_scan_budget_17_tunings():
    channel, fe = make_rig()
    outcome, probes = region_scan(fe, default_cfg())
    assert probes <= 17
    assert outcome is NOTHING_FOUND


def test_region_scan_finds_emission_region():
    channel, fe = make_rig()
    channel.add_emission(beacon(433_920_000))
    outcome, probes = region_scan(fe, default_cfg())
    assert outcome is not NOTHING_FOUND
    assert abs(outcome.center_hz - 433_920_000) <= 406_000
    assert probes == 17


def test_region_scan_ties_break_lower():
    channel, fe = make_rig(sigma=0.0)
    channel.add_emission(beacon(433_920_000))
    outcome, _ = region_scan(fe, default_cfg())
    # lowest region whose flat passband holds the carrier
    centers = [c for c in default_cfg().region_centers()
               if abs(c - 433_920_000) <= 406_000]
    assert outcome.center_hz == min(centers)


def test_region_scan_early_stop_uses_fewer_probes():
    channel, fe = make_rig()
    channel.add_emission(beacon(433_000_000))
    outcome, probes = region_scan(fe, default_cfg(), early_stop=True)
    assert outcome is not NOTHING_FOUND
    assert probes < 17


# -- trichotomic refinement -----------------------------------------------------

def test_refinement_noiseless_error_bound_sweep():
    rng = random.Random(11)
    cfg = default_cfg()
    for _ in range(40):
        carrier = rng.randrange(432_300_000, 436_700_000, 100)
        channel, fe = make_rig(sigma=0.0)
        channel.add_emission(beacon(carrier))
        region, _ = region_scan(fe, cfg)
        freq, probes = trichotomic_refine(fe, cfg, region.center_hz)
        assert freq is not NOTHING_FOUND
        assert abs(freq - carrier) <= 29_000
        assert probes == 8   # two probes per ladder level: 406/203/102/58 kHz


def test_refinement_bracket_invariant():
    rng = random.Random(23)
    cfg = default_cfg()
    for _ in range(20):
        carrier = rng.randrange(432_300_000, 436_700_000, 100)
        channel, fe = make_rig(sigma=0.0)
        channel.add_emission(beacon(carrier))
        region, _ = region_scan(fe, cfg)
        state = TrichotomicRefineState(cfg, region.center_hz, fe.profile)
        assert abs(carrier - state.center) <= state.domain / 2
        while True:
            out = state.step(fe)
            if out is None:
                if state.left_rssi is None:   # a level just concluded
                    assert abs(carrier - state.center) <= state.domain / 2
                continue
            assert out is not NOTHING_FOUND
            assert abs(carrier - out) <= 29_000
            break


def test_refinement_aborts_when_signal_vanishes():
    channel, fe = make_rig()
    e = beacon(434_000_000)
    channel.add_emission(e)
    cfg = default_cfg()
    region, _ = region_scan(fe, cfg)
    channel.emissions.clear()
    freq, _ = trichotomic_refine(fe, cfg, region.center_hz)
    assert freq is NOTHING_FOUND


def test_full_search_budget():
    channel, fe = make_rig(sigma=1.0, seed=5)
    channel.add_emission(beacon(436_700_000))   # worst case: top of the range
    fe.warm_calibration(calibration_plan(default_cfg(), fe.profile))
    res = run_search(fe, default_cfg())
    assert res is not None
    assert res.tunings <= 87
    assert res.tunings <= 25
    assert res.t_freq_us <= 25_000


# -- bitrate estimation -----------------------------------------------------------

def eq1_oracle(samples, r_o):
    """Independent run-length histogram estimator (interior runs, both symbols)."""
    runs = [(k, len(list(g))) for k, g in groupby(samples)]
    interior = runs[1:-1]
    if len(interior) < 2:
        return None
    return r_o * len(interior) / sum(n for _, n in interior)


def test_worked_example_over_one_runs():
    bits = bytes([1, 0, 0, 1, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 1, 1, 1])
    r_o = 9000
    # weights: 1*1 + 3*2 + 2*1 over the 1-runs, divided by 1 + 2 + 1
    assert estimate_bitrate(bits, r_o, counting=COUNT_ALL_ONES) == r_o * 4 / 9


def test_integer_oversampling_is_exact():
    channel, fe = make_rig()
    channel.add_emission(Emission(
        carrier_hz=433_920_000, bitrate_bps=5000, power_dbm=-40.0,
        payload=b"", preamble_len=64, start_us=0, source="x"))
    samples = channel.observe_symbols(433_920_000, 203_000, 30_000, 0, 300)
    assert estimate_bitrate(samples, 30_000) == pytest.approx(5000.0)


def test_estimator_matches_oracle_random_bits():
    rng = random.Random(99)
    for _ in range(2000):
        n = rng.randrange(0, 512)
        bits = bytes(rng.randrange(2) for _ in range(n))
        got = estimate_bitrate(bits, 60_000)
        want = eq1_oracle(bits, 60_000)
        assert got == want


def test_estimator_too_few_runs_deferred():
    assert estimate_bitrate(b"", 30_000) is None
    assert estimate_bitrate(bytes([1] * 50), 30_000) is None
    assert estimate_bitrate(bytes([1] * 5 + [0] * 5), 30_000) is None


def test_scale_equivariance():
    rng = random.Random(4)
    base = []
    for _ in range(30):
        run = rng.randrange(2, 9)
        base += [1] * run + [0] * run
    for k in (2, 3, 5):
        scaled = bytes(b for b in base for _ in range(k))
        r1 = estimate_bitrate(bytes(base), 30_000)
        rk = estimate_bitrate(scaled, 30_000 * k)
        assert rk == pytest.approx(r1, rel=1e-9)


def test_random_rate_recovery_within_tolerance():
    rng = random.Random(7)
    for _ in range(60):
        rate = rng.randrange(1000, 15001, 100)
        channel, fe = make_rig()
        channel.add_emission(Emission(
            carrier_hz=433_920_000, bitrate_bps=rate, power_dbm=-40.0,
            payload=b"", preamble_len=240, start_us=0, source="x"))
        acc = SymbolAccumulator(BitrateEstimatorConfig(oversample_rate=60_000))
        start = rng.randrange(0, 1000)
        pos = 0
        while not acc.ready():
            chunk = channel.observe_symbols(
                433_920_000, 203_000, 60_000, start, pos + 48)[pos:]
            acc.extend(chunk)
            pos += len(chunk)
        r_hat = acc.conclude()
        assert r_hat is not None
        assert abs(r_hat - rate) <= 300
        # and the production value equals the independent oracle on that buffer
        assert r_hat == eq1_oracle(bytes(acc.samples), 60_000)


def test_estimation_runtime_bound():
    cfg = BitrateEstimatorConfig(oversample_rate=30_000, max_buffer_bytes=32)
    acc = SymbolAccumulator(cfg)
    # worst case: garbage that never satisfies the alternation rule
    acc.extend(bytes([1] * cfg.sample_cap * 2))
    assert acc.full and acc.ready()
    # capped at 32 bytes * 8 samples: 8.53 ms of capture at 30 kbps
    assert cfg.sample_cap == 256
    assert cfg.sample_cap / cfg.oversample_rate <= 0.00854
