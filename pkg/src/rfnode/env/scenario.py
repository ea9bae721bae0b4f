"""Scenario files: YAML key/value tree describing the channel and actors.

Top-level fields: seed, noise_floor_dbm, rssi_noise_sigma_db, actors[],
plus optional squelch_margin_db.  Each actor has an id, a kind, and
kind-specific parameters (see the actor classes for defaults).
"""

import yaml

from rfnode.env.actors import BeaconActor, KeyfobActor, MouseActor, RollingCodeReceiver
from rfnode.env.channel import RfChannel
from rfnode.env.clock import VirtualClock


def load_scenario(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        cfg = yaml.safe_load(fh) or {}
    validate_scenario(cfg)
    return cfg


def validate_scenario(cfg: dict):
    actors = cfg.get("actors") or []
    ids = [a.get("id") for a in actors]
    if len(ids) != len(set(ids)):
        raise ValueError("actor ids must be unique")
    for a in actors:
        if "id" not in a or "kind" not in a:
            raise ValueError("every actor needs id and kind")


def _press_times(spec: dict) -> list:
    if "press_times_us" in spec:
        return [int(t) for t in spec["press_times_us"]]
    count = int(spec.get("press_count", 1))
    start = int(spec.get("press_start_us", 10_000))
    period = int(spec.get("press_period_us", 400_000))
    jitter = int(spec.get("press_jitter_us", 0))
    if jitter:
        import random

        rng = random.Random(spec.get("press_seed", 1))
        return [start + i * period + rng.randrange(jitter) for i in range(count)]
    return [start + i * period for i in range(count)]


def build_actor(spec: dict):
    kind = spec["kind"]
    if kind == "keyfob":
        return KeyfobActor(
            actor_id=spec["id"],
            carrier_hz=int(spec["carrier_hz"]),
            bitrate_bps=int(spec["bitrate_bps"]),
            power_dbm=float(spec.get("power_dbm", -45.0)),
            sync_word=bytes.fromhex(spec.get("sync_word_hex", "d391")),
            preamble_len=int(spec.get("preamble_bits", 120)),
            device_id=bytes.fromhex(spec.get("device_id_hex", "4a3b2c1d")),
            code_start=int(spec.get("code_start", 1000)),
            payload_len=int(spec.get("payload_len", 61)),
            press_times_us=_press_times(spec),
        )
    if kind == "car_receiver":
        return RollingCodeReceiver(
            actor_id=spec["id"],
            carrier_hz=int(spec["carrier_hz"]),
            bandwidth_hz=int(spec.get("bandwidth_hz", 200_000)),
            squelch_dbm=float(spec.get("squelch_dbm", -80.0)),
            code_offset=int(spec.get("code_offset", 4)),
            code_len=int(spec.get("code_len", 4)),
            window=int(spec.get("window", 16)),
            next_code=int(spec.get("code_start", 1000)),
        )
    if kind == "mouse":
        return MouseActor(
            actor_id=spec["id"],
            carrier_hz=int(spec["carrier_hz"]),
            address=bytes.fromhex(spec.get("address_hex", "a5c3e81720")),
            hid_template=bytes.fromhex(spec.get("hid_hex", "0400000100000000deadbe02")),
            power_dbm=float(spec.get("power_dbm", -30.0)),
            bitrate_bps=int(spec.get("bitrate_bps", 2_000_000)),
            start_us=int(spec.get("start_us", 1000)),
            count=int(spec.get("count", 50)),
            interval_us=int(spec.get("interval_us", 4000)),
        )
    if kind == "beacon":
        return BeaconActor(
            actor_id=spec["id"],
            carrier_hz=int(spec["carrier_hz"]),
            bitrate_bps=int(spec.get("bitrate_bps", 4800)),
            power_dbm=float(spec.get("power_dbm", -40.0)),
            payload=bytes.fromhex(spec.get("payload_hex", "aa5512")),
            preamble_len=int(spec.get("preamble_bits", 32)),
            start_us=int(spec.get("start_us", 0)),
            count=int(spec.get("count", 1)),
            interval_us=int(spec.get("interval_us", 0)),
            continuous=bool(spec.get("continuous", False)),
        )
    raise ValueError(f"unknown actor kind {kind!r}")


def build_channel(cfg: dict, clock: VirtualClock = None):
    """Instantiate the channel, schedule transmitters, attach receivers.

    Returns (channel, actors-by-id).
    """
    validate_scenario(cfg)
    clock = clock or VirtualClock()
    channel = RfChannel(
        clock,
        seed=int(cfg.get("seed", 0)),
        noise_floor_dbm=float(cfg.get("noise_floor_dbm", -100.0)),
        rssi_noise_sigma_db=float(cfg.get("rssi_noise_sigma_db", 1.0)),
        squelch_margin_db=float(cfg.get("squelch_margin_db", 10.0)),
    )
    actors = {}
    for spec in cfg.get("actors") or []:
        actor = build_actor(spec)
        actors[actor.actor_id] = actor
        if isinstance(actor, RollingCodeReceiver):
            channel.attach_receiver(actor)
        else:
            for e in actor.emissions():
                channel.add_emission(e)
    return channel, actors
