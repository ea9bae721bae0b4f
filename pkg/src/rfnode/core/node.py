"""The node skeleton: module registry, dual-priority loop, command routing.

One iteration = drain inbound commands, a high-priority pass (radio polling,
on_packet_received chain, hot on_loop hooks), then a low-priority pass
(decoupling-queue drain, after_packet_received, cold on_loop hooks).  Time
only moves via explicit charges; an iteration that charged nothing advances
the clock by the configured idle step, so a quiet node never spins at one
instant.

Outbound frames land in a bounded drop-oldest queue the transport drains
from its own strand; the loop never blocks on a slow host.
"""

import logging
import threading
from collections import deque

from rfnode.core.module import CONSUME, DROP, NodeModule, UnknownCommandError
from rfnode.core.queues import BoundedQueue
from rfnode.env.channel import RfChannel
from rfnode.hal.proxy import RadioProxy

log = logging.getLogger("rfnode.node")

TOPIC_ROOT = "rfquack"

DISPOSITION_FORWARDED = "forwarded"
DISPOSITION_DROPPED = "dropped"
DISPOSITION_CONSUMED = "consumed"

QUEUE_CAPACITY = 64


class Node:
    def __init__(self, channel: RfChannel, radios: RadioProxy,
                 loop_step_us: int = 100, debug_hooks: bool = False):
        self.channel = channel
        self.radios = radios
        self.loop_step_us = loop_step_us
        self.modules: dict[str, NodeModule] = {}
        self.rx_queue = BoundedQueue(QUEUE_CAPACITY, "drop_newest")
        self.host_queue = BoundedQueue(QUEUE_CAPACITY, "drop_oldest")
        self.repeater_queue = BoundedQueue(QUEUE_CAPACITY, "drop_newest")
        self.forward_to_repeater = False
        self._inbound = deque()
        self._inbound_lock = threading.Lock()
        self.iterations = 0
        self.hook_log = [] if debug_hooks else None
        self._running = True

    @property
    def clock(self):
        return self.channel.clock

    # -- registry ------------------------------------------------------------

    def register_module(self, module: NodeModule):
        if module.name in self.modules:
            raise ValueError(f"duplicate module name {module.name!r}")
        self.modules[module.name] = module
        self._journal(module.name, "on_init", None)
        module.on_init(self)
        return module

    def ordered_modules(self):
        return sorted(self.modules.values(),
                      key=lambda m: (m.priority_order, list(self.modules).index(m.name)))

    def _journal(self, module, hook, pkt):
        if self.hook_log is not None:
            self.hook_log.append((module, hook, None if pkt is None else id(pkt)))

    # -- commands ---------------------------------------------------------------

    def submit_command(self, topic: str, fields: dict):
        with self._inbound_lock:
            self._inbound.append((topic, fields))

    @property
    def pending_commands(self) -> int:
        with self._inbound_lock:
            return len(self._inbound)

    def handle_user_command(self, topic: str, fields: dict) -> list:
        """Route one inbound topic to its module; returns emitted replies."""
        parts = topic.split("/")
        if len(parts) != 4 or parts[0] != TOPIC_ROOT or parts[1] != "in":
            return [self._emit_error("node", "bad_topic", topic=topic)]
        _, _, module_name, verb = parts
        module = self.modules.get(module_name)
        if module is None:
            return [self._emit_error("node", "unknown_module", topic=topic)]
        try:
            result = module.on_user_command(self, verb, fields or {})
        except UnknownCommandError:
            return [self._emit_error(module_name, "unknown_command", verb=verb)]
        except Exception as exc:  # contained: the node must stay alive
            log.warning("command %s failed: %s", topic, exc)
            return [self._emit_error(module_name, str(exc), verb=verb)]
        replies = []
        if result is None:
            result = {}
        if isinstance(result, dict):
            result = [result]
        for payload in result:
            body = {"ok": True, **payload}
            replies.append(self.emit(f"{TOPIC_ROOT}/out/{module_name}/{verb}", body))
        return replies

    def _emit_error(self, module_name: str, error: str, **extra):
        payload = {"ok": False, "error": error, **extra}
        return self.emit(f"{TOPIC_ROOT}/out/{module_name}/error", payload)

    # -- outbound ------------------------------------------------------------------

    def emit(self, topic: str, payload: dict):
        self.host_queue.push((topic, payload))
        return (topic, payload)

    def poll_outbound(self, limit: int = 64) -> list:
        """Drained by the transport writer strand."""
        return self.host_queue.drain(limit)

    # -- packet path -----------------------------------------------------------------

    def dispatch_packet(self, pkt) -> str:
        for m in self.ordered_modules():
            if not m.enabled:
                continue
            self._journal(m.name, "on_packet_received", pkt)
            try:
                result = m.on_packet_received(self, pkt)
            except Exception as exc:
                log.warning("module %s on_packet_received failed: %s", m.name, exc)
                self._emit_error(m.name, f"hook_error: {exc}")
                return DISPOSITION_DROPPED
            if result is DROP:
                return DISPOSITION_DROPPED
            if result is CONSUME:
                return DISPOSITION_CONSUMED
            if result is not None:
                pkt = result
        if not self.rx_queue.push(pkt):
            return DISPOSITION_DROPPED
        return DISPOSITION_FORWARDED

    # -- loop ------------------------------------------------------------------------

    def step(self) -> dict:
        t_start = self.clock.now
        stats = {"polled": 0, "forwarded": 0, "dropped": 0, "consumed": 0,
                 "delivered": 0, "commands": 0}

        with self._inbound_lock:
            pending = list(self._inbound)
            self._inbound.clear()
        for topic, fields in pending:
            stats["commands"] += 1
            self.handle_user_command(topic, fields)

        # high-priority pass
        for rid in self.radios.ids():
            fe = self.radios.get(rid)
            if fe.mode in ("RX", "PROMISCUOUS"):
                for pkt in fe.poll_reception():
                    stats["polled"] += 1
                    disposition = self.dispatch_packet(pkt)
                    key = disposition if disposition in stats else "dropped"
                    stats[key] += 1
        for m in self.ordered_modules():
            if m.enabled and m.loop_stage == "high":
                self._run_loop_hook(m)

        # low-priority pass
        for pkt in self.rx_queue.drain():
            for m in self.ordered_modules():
                if not m.enabled:
                    continue
                self._journal(m.name, "after_packet_received", pkt)
                try:
                    m.after_packet_received(self, pkt)
                except Exception as exc:
                    log.warning("module %s after_packet_received failed: %s",
                                m.name, exc)
            self.emit(f"{TOPIC_ROOT}/out/{pkt.rx_radio}/packet", pkt.to_wire())
            if self.forward_to_repeater:
                self.repeater_queue.push(pkt)
            stats["delivered"] += 1
        for m in self.ordered_modules():
            if m.enabled and m.loop_stage == "low":
                self._run_loop_hook(m)

        if self.clock.now == t_start:
            self.channel.advance(self.loop_step_us)
        self.iterations += 1
        stats["clock_us"] = self.clock.now
        return stats

    def _run_loop_hook(self, m: NodeModule):
        self._journal(m.name, "on_loop", None)
        try:
            m.on_loop(self)
        except Exception as exc:
            log.warning("module %s on_loop failed: %s", m.name, exc)

    def run(self, pace_every: int = 64, max_ratio: float = 20.0):
        """Free-running loop for live transports; stoppable.

        Virtual time is capped at max_ratio times wall time so sessions can
        rely on wall-clock sleeps without the scenario racing far ahead,
        while idle phases still fast-forward up to that ratio.
        """
        import time

        wall0 = time.monotonic()
        virt0 = self.clock.now
        n = 0
        while self._running:
            self.step()
            n += 1
            if pace_every and n % pace_every == 0:
                wall = time.monotonic() - wall0
                virt = (self.clock.now - virt0) / 1e6
                ahead = virt - max_ratio * wall
                if ahead > 0:
                    time.sleep(min(0.05, ahead / max_ratio))
                else:
                    time.sleep(0)

    def stop(self):
        self._running = False
