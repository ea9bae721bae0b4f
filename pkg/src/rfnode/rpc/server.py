"""Byte-stream transports serving the node RPC.

One session at a time: a reader strand feeds decoded frames into the
node's inbound queue, a writer strand drains the outbound queue and frames
it back.  The node loop runs on its own strand and never blocks on the
host; when a session dies the node keeps running and the listener accepts
the next connection.  get_schema is answered here so clients can introspect
before any module code runs a command.
"""

import logging
import socket
import sys
import threading
import time

from rfnode.core.node import TOPIC_ROOT
from rfnode.rpc.framing import FrameDecoder, encode_frame
from rfnode.rpc.schema import build_schema, iter_command_topics, validate_fields

log = logging.getLogger("rfnode.rpc")

SCHEMA_TOPIC = f"{TOPIC_ROOT}/in/node/get_schema"
PING_TOPIC = f"{TOPIC_ROOT}/in/node/ping"


class NodeServer:
    def __init__(self, node):
        self.node = node
        self.schema = build_schema(node)
        self._topics = dict(iter_command_topics(self.schema))

    def handle_frame(self, topic: str, message: dict, send):
        """Immediate node-level topics; everything else goes to the loop."""
        if topic == SCHEMA_TOPIC:
            send(f"{TOPIC_ROOT}/out/node/schema", self.schema)
            return
        if topic == PING_TOPIC:
            send(f"{TOPIC_ROOT}/out/node/pong",
                 {"clockUs": self.node.clock.now, **message})
            return
        spec = self._topics.get(topic)
        if spec is None:
            send(f"{TOPIC_ROOT}/out/node/error",
                 {"ok": False, "error": "unknown_topic", "topic": topic})
            return
        try:
            clean = validate_fields(spec, message)
        except ValueError as exc:
            send(f"{TOPIC_ROOT}/out/node/error",
                 {"ok": False, "error": str(exc), "topic": topic})
            return
        self.node.submit_command(topic, clean)

    def serve_stream(self, read, write):
        """Pump one session over blocking read()/write(bytes) callables."""
        write_lock = threading.Lock()
        alive = threading.Event()
        alive.set()

        def send(topic, payload):
            frame = encode_frame(topic, payload)
            try:
                with write_lock:
                    write(frame)
            except OSError:
                alive.clear()

        def writer():
            while alive.is_set():
                frames = self.node.poll_outbound()
                if not frames:
                    time.sleep(0.002)
                    continue
                for topic, payload in frames:
                    send(topic, payload)

        wt = threading.Thread(target=writer, daemon=True)
        wt.start()
        decoder = FrameDecoder()
        try:
            while alive.is_set():
                chunk = read(4096)
                if not chunk:
                    break
                for topic, message in decoder.feed(chunk):
                    self.handle_frame(topic, message, send)
            # EOF: let the loop finish queued commands, then flush replies
            deadline = time.time() + 2.0
            while time.time() < deadline and self.node.pending_commands:
                time.sleep(0.005)
            time.sleep(0.05)
        finally:
            alive.clear()
            wt.join(timeout=1.0)

    def serve_tcp(self, port: int, announce=print):
        sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        sock.bind(("127.0.0.1", port))
        sock.listen(1)
        bound = sock.getsockname()[1]
        announce(f"RFQ_NODE_LISTENING port={bound}", flush=True)
        loop_thread = threading.Thread(target=self.node.run, daemon=True)
        loop_thread.start()
        try:
            while True:
                conn, peer = sock.accept()
                log.info("session from %s", peer)
                try:
                    self.serve_stream(conn.recv, conn.sendall)
                except OSError as exc:
                    log.info("session ended: %s", exc)
                finally:
                    conn.close()
        finally:
            self.node.stop()
            sock.close()

    def serve_stdio(self):
        """Frames over stdin/stdout (logs must go to stderr)."""
        stdin = sys.stdin.buffer
        stdout = sys.stdout.buffer

        def write(data):
            stdout.write(data)
            stdout.flush()

        loop_thread = threading.Thread(target=self.node.run, daemon=True)
        loop_thread.start()
        try:
            self.serve_stream(stdin.read1, write)
        finally:
            self.node.stop()
