"""Frame codec for the host link.

Layout: magic 0x52 0x51 ("RQ"), topic length (u16 BE), topic (UTF-8),
payload length (u32 BE), payload.  The payload is canonical JSON: UTF-8,
sorted keys, no insignificant whitespace, so encoding the same message
always produces the same bytes.  Values typed "bytes" travel as lowercase
hex strings.

The decoder is stream-oriented and self-synchronizing: after garbage or a
truncated/oversized frame it scans forward to the next magic and keeps
going, losing at most the frame the garbage corrupted.
"""

import json
import struct

MAGIC = b"RQ"
MAX_FRAME = 64 * 1024
_HEADER = struct.Struct(">2sH")
_PLEN = struct.Struct(">I")


class FrameError(Exception):
    pass


def canonical_payload(message: dict) -> bytes:
    return json.dumps(message, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True).encode("utf-8")


def encode_frame(topic: str, message: dict) -> bytes:
    topic_b = topic.encode("utf-8")
    payload = canonical_payload(message)
    frame = MAGIC + struct.pack(">H", len(topic_b)) + topic_b \
        + _PLEN.pack(len(payload)) + payload
    if len(frame) > MAX_FRAME:
        raise FrameError(f"frame of {len(frame)} bytes exceeds {MAX_FRAME}")
    return frame


class FrameDecoder:
    """Feed arbitrary byte chunks; collect (topic, message) frames."""

    def __init__(self):
        self._buf = bytearray()
        self.errors = 0

    def feed(self, chunk: bytes) -> list:
        self._buf.extend(chunk)
        out = []
        while True:
            frame = self._next_frame()
            if frame is None:
                break
            out.append(frame)
        return out

    def _resync(self, skip: int):
        """Drop `skip` bytes, then cut to the next magic candidate."""
        self.errors += 1
        del self._buf[:skip]
        idx = self._buf.find(MAGIC)
        if idx < 0:
            # keep a possible first magic byte at the tail
            tail = bytes(self._buf[-1:])
            self._buf.clear()
            if tail == MAGIC[:1]:
                self._buf.extend(tail)
        else:
            del self._buf[:idx]

    def _next_frame(self):
        buf = self._buf
        while True:
            if len(buf) < 2:
                return None
            if bytes(buf[:2]) != MAGIC:
                idx = buf.find(MAGIC)
                self.errors += 1
                if idx < 0:
                    tail = bytes(buf[-1:])
                    buf.clear()
                    if tail == MAGIC[:1]:
                        buf.extend(tail)
                    return None
                del buf[:idx]
                continue
            if len(buf) < 4:
                return None
            _, topic_len = _HEADER.unpack_from(buf, 0)
            header_end = 4 + topic_len
            if 8 + topic_len > MAX_FRAME:
                self._resync(2)
                continue
            if len(buf) < header_end + 4:
                return None
            (payload_len,) = _PLEN.unpack_from(buf, header_end)
            total = header_end + 4 + payload_len
            if total > MAX_FRAME:
                self._resync(2)
                continue
            if len(buf) < total:
                return None
            try:
                topic = bytes(buf[4:header_end]).decode("utf-8")
                message = json.loads(bytes(buf[header_end + 4:total]))
                if not isinstance(message, dict):
                    raise ValueError("payload must be an object")
            except (UnicodeDecodeError, ValueError):
                self._resync(2)
                continue
            del buf[:total]
            return (topic, message)
