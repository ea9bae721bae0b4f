/**
 * Frame codec for the node link.
 *
 * Layout: magic 0x52 0x51 ("RQ"), topic length (u16 BE), UTF-8 topic,
 * payload length (u32 BE), canonical-JSON payload (sorted keys, no
 * insignificant whitespace).  The decoder is incremental and recovers at
 * the next magic after garbage.
 */

export const MAGIC = Buffer.from("RQ", "ascii");
export const MAX_FRAME = 64 * 1024;

export interface Frame {
  topic: string;
  payload: Record<string, unknown>;
}

function canonicalJson(value: unknown): string {
  if (Array.isArray(value)) {
    return `[${value.map(canonicalJson).join(",")}]`;
  }
  if (value !== null && typeof value === "object") {
    const entries = Object.entries(value as Record<string, unknown>)
      .filter(([, v]) => v !== undefined)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonicalJson(v)}`);
    return `{${entries.join(",")}}`;
  }
  return JSON.stringify(value);
}

export function encodeFrame(topic: string, payload: Record<string, unknown>): Buffer {
  const topicBuf = Buffer.from(topic, "utf-8");
  const payloadBuf = Buffer.from(canonicalJson(payload ?? {}), "utf-8");
  const frame = Buffer.alloc(8 + topicBuf.length + payloadBuf.length);
  MAGIC.copy(frame, 0);
  frame.writeUInt16BE(topicBuf.length, 2);
  topicBuf.copy(frame, 4);
  frame.writeUInt32BE(payloadBuf.length, 4 + topicBuf.length);
  payloadBuf.copy(frame, 8 + topicBuf.length);
  if (frame.length > MAX_FRAME) {
    throw new Error(`frame of ${frame.length} bytes exceeds ${MAX_FRAME}`);
  }
  return frame;
}

export class FrameDecoder {
  private buf: Buffer = Buffer.alloc(0);
  public errors = 0;

  feed(chunk: Buffer): Frame[] {
    this.buf = this.buf.length ? Buffer.concat([this.buf, chunk]) : chunk;
    const out: Frame[] = [];
    for (;;) {
      const frame = this.next();
      if (frame === null) break;
      out.push(frame);
    }
    return out;
  }

  private resync(skip: number): void {
    this.errors += 1;
    this.buf = this.buf.subarray(skip);
    const idx = this.buf.indexOf(MAGIC);
    if (idx < 0) {
      const tail = this.buf.subarray(this.buf.length - 1);
      this.buf = tail.length && tail[0] === MAGIC[0] ? tail : Buffer.alloc(0);
    } else {
      this.buf = this.buf.subarray(idx);
    }
  }

  private next(): Frame | null {
    for (;;) {
      if (this.buf.length < 2) return null;
      if (!this.buf.subarray(0, 2).equals(MAGIC)) {
        const idx = this.buf.indexOf(MAGIC);
        this.errors += 1;
        if (idx < 0) {
          const tail = this.buf.subarray(this.buf.length - 1);
          this.buf = tail.length && tail[0] === MAGIC[0] ? tail : Buffer.alloc(0);
          return null;
        }
        this.buf = this.buf.subarray(idx);
        continue;
      }
      if (this.buf.length < 4) return null;
      const topicLen = this.buf.readUInt16BE(2);
      const headerEnd = 4 + topicLen;
      if (8 + topicLen > MAX_FRAME) {
        this.resync(2);
        continue;
      }
      if (this.buf.length < headerEnd + 4) return null;
      const payloadLen = this.buf.readUInt32BE(headerEnd);
      const total = headerEnd + 4 + payloadLen;
      if (total > MAX_FRAME) {
        this.resync(2);
        continue;
      }
      if (this.buf.length < total) return null;
      try {
        const topic = this.buf.subarray(4, headerEnd).toString("utf-8");
        const payload = JSON.parse(
          this.buf.subarray(headerEnd + 4, total).toString("utf-8"),
        ) as Record<string, unknown>;
        if (payload === null || typeof payload !== "object" || Array.isArray(payload)) {
          throw new Error("payload must be an object");
        }
        this.buf = this.buf.subarray(total);
        return { topic, payload };
      } catch {
        this.resync(2);
      }
    }
  }
}
