import { describe, expect, it } from "vitest";

import { FrameDecoder, encodeFrame } from "../src/framing.js";

describe("frame codec", () => {
  it("round-trips bit-exact", () => {
    const payload = { data: "aa".repeat(32), rxRadio: "radioA", millis: 12 };
    const frames = new FrameDecoder().feed(encodeFrame("rfquack/out/radioA/packet", payload));
    expect(frames).toEqual([{ topic: "rfquack/out/radioA/packet", payload }]);
  });

  it("matches the backend's canonical bytes exactly", () => {
    // golden frames produced by the Python encoder
    expect(encodeFrame("t/x", { b: 1, a: 2 }).toString("hex")).toBe(
      "52510003742f780000000d7b2261223a322c2262223a317d",
    );
    expect(
      encodeFrame("rfquack/in/radioA/send", { data: "aabb", repeat: 2 }).toString("hex"),
    ).toBe(
      "525100167266717561636b2f696e2f726164696f412f73656e640000001a" +
        "7b2264617461223a2261616262222c22726570656174223a327d",
    );
  });

  it("resynchronizes after garbage, losing at most one frame", () => {
    const f1 = encodeFrame("rfquack/in/node/ping", { n: 1 });
    const f2 = encodeFrame("rfquack/in/node/ping", { n: 2 });
    for (let seed = 0; seed < 40; seed++) {
      const garbage = Buffer.from(
        Array.from({ length: 1 + (seed * 7) % 50 }, (_, i) => (seed * 31 + i * 13) & 0xff),
      );
      const got = new FrameDecoder().feed(Buffer.concat([garbage, f1, f2]));
      const payloads = got.map((f) => f.payload.n);
      expect(payloads).toContain(2);
      expect(got.length).toBeGreaterThanOrEqual(1);
    }
  });

  it("survives chunked delivery", () => {
    const stream = Buffer.concat([
      encodeFrame("a/b", { x: 1 }),
      encodeFrame("c/d", { y: "zz" }),
    ]);
    const decoder = new FrameDecoder();
    const got: string[] = [];
    for (let i = 0; i < stream.length; i += 3) {
      for (const f of decoder.feed(stream.subarray(i, i + 3))) {
        got.push(f.topic);
      }
    }
    expect(got).toEqual(["a/b", "c/d"]);
  });
});
