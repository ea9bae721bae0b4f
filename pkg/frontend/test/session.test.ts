import { afterAll, afterEach, beforeAll, beforeEach, describe, expect, it } from "vitest";

import { Session, ValidationError, type Q } from "../src/client.js";
import { spawnNode, type NodeHandle } from "./util.js";

describe("session proxy", () => {
  let node: NodeHandle;
  let q: Q;

  beforeAll(async () => {
    node = await spawnNode();
  });

  afterAll(() => node.stop());

  beforeEach(async () => {
    q = (await Session.connectTcp(node.port, "127.0.0.1", 15_000)) as Q;
  });

  afterEach(() => q.close());

  it("builds its call surface from the schema alone", () => {
    expect(q.modules).toContain("radioA");
    expect(q.modules).toContain("packet_filter");
    expect(q.modules).toContain("guessing");
    expect(typeof q.radioA.rx).toBe("function");
    expect(typeof q.packet_filter.add).toBe("function");
    // every callable corresponds to a schema entry
    for (const mod of q.modules) {
      const verbs = Object.keys(q.schema.modules[mod].commands);
      for (const verb of Object.keys(q[mod] as object)) {
        expect(verbs).toContain(verb);
      }
    }
  });

  it("applies modem config and reads it back", async () => {
    const reply = await q.radioB.set_modem_config({ carrierFreq: 434.42e6 });
    expect(reply.applied).toContain("carrierFreq");
    const cfg = await q.radioB.get_modem_config();
    expect(cfg.carrierFreq).toBe(434_420_000);
  });

  it("rejects unknown fields locally, before sending", async () => {
    const before = q.transcript.filter((t) => t.dir === "in").length;
    await expect(
      q.radioA.set_modem_config({ carrierFrequency: 1 }),
    ).rejects.toThrow(ValidationError);
    expect(q.transcript.filter((t) => t.dir === "in").length).toBe(before);
  });

  it("surfaces node-side errors as rejections", async () => {
    await expect(
      q.radioC.set_modem_config({ bitRate: 5000 }),
    ).rejects.toThrow(/unsupported/);
  });

  it("answers ping with the virtual clock", async () => {
    const pong = await q.ping();
    expect(typeof pong.clockUs).toBe("number");
  });
});

describe("session lifecycle", () => {
  it("reconnecting preserves node state", async () => {
    const node = await spawnNode();
    try {
      const q1 = (await Session.connectTcp(node.port, "127.0.0.1", 15_000)) as Q;
      await q1.packet_filter.add({ pattern: "^bbbb" });
      q1.close();
      const q2 = (await Session.connectTcp(node.port, "127.0.0.1", 15_000)) as Q;
      try {
        const listing = await q2.packet_filter.list();
        expect(listing.rules).toContainEqual({ pattern: "^bbbb", negate: false });
      } finally {
        q2.close();
      }
    } finally {
      node.stop();
    }
  });

  it("replaying recorded commands yields identical replies", async () => {
    const script = async (q: Q) => {
      const replies = [];
      replies.push(await q.radioA.set_modem_config({ carrierFreq: 433.92e6, bitRate: 9600 }));
      replies.push(await q.packet_filter.add({ pattern: "^aaaa" }));
      replies.push(await q.packet_mod.add({ operation: "XOR", position: 7, operand: 4 }));
      replies.push(await q.radioA.get_modem_config());
      replies.push(await q.packet_mod.list());
      return replies;
    };
    const run = async () => {
      const node = await spawnNode();
      try {
        const q = (await Session.connectTcp(node.port, "127.0.0.1", 15_000)) as Q;
        try {
          return await script(q);
        } finally {
          q.close();
        }
      } finally {
        node.stop();
      }
    };
    expect(await run()).toEqual(await run());
  });
});

describe("connection failures", () => {
  it("reports a clear error for a dead port", async () => {
    await expect(Session.connectTcp(1, "127.0.0.1", 2_000)).rejects.toThrow();
  });
});
