/**
 * 2.4 GHz sync-word isolation: park the wideband radio in promiscuous
 * mode at 2 Mbps, sweep the channel range capturing fixed 32-byte chunks,
 * then rank the 5-byte sync words (first 10 hex characters) by frequency.
 */

import { sleep, type Q } from "../client.js";

export interface SyncRankOptions {
  radio?: string;
  startMHz?: number;
  endMHz?: number;
  dwellMs?: number;
}

export default async function run(q: Q, opts: SyncRankOptions = {}) {
  const radio = opts.radio ?? "radioC";
  const startMHz = opts.startMHz ?? 2405;
  const endMHz = opts.endMHz ?? 2473;
  const dwellMs = opts.dwellMs ?? 15;

  await q[radio].set_modem_config({ bitRate: 2_000_000, isPromiscuous: true });
  await q[radio].set_packet_len({ isFixedPacketLen: true, packetLen: 32 }); // max
  await q[radio].rx();
  q.data = [];

  // capture anything within the range
  for (let mhz = startMHz; mhz <= endMHz; mhz++) {
    await q[radio].set_modem_config({ carrierFreq: mhz * 1_000_000 });
    await sleep(dwellMs);
  }
  await q[radio].idle();

  // isolate all sync words and rank
  const sw = q.data.map((p) => p.data.slice(0, 10));
  const counter = new Map<string, number>();
  for (const s of sw) {
    counter.set(s, (counter.get(s) ?? 0) + 1);
  }
  const ranked = [...counter.entries()].sort((a, b) => b[1] - a[1]);
  return { captures: sw.length, ranked };
}
