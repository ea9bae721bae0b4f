/**
 * Bitrate recovery experiment: the hunting radio clamps on packets that
 * the second radio transmits at a ladder of bitrates; every decoded
 * packet's recovered bitrate is tabulated per true rate.
 */

import { sleep, type Q } from "../client.js";

export interface BitrateSweepOptions {
  samplingBitrate?: number; // 30 kbps in the baseline run, then 60 kbps
  ratesBps?: number[];
  trials?: number;
  payloadHex?: string;
  preambleBits?: number;
}

export default async function run(q: Q, opts: BitrateSweepOptions = {}) {
  const rates =
    opts.ratesBps ?? Array.from({ length: 47 }, (_, i) => 1000 + i * 300);
  const trials = opts.trials ?? 50;
  const payloadHex = opts.payloadHex ?? "aaaa5555deadbeefcafe010203040506666";
  const payload = payloadHex.length % 2 ? payloadHex.slice(0, -1) : payloadHex;

  await q.radioA.rx();
  await q.guessing.set({ sampling_bitrate: opts.samplingBitrate ?? 30_000 });
  await q.guessing.start();
  await q.radioB.set_modem_config({ preambleLen: opts.preambleBits ?? 400 });

  const values: Record<string, number[]> = {};
  for (const rate of rates) {
    values[rate] = [];
    await q.radioB.set_modem_config({ bitRate: rate });
    await q.radioB.tx();
    await sleep(20);
    for (let t = 0; t < trials; t++) {
      q.data = []; // clear received packets
      await q.radioB.send({ data: payload });
      await q.waitForData(1, 8_000);
      // decoded packets carry the recovered bitrate
      values[rate].push(q.data[0].bitRate);
    }
  }
  await q.guessing.stop();
  return values;
}
