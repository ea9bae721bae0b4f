/**
 * Frequency recovery experiment: one radio hunts with the auto-clamping
 * module while the second transmits a reference packet across the band;
 * the detected carrier of every decoded packet is tabulated per true
 * frequency.
 */

import { sleep, type Q } from "../client.js";

export interface FreqSweepOptions {
  startHz?: number;
  endHz?: number;
  stepHz?: number;
  trials?: number;
  payloadHex?: string;
  preambleBits?: number;
}

export default async function run(q: Q, opts: FreqSweepOptions = {}) {
  const startHz = opts.startHz ?? 432_000_000;
  const endHz = opts.endHz ?? 436_800_000;
  const stepHz = opts.stepHz ?? 300_000;
  const trials = opts.trials ?? 50;
  const payload = opts.payloadHex ??
    "aaaa5555deadbeefcafe0102030405060708090a0b0c0d0e0f1011121314151617181920666";
  const payloadHex = payload.length % 2 ? payload.slice(0, -1) : payload;

  await q.radioA.rx();
  await q.guessing.set({ start_freq: startHz, end_freq: endHz + 200_000 });
  await q.guessing.start();
  await q.radioB.set_modem_config({ preambleLen: opts.preambleBits ?? 320 });

  const values: Record<string, number[]> = {};
  for (let freq = startHz; freq <= endHz; freq += stepHz) {
    values[freq] = [];
    await q.radioB.set_modem_config({ carrierFreq: freq });
    await q.radioB.tx();
    await sleep(20);
    for (let t = 0; t < trials; t++) {
      q.data = []; // clear recv packets buffer
      await q.radioB.send({ data: payloadHex });
      await q.waitForData(1, 8_000); // wait for decoding
      values[freq].push(q.data[0].carrierFreq);
    }
  }
  await q.guessing.stop();
  return values;
}
