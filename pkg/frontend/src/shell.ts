#!/usr/bin/env node
/**
 * Interactive shell and script runner.
 *
 *   rfq-shell --connect tcp:4811
 *   rfq-shell --connect "stdio:python3 -m rfnode.cli --transport stdio"
 *   rfq-shell --connect tcp:4811 --script dist/scripts/d3_syncword_rank.js
 *
 * The REPL exposes `q` (session proxy with one property per node module),
 * `sleep(ms)`, and `save(path)` to dump the frame transcript.  Scripts are
 * ES modules whose default export receives `q`.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import repl from "node:repl";

import { Session, sleep, type Q } from "./client.js";

interface Args {
  connect?: string;
  script?: string;
  timeout: number;
}

function parseArgs(argv: string[]): Args {
  const args: Args = { timeout: 10_000 };
  for (let i = 0; i < argv.length; i++) {
    switch (argv[i]) {
      case "--connect":
        args.connect = argv[++i];
        break;
      case "--script":
        args.script = argv[++i];
        break;
      case "--timeout":
        args.timeout = Number(argv[++i]);
        break;
      case "--help":
        console.log(
          "usage: rfq-shell --connect tcp:<port>|stdio:<node-cmd> " +
            "[--script file.js] [--timeout ms]",
        );
        process.exit(0);
    }
  }
  if (!args.connect) {
    console.error("missing --connect tcp:<port>|stdio:<node-cmd>");
    process.exit(2);
  }
  return args;
}

async function main(): Promise<void> {
  const args = parseArgs(process.argv.slice(2));
  const q = (await Session.connect(args.connect!, args.timeout)) as Q;
  console.error(`connected; modules: ${q.modules.join(", ")}`);

  if (args.script) {
    const mod = await import(pathToFileURL(args.script).href);
    try {
      const result = await mod.default(q);
      console.log(JSON.stringify(result, null, 2));
    } finally {
      q.close();
    }
    return;
  }

  const server = repl.start({ prompt: "rfq> " });
  server.context.q = q;
  server.context.sleep = sleep;
  server.context.save = (path: string) =>
    writeFileSync(path, JSON.stringify(q.transcript, null, 2));
  server.on("exit", () => {
    q.close();
    process.exit(0);
  });
}

main().catch((err) => {
  console.error(err);
  process.exit(1);
});
