import { spawn, type ChildProcess } from "node:child_process";
import path from "node:path";
import { fileURLToPath } from "node:url";

const here = path.dirname(fileURLToPath(import.meta.url));
export const REPO_ROOT = path.resolve(here, "..", "..");

export interface NodeHandle {
  port: number;
  proc: ChildProcess;
  stop(): void;
}

const PYTHON = process.env.PYTHON ?? "python3";

/** Launch a backend node on a free TCP port; resolves once it listens. */
export function spawnNode(scenario?: string, extra: string[] = []): Promise<NodeHandle> {
  const args = ["-m", "rfnode.cli", "--transport", "tcp:0", "--log-level", "error"];
  if (scenario) {
    args.push("--scenario", path.resolve(REPO_ROOT, scenario));
  }
  args.push(...extra);
  const proc = spawn(PYTHON, args, { stdio: ["ignore", "pipe", "inherit"] });
  return new Promise((resolve, reject) => {
    let buf = "";
    const onData = (chunk: Buffer) => {
      buf += chunk.toString("utf-8");
      const m = buf.match(/RFQ_NODE_LISTENING port=(\d+)/);
      if (m) {
        proc.stdout!.off("data", onData);
        resolve({
          port: Number(m[1]),
          proc,
          stop: () => proc.kill("SIGKILL"),
        });
      }
    };
    proc.stdout!.on("data", onData);
    proc.once("error", reject);
    proc.once("exit", (code) => reject(new Error(`node exited early (${code})`)));
    setTimeout(() => reject(new Error("node did not come up")), 30_000);
  });
}
