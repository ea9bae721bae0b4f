/**
 * Node session: schema-driven command proxy plus a live capture buffer.
 *
 * The callable surface is built entirely from the node's schema reply;
 * nothing here hardcodes module or verb names.  Received packets append
 * to `q.data` (newest last, capped); other unsolicited frames land in
 * `q.events`.  Commands are synchronous request/reply with a timeout, and
 * field names/types are validated locally before anything hits the wire.
 */

import { spawn, type ChildProcess } from "node:child_process";
import net from "node:net";

import { FrameDecoder, encodeFrame, type Frame } from "./framing.js";

export interface FieldSpec {
  type: "int" | "float" | "bool" | "str" | "bytes" | "enum";
  required?: boolean;
  enum?: string;
  doc?: string;
}

export interface Schema {
  version: number;
  topicRoot: string;
  enums: Record<string, string[]>;
  modules: Record<
    string,
    {
      commands: Record<string, Record<string, FieldSpec>>;
      events: Record<string, Record<string, FieldSpec>>;
    }
  >;
}

export interface PacketWire {
  data: string;
  rxRadio: string;
  carrierFreq: number;
  bitRate: number;
  rssi: number;
  millis: number;
}

export type Fields = Record<string, unknown>;
export type ModuleProxy = Record<string, (fields?: Fields) => Promise<Fields>>;

interface Pending {
  replyTopic: string;
  errorTopics: string[];
  sentTopic: string;
  resolve: (payload: Fields) => void;
  reject: (err: Error) => void;
  timer: NodeJS.Timeout;
}

export interface TranscriptEntry {
  dir: "in" | "out";
  topic: string;
  payload: Fields;
}

const DATA_CAPACITY = 10_000;

export class ValidationError extends Error {}

export function validateFields(
  spec: Record<string, FieldSpec>,
  fields: Fields,
  enums: Record<string, string[]>,
): Fields {
  const clean: Fields = {};
  for (const name of Object.keys(fields)) {
    if (!(name in spec)) {
      throw new ValidationError(`unknown field ${name}`);
    }
  }
  for (const [name, fs] of Object.entries(spec)) {
    if (!(name in fields)) {
      if (fs.required) throw new ValidationError(`missing required field ${name}`);
      continue;
    }
    const value = fields[name];
    switch (fs.type) {
      case "int":
      case "float":
        if (typeof value !== "number" || Number.isNaN(value)) {
          throw new ValidationError(`field ${name} must be a number`);
        }
        clean[name] = fs.type === "int" ? Math.trunc(value) : value;
        break;
      case "bool":
        if (typeof value !== "boolean") {
          throw new ValidationError(`field ${name} must be a boolean`);
        }
        clean[name] = value;
        break;
      case "str":
        clean[name] = String(value);
        break;
      case "bytes": {
        const hex = String(value).toLowerCase();
        if (!/^([0-9a-f]{2})*$/.test(hex)) {
          throw new ValidationError(`field ${name} must be hex bytes`);
        }
        clean[name] = hex;
        break;
      }
      case "enum": {
        const allowed = enums[fs.enum ?? ""] ?? [];
        if (!allowed.includes(value as string)) {
          throw new ValidationError(`field ${name} must be one of ${allowed}`);
        }
        clean[name] = value;
        break;
      }
    }
  }
  return clean;
}

interface Wire {
  write(data: Buffer): void;
  close(): void;
}

export class Session {
  data: PacketWire[] = [];
  events: Frame[] = [];
  schema!: Schema;
  transcript: TranscriptEntry[] = [];
  timeoutMs: number;
  private wire: Wire;
  private decoder = new FrameDecoder();
  private pending: Pending[] = [];
  private closed = false;
  private root = "rfquack";
  [moduleName: string]: unknown;

  private constructor(wire: Wire, timeoutMs: number) {
    this.wire = wire;
    this.timeoutMs = timeoutMs;
  }

  /** tcp:<port>, tcp:<host>:<port>, or stdio:<command ...> */
  static async connect(target: string, timeoutMs = 10_000): Promise<Session> {
    if (target.startsWith("tcp:")) {
      const rest = target.slice(4);
      const [host, port] = rest.includes(":")
        ? [rest.slice(0, rest.lastIndexOf(":")), rest.slice(rest.lastIndexOf(":") + 1)]
        : ["127.0.0.1", rest];
      return Session.connectTcp(Number(port), host, timeoutMs);
    }
    if (target.startsWith("stdio:")) {
      const argv = target.slice(6).trim().split(/\s+/);
      return Session.connectStdio(argv, timeoutMs);
    }
    throw new Error(`unknown connect target ${target}`);
  }

  static async connectTcp(port: number, host = "127.0.0.1", timeoutMs = 10_000): Promise<Session> {
    const sock = await new Promise<net.Socket>((resolve, reject) => {
      const s = net.createConnection({ host, port }, () => resolve(s));
      s.once("error", reject);
    });
    sock.setNoDelay(true);
    const session = new Session(
      { write: (d) => void sock.write(d), close: () => sock.destroy() },
      timeoutMs,
    );
    sock.on("data", (chunk) => session.onBytes(chunk));
    sock.on("close", () => session.failPending(new Error("connection closed")));
    await session.init();
    return session;
  }

  static async connectStdio(argv: string[], timeoutMs = 10_000): Promise<Session> {
    const child: ChildProcess = spawn(argv[0], argv.slice(1), {
      stdio: ["pipe", "pipe", "inherit"],
    });
    const session = new Session(
      {
        write: (d) => void child.stdin!.write(d),
        close: () => {
          child.stdin!.end();
          child.kill();
        },
      },
      timeoutMs,
    );
    child.stdout!.on("data", (chunk: Buffer) => session.onBytes(chunk));
    child.on("exit", () => session.failPending(new Error("node exited")));
    await session.init();
    return session;
  }

  private async init(): Promise<void> {
    const schema = await this.request("node", "get_schema", {}, "schema");
    this.schema = schema as unknown as Schema;
    this.root = this.schema.topicRoot;
    for (const [moduleName, desc] of Object.entries(this.schema.modules)) {
      const proxy: ModuleProxy = {};
      for (const [verb, spec] of Object.entries(desc.commands)) {
        proxy[verb] = (fields: Fields = {}) => this.command(moduleName, verb, fields);
      }
      if (!(moduleName in this)) {
        this[moduleName] = proxy;
      }
    }
  }

  get modules(): string[] {
    return Object.keys(this.schema?.modules ?? {});
  }

  command(moduleName: string, verb: string, fields: Fields = {}): Promise<Fields> {
    try {
      const desc = this.schema?.modules?.[moduleName];
      if (this.schema && (!desc || !(verb in desc.commands))) {
        throw new ValidationError(`no such command ${moduleName}/${verb}`);
      }
      const clean = desc
        ? validateFields(desc.commands[verb], fields, this.schema.enums)
        : fields;
      return this.request(moduleName, verb, clean, verb);
    } catch (err) {
      return Promise.reject(err);
    }
  }

  ping(): Promise<Fields> {
    return this.request("node", "ping", {}, "pong");
  }

  private request(
    moduleName: string,
    verb: string,
    payload: Fields,
    replyVerb: string,
  ): Promise<Fields> {
    const topic = `${this.root}/in/${moduleName}/${verb}`;
    const frame = encodeFrame(topic, payload);
    return new Promise<Fields>((resolve, reject) => {
      const entry: Pending = {
        replyTopic: `${this.root}/out/${moduleName}/${replyVerb}`,
        errorTopics: [
          `${this.root}/out/${moduleName}/error`,
          `${this.root}/out/node/error`,
        ],
        sentTopic: topic,
        resolve,
        reject,
        timer: setTimeout(() => {
          this.pending = this.pending.filter((p) => p !== entry);
          reject(new Error(`timeout waiting for ${moduleName}/${replyVerb}`));
        }, this.timeoutMs),
      };
      this.pending.push(entry);
      this.transcript.push({ dir: "in", topic, payload });
      this.wire.write(frame);
    });
  }

  private onBytes(chunk: Buffer): void {
    for (const frame of this.decoder.feed(chunk)) {
      this.onFrame(frame);
    }
  }

  private onFrame(frame: Frame): void {
    this.transcript.push({ dir: "out", topic: frame.topic, payload: frame.payload as Fields });
    if (frame.topic.endsWith("/packet")) {
      this.data.push(frame.payload as unknown as PacketWire);
      if (this.data.length > DATA_CAPACITY) {
        this.data.splice(0, this.data.length - DATA_CAPACITY);
      }
      return;
    }
    const idx = this.pending.findIndex(
      (p) =>
        frame.topic === p.replyTopic ||
        (p.errorTopics.includes(frame.topic) &&
          (!frame.payload.topic || frame.payload.topic === p.sentTopic)),
    );
    if (idx >= 0) {
      const entry = this.pending.splice(idx, 1)[0];
      clearTimeout(entry.timer);
      if (frame.topic === entry.replyTopic) {
        entry.resolve(frame.payload as Fields);
      } else {
        entry.reject(new Error(String(frame.payload.error ?? "node error")));
      }
      return;
    }
    this.events.push(frame);
    if (this.events.length > DATA_CAPACITY) {
      this.events.splice(0, this.events.length - DATA_CAPACITY);
    }
  }

  private failPending(err: Error): void {
    for (const p of this.pending.splice(0)) {
      clearTimeout(p.timer);
      p.reject(err);
    }
  }

  async waitForData(count: number, timeoutMs = 5_000): Promise<PacketWire[]> {
    const deadline = Date.now() + timeoutMs;
    while (Date.now() < deadline) {
      if (this.data.length >= count) return this.data;
      await sleep(5);
    }
    throw new Error(`timed out waiting for ${count} packet(s)`);
  }

  async waitForEvent(suffix: string, timeoutMs = 5_000): Promise<Frame> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const idx = this.events.findIndex((f) => f.topic.endsWith(suffix));
      if (idx >= 0) return this.events.splice(idx, 1)[0];
      if (Date.now() > deadline) throw new Error(`timed out waiting for ${suffix}`);
      await sleep(5);
    }
  }

  close(): void {
    if (!this.closed) {
      this.closed = true;
      this.failPending(new Error("session closed"));
      this.wire.close();
    }
  }
}

/** Session with the schema-built module proxies visible to scripts. */
export type Q = Session & Record<string, ModuleProxy>;

export function sleep(ms: number): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, ms));
}
