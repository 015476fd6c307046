/**
 * NDJSON protocol endpoint over stdin/stdout.
 *
 * One JSON object per line; requests carry {id, question, dataset, epoch?}.
 * Responses echo the id and carry either {query} or {error}.  The epoch
 * field routes to the matching checkpoint; without one the latest
 * checkpoint answers.  Unknown epochs and model failures produce error
 * responses, never crashes: the harness decides what a failure costs.
 */

import { createInterface } from "node:readline";
import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { StubModelState, infer } from "./stub.js";

export interface CheckpointStore {
  epochs: number[];
  byEpoch: Map<number, StubModelState>;
}

export function loadCheckpoints(dir: string): CheckpointStore {
  const byEpoch = new Map<number, StubModelState>();
  for (const entry of readdirSync(dir, { withFileTypes: true })) {
    const match = /^epoch-(\d+)$/.exec(entry.name);
    if (!entry.isDirectory() || !match) continue;
    const state = JSON.parse(readFileSync(join(dir, entry.name, "model.json"), "utf-8"));
    byEpoch.set(parseInt(match[1], 10), state);
  }
  if (byEpoch.size === 0) {
    throw new Error(`no epoch-NNN checkpoints under ${dir}`);
  }
  return { epochs: [...byEpoch.keys()].sort((a, b) => a - b), byEpoch };
}

export function answer(store: CheckpointStore, request: Record<string, unknown>): Record<string, unknown> {
  const id = request.id;
  if (typeof id !== "string") {
    return { id: null, error: "request without id" };
  }
  const question = request.question;
  if (typeof question !== "string") {
    return { id, error: "request without question" };
  }
  let epoch: number;
  if (request.epoch === undefined || request.epoch === null) {
    epoch = store.epochs[store.epochs.length - 1];
  } else if (typeof request.epoch === "number" && Number.isInteger(request.epoch)) {
    epoch = request.epoch;
  } else {
    return { id, error: `epoch must be an integer, got ${JSON.stringify(request.epoch)}` };
  }
  const state = store.byEpoch.get(epoch);
  if (!state) {
    return { id, error: `no checkpoint for epoch ${epoch}` };
  }
  try {
    return { id, query: infer(state, question) };
  } catch (err) {
    return { id, error: err instanceof Error ? err.message : String(err) };
  }
}

export function serve(checkpointDir: string): void {
  const store = loadCheckpoints(checkpointDir);
  process.stderr.write(`adapter: serving epochs [${store.epochs.join(", ")}] from ${checkpointDir}\n`);
  const lines = createInterface({ input: process.stdin, terminal: false });
  lines.on("line", (line) => {
    const text = line.trim();
    if (!text) return;
    let request: Record<string, unknown>;
    try {
      request = JSON.parse(text);
    } catch {
      process.stdout.write(JSON.stringify({ id: null, error: "request line is not JSON" }) + "\n");
      return;
    }
    process.stdout.write(JSON.stringify(answer(store, request)) + "\n");
  });
}
