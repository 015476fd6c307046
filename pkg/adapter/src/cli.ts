#!/usr/bin/env node
/**
 * adapter CLI
 *
 *   train --manifest PATH --run R01 [--epochs 100] [--checkpoint-every 5] --out DIR
 *   serve --checkpoints DIR
 *   seed LABEL
 */

import { deriveSeed } from "./seeding.js";
import { serve } from "./serve.js";
import { train } from "./train.js";

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>();
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (!arg.startsWith("--")) continue;
    const value = argv[i + 1];
    if (value === undefined || value.startsWith("--")) {
      flags.set(arg.slice(2), "true");
    } else {
      flags.set(arg.slice(2), value);
      i++;
    }
  }
  return flags;
}

function required(flags: Map<string, string>, name: string): string {
  const value = flags.get(name);
  if (value === undefined) {
    process.stderr.write(`error: --${name} is required\n`);
    process.exit(2);
  }
  return value;
}

function main(): void {
  const [command, ...rest] = process.argv.slice(2);
  const flags = parseFlags(rest);
  if (command === "seed") {
    const label = rest.find((a) => !a.startsWith("--"));
    if (!label) {
      process.stderr.write("error: seed needs a run label\n");
      process.exit(2);
    }
    process.stdout.write(String(deriveSeed(label)) + "\n");
    return;
  }
  if (command === "train") {
    const result = train({
      manifestPath: required(flags, "manifest"),
      runId: required(flags, "run"),
      epochs: parseInt(flags.get("epochs") ?? "100", 10),
      checkpointEvery: parseInt(flags.get("checkpoint-every") ?? "5", 10),
      outDir: required(flags, "out"),
    });
    process.stderr.write(
      `trained run with seed ${result.seed}: ${result.checkpointEpochs.length} checkpoints, ` +
        `${result.order.length} training records\n`,
    );
    return;
  }
  if (command === "serve") {
    serve(required(flags, "checkpoints"));
    return;
  }
  process.stderr.write("usage: cli.js <train|serve|seed> [flags]\n");
  process.exit(2);
}

try {
  main();
} catch (err) {
  process.stderr.write(`error: ${err instanceof Error ? err.message : String(err)}\n`);
  process.exit(1);
}
