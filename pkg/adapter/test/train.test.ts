import { mkdtempSync, readFileSync, readdirSync, rmSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterEach, describe, expect, it } from "vitest";

import { loadManifest, trainRecords } from "../src/dataset.js";
import { pairsFrom, train, trainingOrder } from "../src/train.js";

const cleanups: string[] = [];

afterEach(() => {
  while (cleanups.length) rmSync(cleanups.pop()!, { recursive: true, force: true });
});

function tempDir(): string {
  const dir = mkdtempSync(join(tmpdir(), "adapter-"));
  cleanups.push(dir);
  return dir;
}

function writeManifest(records: object[]): string {
  const dir = tempDir();
  const path = join(dir, "manifest.json");
  writeFileSync(
    path,
    JSON.stringify({
      name: "tiny",
      query_mode: "ambient-prefixes",
      prefix_preamble: { "": "http://ex.org/" },
      backend: { kind: "local", graph: "graph.ttl" },
      counts: { train: records.filter((r: any) => r.split === "train").length, test: 0 },
      records,
    }),
  );
  return path;
}

const RECORDS = Array.from({ length: 6 }, (_, i) => ({
  id: `t${i + 1}`,
  question: `question number ${i + 1}?`,
  paraphrase: `paraphrased question ${i + 1}?`,
  query: `SELECT ?x WHERE { :s${i + 1} :p ?x . }`,
  split: "train",
}));

describe("train", () => {
  it("writes one checkpoint per interval: 100 epochs every 5 gives 20", () => {
    const out = tempDir();
    const result = train({
      manifestPath: writeManifest(RECORDS),
      runId: "R01",
      epochs: 100,
      checkpointEvery: 5,
      outDir: out,
    });
    expect(result.checkpointEpochs).toHaveLength(20);
    const dirs = readdirSync(out).filter((n) => n.startsWith("epoch-"));
    expect(dirs).toHaveLength(20);
    expect(dirs).toContain("epoch-005");
    expect(dirs).toContain("epoch-100");
  });

  it("schedule arithmetic: 1 epoch gives 0 checkpoints for interval 5, 1 for interval 1", () => {
    const zero = train({
      manifestPath: writeManifest(RECORDS.slice(0, 1)),
      runId: "R01",
      epochs: 1,
      checkpointEvery: 5,
      outDir: tempDir(),
    });
    expect(zero.checkpointEpochs).toEqual([]);
    const one = train({
      manifestPath: writeManifest(RECORDS.slice(0, 1)),
      runId: "R01",
      epochs: 1,
      checkpointEvery: 1,
      outDir: tempDir(),
    });
    expect(one.checkpointEpochs).toEqual([1]);
  });

  it("rejects an interval that does not divide the epochs", () => {
    expect(() =>
      train({ manifestPath: writeManifest(RECORDS), runId: "R01", epochs: 10, checkpointEvery: 3, outDir: tempDir() }),
    ).toThrow(/divide/);
  });

  it("reproduces the harness's golden training order for the bundled fixture", () => {
    const manifest = new URL("../../datasets/organizational/manifest.json", import.meta.url).pathname;
    const dataset = loadManifest(manifest);
    const { seed, records } = trainingOrder(dataset, "R01");
    expect(seed).toBe(99975818);
    expect(records.slice(0, 10).map((r) => r.id)).toEqual([
      "org003", "org048", "org033", "org039", "org046",
      "org045", "org005", "org065", "org022", "org011",
    ]);
    expect(records).toHaveLength(53);
  });

  it("records the training order and memorizes a growing prefix", () => {
    const out = tempDir();
    const manifest = writeManifest(RECORDS);
    train({ manifestPath: manifest, runId: "R02", epochs: 10, checkpointEvery: 5, outDir: out });
    const order = JSON.parse(readFileSync(join(out, "training-order.json"), "utf-8"));
    const dataset = loadManifest(manifest);
    const expected = trainingOrder(dataset, "R02");
    expect(order.order).toEqual(expected.records.map((r) => r.id));
    expect(order.seed).toBe(56899599);

    const half = JSON.parse(readFileSync(join(out, "epoch-005", "model.json"), "utf-8"));
    const full = JSON.parse(readFileSync(join(out, "epoch-010", "model.json"), "utf-8"));
    const allPairs = pairsFrom(expected.records);
    expect(full.pairs).toEqual(allPairs);
    expect(half.pairs).toEqual(allPairs.slice(0, Math.floor(allPairs.length / 2)));
  });

  it("pairs include the paraphrase mapped to the same query", () => {
    const dataset = loadManifest(writeManifest(RECORDS.slice(0, 2)));
    const pairs = pairsFrom(trainRecords(dataset));
    expect(pairs).toHaveLength(4);
    expect(pairs[0].query).toBe(pairs[1].query);
  });
});
