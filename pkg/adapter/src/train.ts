/**
 * Training driver.
 *
 * Fine-tuning runs for a fixed number of epochs and snapshots a checkpoint
 * every `checkpointEvery` epochs into `epoch-NNN/` directories.  The
 * training order is exactly the harness's shuffle: train records sorted by
 * id, permuted by SplitMix64 Fisher-Yates under the run's derived seed.
 * Each record contributes its original question and its paraphrase (when
 * present) as two inputs mapping to the same gold query.
 *
 * The stub model "learns" by memorizing a growing prefix of the training
 * stream: at epoch e it has seen floor(pairs * e / epochs) pairs, so
 * early checkpoints answer poorly and later ones well, giving the harness
 * real per-epoch curves to plot.  Swapping in an actual seq2seq trainer
 * means replacing `snapshotAt` while keeping the checkpoint layout.
 */

import { mkdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";

import { Dataset, DatasetRecord, loadManifest, trainRecords } from "./dataset.js";
import { deriveSeed, shuffled, validateRunId } from "./seeding.js";
import { StubModelState, TrainingPair } from "./stub.js";

export interface TrainJob {
  manifestPath: string;
  runId: string;
  epochs: number; // default 100
  checkpointEvery: number; // default 5
  outDir: string;
  hyperparameters?: Record<string, unknown>;
}

export interface TrainResult {
  seed: number;
  order: string[];
  checkpointEpochs: number[];
}

export function trainingOrder(dataset: Dataset, runId: string): { seed: number; records: DatasetRecord[] } {
  const seed = deriveSeed(runId);
  return { seed, records: shuffled(trainRecords(dataset), seed) };
}

export function pairsFrom(records: readonly DatasetRecord[]): TrainingPair[] {
  const pairs: TrainingPair[] = [];
  for (const record of records) {
    pairs.push({ question: record.question, query: record.query });
    if (record.paraphrase) {
      pairs.push({ question: record.paraphrase, query: record.query });
    }
  }
  return pairs;
}

function snapshotAt(pairs: readonly TrainingPair[], epoch: number, epochs: number): StubModelState {
  const seen = Math.floor((pairs.length * epoch) / epochs);
  return { kind: "stub-retrieval", epoch, pairs: pairs.slice(0, seen) };
}

export function train(job: TrainJob): TrainResult {
  validateRunId(job.runId);
  if (job.epochs <= 0 || job.checkpointEvery <= 0) {
    throw new Error("epochs and checkpoint-every must be positive");
  }
  // an interval longer than the run legitimately yields zero checkpoints;
  // a shorter one must divide the epochs or the final snapshot is lost
  if (job.checkpointEvery <= job.epochs && job.epochs % job.checkpointEvery !== 0) {
    throw new Error(`checkpoint-every (${job.checkpointEvery}) must divide epochs (${job.epochs})`);
  }
  const dataset = loadManifest(job.manifestPath);
  const { seed, records } = trainingOrder(dataset, job.runId);
  const pairs = pairsFrom(records);

  mkdirSync(job.outDir, { recursive: true });
  writeFileSync(
    join(job.outDir, "training-order.json"),
    JSON.stringify({ run: job.runId, seed, order: records.map((r) => r.id) }, null, 2) + "\n",
  );

  const checkpointEpochs: number[] = [];
  for (let epoch = job.checkpointEvery; epoch <= job.epochs; epoch += job.checkpointEvery) {
    const dir = join(job.outDir, `epoch-${String(epoch).padStart(3, "0")}`);
    mkdirSync(dir, { recursive: true });
    const state = snapshotAt(pairs, epoch, job.epochs);
    writeFileSync(
      join(dir, "model.json"),
      JSON.stringify(
        {
          ...state,
          dataset: dataset.name,
          run: job.runId,
          seed,
          hyperparameters: job.hyperparameters ?? {},
        },
        null,
        2,
      ) + "\n",
    );
    checkpointEpochs.push(epoch);
  }
  return { seed, order: records.map((r) => r.id), checkpointEpochs };
}
