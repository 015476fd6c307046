/** Reading the harness's dataset manifests (the adapter's only input format). */

import { readFileSync } from "node:fs";

export interface DatasetRecord {
  id: string;
  question: string;
  paraphrase?: string;
  query: string;
  split: "train" | "test";
  unsupported?: boolean;
}

export interface Dataset {
  name: string;
  records: DatasetRecord[];
}

export function loadManifest(path: string): Dataset {
  const raw = JSON.parse(readFileSync(path, "utf-8"));
  if (!raw || typeof raw.name !== "string" || !Array.isArray(raw.records)) {
    throw new Error(`${path} is not a dataset manifest`);
  }
  const seen = new Set<string>();
  for (const record of raw.records) {
    if (typeof record.id !== "string" || typeof record.question !== "string" || typeof record.query !== "string") {
      throw new Error(`${path}: record missing id/question/query`);
    }
    if (seen.has(record.id)) throw new Error(`${path}: duplicate record id ${record.id}`);
    seen.add(record.id);
  }
  return { name: raw.name, records: raw.records };
}

/** Train split ordered by record id, the fixed order the shuffle permutes. */
export function trainRecords(dataset: Dataset): DatasetRecord[] {
  return dataset.records
    .filter((r) => r.split === "train")
    .sort((a, b) => (a.id < b.id ? -1 : a.id > b.id ? 1 : 0));
}
