/**
 * Run-id seeds and the deterministic shuffle, bit-compatible with the
 * harness.
 *
 * The seed is the first eight decimal digits of the lowercase hex SHA-512
 * of the run label followed by a newline (the digest `echo R01 | sha512sum`
 * prints), so R01 -> 99975818 and R02 -> 56899599.  The shuffle is a
 * descending Fisher-Yates driven by SplitMix64 with rejection-sampled
 * index draws; training order must byte-match the harness for every
 * (dataset, run id) pair.
 */

import { createHash } from "node:crypto";

const RUN_ID = /^R\d{2,}$/;
const MASK64 = (1n << 64n) - 1n;

export function validateRunId(label: string): string {
  if (!RUN_ID.test(label)) {
    throw new Error(`run id must look like R01, R02, ...: got ${JSON.stringify(label)}`);
  }
  return label;
}

export function deriveSeed(runId: string): number {
  validateRunId(runId);
  const digest = createHash("sha512").update(runId + "\n", "ascii").digest("hex");
  const digits = digest.replace(/[^0-9]/g, "");
  if (digits.length < 8) {
    throw new Error(`digest of ${runId} carries only ${digits.length} decimal digits`);
  }
  return parseInt(digits.slice(0, 8), 10);
}

export class SplitMix64 {
  private state: bigint;

  constructor(seed: number | bigint) {
    this.state = BigInt(seed) & MASK64;
  }

  nextU64(): bigint {
    this.state = (this.state + 0x9e3779b97f4a7c15n) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    return z ^ (z >> 31n);
  }

  /** Unbiased draw in [0, bound) by rejection sampling. */
  nextBelow(bound: number): number {
    if (bound <= 0) throw new Error("bound must be positive");
    const b = BigInt(bound);
    const limit = (1n << 64n) - ((1n << 64n) % b);
    for (;;) {
      const value = this.nextU64();
      if (value < limit) return Number(value % b);
    }
  }
}

export function shuffled<T>(items: readonly T[], seed: number): T[] {
  const out = items.slice();
  const rng = new SplitMix64(seed);
  for (let i = out.length - 1; i > 0; i--) {
    const j = rng.nextBelow(i + 1);
    [out[i], out[j]] = [out[j], out[i]];
  }
  return out;
}
