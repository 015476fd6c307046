/**
 * The CPU stub model: memorizes (question -> query) pairs and answers with
 * the query of the nearest memorized question by Jaccard token overlap,
 * ties broken by memorization order.  It exists so the full train ->
 * checkpoint -> serve -> evaluate loop runs in CI without GPUs; it is not a
 * language model and does not pretend to be one.
 */

export interface TrainingPair {
  question: string;
  query: string;
}

export interface StubModelState {
  kind: "stub-retrieval";
  epoch: number;
  pairs: TrainingPair[];
}

function tokens(text: string): Set<string> {
  return new Set(
    text
      .toLowerCase()
      .split(/[^0-9a-z]+/)
      .filter(Boolean),
  );
}

function jaccard(a: Set<string>, b: Set<string>): number {
  if (a.size === 0 && b.size === 0) return 1;
  let intersection = 0;
  for (const token of a) if (b.has(token)) intersection++;
  const union = a.size + b.size - intersection;
  return union === 0 ? 1 : intersection / union;
}

export function infer(state: StubModelState, question: string): string {
  if (state.pairs.length === 0) {
    throw new Error("stub model has no memorized pairs");
  }
  const queryTokens = tokens(question);
  let best = state.pairs[0];
  let bestScore = -1;
  for (const pair of state.pairs) {
    const score = jaccard(queryTokens, tokens(pair.question));
    if (score > bestScore) {
      best = pair;
      bestScore = score;
    }
  }
  return best.query;
}
